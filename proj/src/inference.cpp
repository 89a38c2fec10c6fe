#include "xauc/inference.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "xauc/errors.hpp"
#include "xauc/metrics.hpp"
#include "xauc/numeric.hpp"

namespace xauc {

namespace {

// Half-tie placement of each element of `from` within sorted `within`:
// (count below + half the count equal) / |within|.
std::vector<double> placements(std::span<const double> from,
                               std::span<const double> within) {
  std::vector<double> out;
  out.reserve(from.size());
  const double n = static_cast<double>(within.size());
  for (double v : from) {
    const auto lo = std::lower_bound(within.begin(), within.end(), v);
    const auto hi = std::upper_bound(within.begin(), within.end(), v);
    const double below = static_cast<double>(lo - within.begin());
    const double tied = static_cast<double>(hi - lo);
    out.push_back((below + 0.5 * tied) / n);
  }
  return out;
}

}  // namespace

VarianceEstimate delong_se(std::span<const double> pos,
                           std::span<const double> neg, TiePolicy ties) {
  if (pos.size() < 2 || neg.size() < 2) {
    throw InsufficientSamples(
        "delong_se: need at least 2 samples per class, got " +
        std::to_string(pos.size()) + "/" + std::to_string(neg.size()));
  }
  // V10(i): placement of pos_i within neg; V01(j): one minus placement of
  // neg_j within pos. Means of both equal the half-tie AUC.
  const std::vector<double> v10 = placements(pos, neg);
  std::vector<double> v01 = placements(neg, pos);
  for (double& v : v01) v = 1.0 - v;

  VarianceEstimate est;
  est.method = VarianceMethod::delong;
  est.n_pos = pos.size();
  est.n_neg = neg.size();
  est.point = auc(pos, neg, ties);
  est.se = std::sqrt(sample_variance(v10) / static_cast<double>(pos.size()) +
                     sample_variance(v01) / static_cast<double>(neg.size()));
  est.tie_discrepancy = est.point != mean(v10);
  return est;
}

VarianceEstimate bootstrap_se(std::span<const double> pos,
                              std::span<const double> neg, TiePolicy ties,
                              std::size_t resamples, std::uint64_t seed) {
  if (pos.empty() || neg.empty()) {
    throw InsufficientSamples("bootstrap_se: empty class");
  }
  if (resamples < 100) {
    throw InsufficientSamples("bootstrap_se: need >= 100 resamples, got " +
                              std::to_string(resamples));
  }
  std::vector<double> stats;
  stats.reserve(resamples);
  std::vector<double> rpos(pos.size()), rneg(neg.size());
  for (std::size_t k = 0; k < resamples; ++k) {
    Rng rng(mix_seed(seed, k));
    for (auto& v : rpos) v = pos[rng.uniform_below(pos.size())];
    for (auto& v : rneg) v = neg[rng.uniform_below(neg.size())];
    std::sort(rpos.begin(), rpos.end());
    std::sort(rneg.begin(), rneg.end());
    stats.push_back(auc(rpos, rneg, ties));
  }
  VarianceEstimate est;
  est.method = VarianceMethod::bootstrap;
  est.n_pos = pos.size();
  est.n_neg = neg.size();
  est.point = auc(pos, neg, ties);
  est.se = stats.size() > 1 ? sample_sd(stats) : 0.0;
  const double half = auc(pos, neg, TiePolicy::half);
  est.tie_discrepancy = est.point != half;
  return est;
}

}  // namespace xauc
