#include "xauc/gaussian.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "xauc/errors.hpp"
#include "xauc/numeric.hpp"

namespace xauc {

double normal_cdf(double z) {
  return 0.5 * std::erfc(-z / std::sqrt(2.0));
}

namespace {

void validate_cell(const GaussianCell& c, const std::string& what) {
  if (!(c.variance > 0.0) || !std::isfinite(c.variance) ||
      !std::isfinite(c.mean)) {
    throw std::invalid_argument("GaussianGroupModel: " + what +
                                " needs finite mean and variance > 0");
  }
}

}  // namespace

void GaussianGroupModel::set_group(const std::string& group,
                                   const GaussianGroupParams& p) {
  validate_cell(p.neg, group + " negatives");
  validate_cell(p.pos, group + " positives");
  groups_[group] = p;
}

const GaussianGroupParams& GaussianGroupModel::group(
    const std::string& name) const {
  auto it = groups_.find(name);
  if (it == groups_.end()) {
    throw MissingGroup("GaussianGroupModel: unknown group " + name);
  }
  return it->second;
}

const GaussianCell& GaussianGroupModel::cell(const std::string& g,
                                             int outcome) const {
  const auto& p = group(g);
  return outcome == 1 ? p.pos : p.neg;
}

std::vector<std::string> GaussianGroupModel::groups() const {
  std::vector<std::string> names;
  names.reserve(groups_.size());
  for (const auto& [name, p] : groups_) names.push_back(name);
  return names;
}

namespace {

double pair_xauc(const GaussianCell& pos, const GaussianCell& neg) {
  return normal_cdf((pos.mean - neg.mean) /
                    std::sqrt(pos.variance + neg.variance));
}

}  // namespace

double closed_form_xauc(const GaussianGroupModel& m, const std::string& a,
                        const std::string& b) {
  return pair_xauc(m.cell(a, 1), m.cell(b, 0));
}

double closed_form_delta_xauc(const GaussianGroupModel& m,
                              const std::string& a, const std::string& b) {
  return closed_form_xauc(m, a, b) - closed_form_xauc(m, b, a);
}

namespace {

std::vector<double> linspace(const Interval& iv, int n) {
  if (iv.hi < iv.lo) {
    throw InfeasibleBounds("disparity search: interval with hi < lo");
  }
  if (iv.hi == iv.lo) return {iv.lo};
  std::vector<double> xs(n);
  for (int i = 0; i < n; ++i) {
    xs[i] = iv.lo + (iv.hi - iv.lo) * static_cast<double>(i) /
                        static_cast<double>(n - 1);
  }
  return xs;
}

}  // namespace

DisparitySearchResult equal_auc_disparity_search(
    const GaussianGroupParams& fixed_a, const DisparitySearchOptions& opts) {
  if (opts.resolution < 10) {
    throw std::invalid_argument(
        "disparity search: resolution must be >= 10 per axis");
  }
  validate_cell(fixed_a.neg, "group-a negatives");
  validate_cell(fixed_a.pos, "group-a positives");

  // The equal-AUC level curve fixes (mu_b0 - mu_b1)/sqrt(var_b1 + var_b0)
  // to group a's separation ratio c, so var_b0 is determined by the grid
  // coordinates: var_b0 = ((mu_b0 - mu_b1)/c)^2 - var_b1.
  const double c = (fixed_a.neg.mean - fixed_a.pos.mean) /
                   std::sqrt(fixed_a.pos.variance + fixed_a.neg.variance);

  const auto mu0_grid = linspace(opts.mu_b0, opts.resolution);
  const auto mu1_grid = linspace(opts.mu_b1, opts.resolution);
  const auto var1_grid = linspace(opts.var_b1, opts.resolution);

  bool found = false;
  DisparitySearchResult best;
  for (double mu0 : mu0_grid) {
    for (double mu1 : mu1_grid) {
      if (opts.require_peaked && !(mu1 > 0.5 && mu0 < 0.5)) continue;
      const double d = mu0 - mu1;
      for (double var1 : var1_grid) {
        double var0;
        if (c == 0.0) {
          if (d != 0.0) continue;
          var0 = var1;
        } else {
          const double s = d / c;
          if (s <= 0.0) continue;
          var0 = s * s - var1;
          if (!(var0 > 0.0) || var0 > opts.var_max) continue;
        }
        const GaussianGroupParams b{{mu0, var0}, {mu1, var1}};
        const double delta = pair_xauc(fixed_a.pos, b.neg) -
                             pair_xauc(b.pos, fixed_a.neg);
        const double objective = std::abs(delta);
        // Grid order is lexicographic in (mu_b0, mu_b1, var_b1); strict
        // improvement keeps the earliest maximizer.
        if (!found || objective > best.objective) {
          found = true;
          best = {b, delta, objective};
        }
      }
    }
  }
  if (!found) {
    throw InfeasibleBounds(
        "disparity search: no grid point satisfies the equal-AUC "
        "constraint within the variance bound");
  }
  return best;
}

GroupedScores sample_scores(const GaussianGroupModel& m,
                            std::size_t per_cell, std::uint64_t seed) {
  GroupedScores out;
  std::uint64_t stream = 0;
  for (const auto& name : m.groups()) {
    for (int y : {0, 1}) {
      const GaussianCell& cell = m.cell(name, y);
      Rng rng(mix_seed(seed, stream++));
      std::vector<double> scores(per_cell);
      const double sd = std::sqrt(cell.variance);
      for (auto& s : scores) s = rng.normal(cell.mean, sd);
      out.add_cell(name, y, std::move(scores));
    }
  }
  return out;
}

}  // namespace xauc
