// Independent reference implementations used only to check the library:
// O(n^2) pair counting, a series evaluation of the normal CDF, and small
// random-instance generators. Nothing here may call the code under test.
#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "xauc/samples.hpp"

namespace oracle {

// Exhaustive pair counting, both tie policies.
inline double brute_auc(std::span<const double> pos,
                        std::span<const double> neg, xauc::TiePolicy ties) {
  double credit = 0.0;
  for (double p : pos) {
    for (double n : neg) {
      if (p > n) {
        credit += 1.0;
      } else if (p == n && ties == xauc::TiePolicy::half) {
        credit += 0.5;
      }
    }
  }
  return credit / (static_cast<double>(pos.size()) *
                   static_cast<double>(neg.size()));
}

inline double brute_xauc(const xauc::GroupedScores& g, const std::string& a,
                         const std::string& b, xauc::TiePolicy ties) {
  return brute_auc(g.cell(a, 1), g.cell(b, 0), ties);
}

// Standard normal CDF from the Maclaurin series
// Phi(x) = 1/2 + phi(x) * sum_{k>=0} x^(2k+1) / (1*3*...*(2k+1)),
// accurate far below 1e-12 for |x| <= 8.
inline double series_normal_cdf(double x) {
  if (x < -8.5) return 0.0;
  if (x > 8.5) return 1.0;
  double term = x;
  double sum = x;
  for (int k = 1; k < 400; ++k) {
    term *= x * x / (2.0 * k + 1.0);
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  const double pdf = std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI);
  return 0.5 + pdf * sum;
}

// Random scored samples over `n_groups` groups. With quantize set,
// scores land on a coarse lattice so ties are frequent.
inline std::vector<xauc::ScoredSample> random_samples(std::mt19937_64& gen,
                                                      std::size_t n,
                                                      int n_groups,
                                                      bool quantize) {
  std::uniform_real_distribution<double> score(0.0, 1.0);
  std::uniform_int_distribution<int> outcome(0, 1);
  std::uniform_int_distribution<int> group(0, n_groups - 1);
  std::vector<xauc::ScoredSample> samples(n);
  for (auto& s : samples) {
    double v = score(gen);
    if (quantize) v = std::round(v * 8.0) / 8.0;
    s = {v, outcome(gen), std::string(1, static_cast<char>('a' + group(gen)))};
  }
  return samples;
}

// Ensures every (group, outcome) cell is populated before handing the
// samples over, so metric preconditions hold.
inline std::vector<xauc::ScoredSample> random_complete_samples(
    std::mt19937_64& gen, std::size_t n, int n_groups, bool quantize) {
  auto samples = random_samples(gen, n, n_groups, quantize);
  std::uniform_real_distribution<double> score(0.0, 1.0);
  for (int g = 0; g < n_groups; ++g) {
    for (int y : {0, 1}) {
      samples.push_back(
          {score(gen), y, std::string(1, static_cast<char>('a' + g))});
    }
  }
  return samples;
}

}  // namespace oracle
