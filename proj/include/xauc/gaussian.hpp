#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "xauc/samples.hpp"

namespace xauc {

/// Standard normal CDF.
double normal_cdf(double z);

struct GaussianCell {
  double mean = 0.0;
  double variance = 1.0;  // strictly positive
};

/// (mean, variance) of the score for one group's negatives and positives.
struct GaussianGroupParams {
  GaussianCell neg;  // Y = 0
  GaussianCell pos;  // Y = 1
};

/// Per-group Gaussian score model: R | Y=y, A=a ~ N(mu_ay, sigma^2_ay).
class GaussianGroupModel {
 public:
  /// Throws std::invalid_argument unless both variances are positive and
  /// all parameters finite.
  void set_group(const std::string& group, const GaussianGroupParams& p);

  const GaussianGroupParams& group(const std::string& name) const;
  const GaussianCell& cell(const std::string& group, int outcome) const;
  std::vector<std::string> groups() const;

 private:
  std::map<std::string, GaussianGroupParams> groups_;
};

/// Phi((mu_a1 - mu_b0) / sqrt(var_a1 + var_b0)).
double closed_form_xauc(const GaussianGroupModel& m, const std::string& a,
                        const std::string& b);

/// closed_form_xauc(a,b) - closed_form_xauc(b,a).
double closed_form_delta_xauc(const GaussianGroupModel& m,
                              const std::string& a, const std::string& b);

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
};

/// Search space for the equal-AUC disparity maximization: a grid over
/// (mu_b0, mu_b1, var_b1); var_b0 is solved from the equal-within-AUC
/// constraint and points leaving (0, var_max] are discarded.
struct DisparitySearchOptions {
  Interval mu_b0{0.0, 1.0};
  Interval mu_b1{0.0, 1.0};
  Interval var_b1{0.01, 0.5};
  double var_max = 0.5;
  int resolution = 41;  // grid points per axis, >= 10
  // Keeps only "peaked" candidates with mu_b1 > 0.5 > mu_b0.
  bool require_peaked = false;
};

struct DisparitySearchResult {
  GaussianGroupParams best;
  double delta_xauc = 0.0;  // signed disparity at the optimum
  double objective = 0.0;   // |delta_xauc|
};

/// Maximizes |delta xAUC| over group-b parameters subject to group b
/// matching group a's within-group AUC. Deterministic: exhaustive grid
/// with lexicographic tie-breaking on (mu_b0, mu_b1, var_b1). Throws
/// InfeasibleBounds when no grid point satisfies the constraint.
DisparitySearchResult equal_auc_disparity_search(
    const GaussianGroupParams& fixed_a, const DisparitySearchOptions& opts);

/// Draws `per_cell` scores for every (group, outcome) cell. Each cell's
/// stream is derived from (seed, group, outcome), so sampling order does
/// not matter.
GroupedScores sample_scores(const GaussianGroupModel& m,
                            std::size_t per_cell, std::uint64_t seed);

}  // namespace xauc
