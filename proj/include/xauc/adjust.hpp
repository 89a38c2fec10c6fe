#pragma once

#include <string>
#include <variant>
#include <vector>

#include "xauc/report.hpp"
#include "xauc/samples.hpp"

namespace xauc {

struct IdentityTransform {};

/// x -> 1 / (1 + exp(-(alpha x + beta))); alpha >= 0 keeps it monotone
/// nondecreasing (alpha == 0 collapses the group to a constant).
struct LogisticTransform {
  double alpha = 1.0;
  double beta = 0.0;
};

/// Piecewise-linear nondecreasing map through (in_knots[i], out_knots[i]),
/// clamped to the first/last output outside the knot range.
struct QuantileMapTransform {
  std::vector<double> in_knots;
  std::vector<double> out_knots;
};

/// A monotone rescoring applied to a single group's scores (both outcome
/// cells). Strictly increasing transforms preserve that group's
/// within-group AUC; only cross-group comparisons move.
struct MonotoneTransform {
  std::string target_group;
  std::variant<IdentityTransform, LogisticTransform, QuantileMapTransform>
      fn{IdentityTransform{}};

  double operator()(double score) const;
};

/// Returns a copy of g with the target group's scores transformed.
/// Throws MissingGroup when the target has no cells.
GroupedScores apply_transform(const GroupedScores& g,
                              const MonotoneTransform& t);

struct LogisticAdjustment {
  double alpha = 0.0;
  double beta = 0.0;
  std::string target_group;
  double objective = 0.0;  // |delta xAUC| at alpha
  AuditReport adjusted;
};

/// Minimizes |delta xAUC| of a two-group audit over the logistic family
/// applied to target_group: a dense alpha grid followed by golden-section
/// refinement of the best bracket. The objective is piecewise constant
/// (finitely many pair reorderings), so ties go to the smallest alpha.
LogisticAdjustment fit_logistic_adjustment(
    const GroupedScores& g, const std::string& target_group,
    double alpha_lo = 0.0, double alpha_hi = 5.0, double beta = -2.0,
    int resolution = 501, TiePolicy ties = TiePolicy::strict);

/// Quantile map sending the moved group's positive-score distribution
/// onto the reference group's, equalizing TPR at every shared threshold
/// level. Piecewise-linear between order statistics, clamped outside.
MonotoneTransform eqop_transform(const GroupedScores& g,
                                 const std::string& reference_group,
                                 const std::string& moved_group);

struct EqopIdentityCheck {
  double delta_after = 0.0;  // delta xAUC(a, b) after the transform
  double auc_gap = 0.0;      // AUC^b - AUC^a before the transform
  double residual = 0.0;     // delta_after - auc_gap
  // Largest empirical CDF step among the two positive cells; on coarse
  // discrete data the residual can be of this order.
  double discreteness_bound = 0.0;
};

/// Applies eqop_transform(g, a, b) and reports how closely the adjusted
/// disparity matches AUC^b - AUC^a.
EqopIdentityCheck verify_eqop_identity(const GroupedScores& g,
                                       const std::string& a,
                                       const std::string& b,
                                       TiePolicy ties = TiePolicy::half);

}  // namespace xauc
