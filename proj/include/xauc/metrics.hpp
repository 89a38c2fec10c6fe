#pragma once

#include <span>
#include <string>
#include <vector>

#include "xauc/samples.hpp"

namespace xauc {

/// Exact pair counts between a positive and a negative sample, both
/// sorted ascending. Counts are integers below 2^53, so the doubles are
/// exact and every AUC value is correct to one rounding.
struct PairCounts {
  double greater = 0.0;  // pairs with pos > neg
  double tied = 0.0;     // pairs with pos == neg
  double total = 0.0;    // |pos| * |neg|

  double value(TiePolicy ties) const {
    const double credit =
        ties == TiePolicy::half ? greater + 0.5 * tied : greater;
    return credit / total;
  }
};

/// Single merge pass over two sorted vectors; O(|pos| + |neg|).
PairCounts count_order_pairs(std::span<const double> pos,
                             std::span<const double> neg);

/// Probability that a random positive outranks a random negative.
/// Both vectors must be sorted ascending and nonempty (EmptyClass).
double auc(std::span<const double> pos, std::span<const double> neg,
           TiePolicy ties);

/// Pr[R_1^a > R_0^b]: positives of group a against negatives of group b.
/// xauc(g, a, a) is the within-group AUC of a.
double xauc(const GroupedScores& g, const std::string& a,
            const std::string& b, TiePolicy ties);

/// xauc(a,b) - xauc(b,a); antisymmetric in (a,b).
double delta_xauc(const GroupedScores& g, const std::string& a,
                  const std::string& b, TiePolicy ties);

/// Which side of the comparison is pooled across groups in the balanced
/// variants: pooled_pos compares all positives against one group's
/// negatives, pooled_neg one group's positives against all negatives.
enum class BalancedSide { pooled_pos, pooled_neg };

double balanced_xauc(const GroupedScores& g, BalancedSide side,
                     const std::string& group, TiePolicy ties);

/// Pooled AUC and its three weighted reconstructions from cross-group
/// terms; the class-conditional weights are empirical. Each
/// reconstruction equals pooled_auc up to accumulated rounding (< 1e-12).
struct AucDecomposition {
  double pooled_auc = 0.0;
  double pairwise = 0.0;     // sum_b w0(b) sum_a w1(a) xauc(a, b)
  double by_positive = 0.0;  // sum_a w1(a) xauc over pooled negatives
  double by_negative = 0.0;  // sum_b w0(b) xauc of pooled positives
};

AucDecomposition decompose_auc(const GroupedScores& g, TiePolicy ties);

/// Per-instance ranking accuracies for the negatives of group b: entry j
/// is the fraction of group-a positives ranked above the j-th smallest
/// score in cell (b, 0). The mean equals xauc(g, a, b, ties).
std::vector<double> conditional_xauc(const GroupedScores& g,
                                     const std::string& a,
                                     const std::string& b, TiePolicy ties);

/// E[F_0^b(R_1^a)] - E[F_0^a(R_1^b)] with empirical <=-convention CDFs.
/// Equals delta_xauc under the strict policy when no cross-group ties are
/// present; with ties the two differ by at most the tie mass over the
/// cell size.
double average_rank_disparity(const GroupedScores& g, const std::string& a,
                              const std::string& b);

/// Mean squared deviation of probabilistic scores from binary labels.
/// Scores must lie in [0, 1] (ScoreOutOfRange) and lengths must agree
/// (LengthMismatch).
double brier_score(std::span<const double> scores,
                   std::span<const int> labels);

}  // namespace xauc
