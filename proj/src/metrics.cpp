#include "xauc/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "xauc/errors.hpp"
#include "xauc/numeric.hpp"

namespace xauc {

PairCounts count_order_pairs(std::span<const double> pos,
                             std::span<const double> neg) {
  PairCounts counts;
  counts.total =
      static_cast<double>(pos.size()) * static_cast<double>(neg.size());
  // lo: negatives strictly below the current positive, hi: <= it. Both
  // pointers only move forward because pos is ascending.
  std::size_t lo = 0;
  std::size_t hi = 0;
  std::uint64_t greater = 0;
  std::uint64_t tied = 0;
  for (double p : pos) {
    while (lo < neg.size() && neg[lo] < p) ++lo;
    if (hi < lo) hi = lo;
    while (hi < neg.size() && neg[hi] <= p) ++hi;
    greater += lo;
    tied += hi - lo;
  }
  counts.greater = static_cast<double>(greater);
  counts.tied = static_cast<double>(tied);
  return counts;
}

double auc(std::span<const double> pos, std::span<const double> neg,
           TiePolicy ties) {
  if (pos.empty() || neg.empty()) {
    throw EmptyClass("auc: empty " +
                     std::string(pos.empty() ? "positive" : "negative") +
                     " class");
  }
  return count_order_pairs(pos, neg).value(ties);
}

double xauc(const GroupedScores& g, const std::string& a,
            const std::string& b, TiePolicy ties) {
  return auc(g.cell(a, 1), g.cell(b, 0), ties);
}

double delta_xauc(const GroupedScores& g, const std::string& a,
                  const std::string& b, TiePolicy ties) {
  return xauc(g, a, b, ties) - xauc(g, b, a, ties);
}

double balanced_xauc(const GroupedScores& g, BalancedSide side,
                     const std::string& group, TiePolicy ties) {
  if (side == BalancedSide::pooled_pos) {
    return auc(g.pooled(1), g.cell(group, 0), ties);
  }
  return auc(g.cell(group, 1), g.pooled(0), ties);
}

AucDecomposition decompose_auc(const GroupedScores& g, TiePolicy ties) {
  const auto pooled_pos = g.pooled(1);
  const auto pooled_neg = g.pooled(0);
  if (pooled_pos.empty() || pooled_neg.empty()) {
    throw EmptyClass("decompose_auc: a pooled class is empty");
  }
  const double n1 = static_cast<double>(pooled_pos.size());
  const double n0 = static_cast<double>(pooled_neg.size());

  AucDecomposition d;
  d.pooled_auc = auc(pooled_pos, pooled_neg, ties);

  KahanSum pairwise, by_pos, by_neg;
  for (const auto& ga : g.groups()) {
    const double w1 = static_cast<double>(g.count(ga, 1)) / n1;
    const double w0 = static_cast<double>(g.count(ga, 0)) / n0;
    if (w1 > 0.0) {
      by_pos.add(w1 * auc(g.cell(ga, 1), pooled_neg, ties));
    }
    if (w0 > 0.0) {
      by_neg.add(w0 * auc(pooled_pos, g.cell(ga, 0), ties));
    }
    for (const auto& gb : g.groups()) {
      const double w0b = static_cast<double>(g.count(gb, 0)) / n0;
      if (w1 > 0.0 && w0b > 0.0) {
        pairwise.add(w1 * w0b * xauc(g, ga, gb, ties));
      }
    }
  }
  d.pairwise = pairwise.value();
  d.by_positive = by_pos.value();
  d.by_negative = by_neg.value();
  return d;
}

std::vector<double> conditional_xauc(const GroupedScores& g,
                                     const std::string& a,
                                     const std::string& b, TiePolicy ties) {
  const auto& pos = g.cell(a, 1);
  const auto& neg = g.cell(b, 0);
  const double n1 = static_cast<double>(pos.size());
  std::vector<double> accuracies;
  accuracies.reserve(neg.size());
  for (double r : neg) {
    // positives strictly above r, plus half credit for ties if requested
    const auto above =
        pos.end() - std::upper_bound(pos.begin(), pos.end(), r);
    double credit = static_cast<double>(above);
    if (ties == TiePolicy::half) {
      const auto tied = std::upper_bound(pos.begin(), pos.end(), r) -
                        std::lower_bound(pos.begin(), pos.end(), r);
      credit += 0.5 * static_cast<double>(tied);
    }
    accuracies.push_back(credit / n1);
  }
  return accuracies;
}

namespace {

// Mean over cell (a,1) of F_0^b evaluated with the <= convention.
double mean_rank(const GroupedScores& g, const std::string& a,
                 const std::string& b) {
  const PairCounts c = count_order_pairs(g.cell(a, 1), g.cell(b, 0));
  return (c.greater + c.tied) / c.total;
}

}  // namespace

double average_rank_disparity(const GroupedScores& g, const std::string& a,
                              const std::string& b) {
  return mean_rank(g, a, b) - mean_rank(g, b, a);
}

double brier_score(std::span<const double> scores,
                   std::span<const int> labels) {
  if (scores.size() != labels.size()) {
    throw LengthMismatch("brier_score: " + std::to_string(scores.size()) +
                         " scores vs " + std::to_string(labels.size()) +
                         " labels");
  }
  if (scores.empty()) {
    throw EmptyInput("brier_score: no samples");
  }
  KahanSum acc;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!(scores[i] >= 0.0 && scores[i] <= 1.0)) {
      throw ScoreOutOfRange("brier_score: score " +
                            std::to_string(scores[i]) + " at index " +
                            std::to_string(i) + " outside [0, 1]");
    }
    const double d = scores[i] - static_cast<double>(labels[i]);
    acc.add(d * d);
  }
  return acc.value() / static_cast<double>(scores.size());
}

}  // namespace xauc
