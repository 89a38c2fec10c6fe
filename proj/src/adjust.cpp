#include "xauc/adjust.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "xauc/errors.hpp"
#include "xauc/metrics.hpp"

namespace xauc {

namespace {

double logistic_apply(const LogisticTransform& t, double x) {
  return 1.0 / (1.0 + std::exp(-(t.alpha * x + t.beta)));
}

double quantile_map_apply(const QuantileMapTransform& t, double x) {
  const auto& in = t.in_knots;
  const auto& out = t.out_knots;
  if (x <= in.front()) return out.front();
  if (x >= in.back()) return out.back();
  const auto it = std::upper_bound(in.begin(), in.end(), x);
  const std::size_t j = static_cast<std::size_t>(it - in.begin());
  const double x0 = in[j - 1], x1 = in[j];
  const double y0 = out[j - 1], y1 = out[j];
  return y0 + (y1 - y0) * (x - x0) / (x1 - x0);
}

}  // namespace

double MonotoneTransform::operator()(double score) const {
  return std::visit(
      [&](const auto& t) -> double {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, IdentityTransform>) {
          return score;
        } else if constexpr (std::is_same_v<T, LogisticTransform>) {
          return logistic_apply(t, score);
        } else {
          return quantile_map_apply(t, score);
        }
      },
      fn);
}

GroupedScores apply_transform(const GroupedScores& g,
                              const MonotoneTransform& t) {
  if (const auto* lt = std::get_if<LogisticTransform>(&t.fn);
      lt && lt->alpha < 0.0) {
    throw std::invalid_argument("apply_transform: logistic alpha must be >= 0");
  }
  bool target_seen = false;
  GroupedScores out;
  for (const auto& group : g.groups()) {
    for (int y : {0, 1}) {
      if (!g.has_cell(group, y)) continue;
      std::vector<double> scores = g.cell(group, y);
      if (group == t.target_group) {
        target_seen = true;
        for (double& s : scores) s = t(s);
      }
      out.add_cell(group, y, std::move(scores));
    }
  }
  if (!target_seen) {
    throw MissingGroup("apply_transform: group " + t.target_group +
                       " not present");
  }
  return out;
}

namespace {

// |delta xAUC| between the target group (cells passed transformed) and
// the other group. The pair order does not matter for the magnitude.
double adjustment_objective(std::span<const double> target_pos,
                            std::span<const double> target_neg,
                            std::span<const double> other_pos,
                            std::span<const double> other_neg,
                            TiePolicy ties) {
  return std::abs(auc(target_pos, other_neg, ties) -
                  auc(other_pos, target_neg, ties));
}

std::vector<double> transform_sorted(std::span<const double> xs,
                                     const LogisticTransform& t) {
  std::vector<double> out(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) out[i] = logistic_apply(t, xs[i]);
  // monotone nondecreasing map of a sorted vector stays sorted
  return out;
}

}  // namespace

LogisticAdjustment fit_logistic_adjustment(const GroupedScores& g,
                                           const std::string& target_group,
                                           double alpha_lo, double alpha_hi,
                                           double beta, int resolution,
                                           TiePolicy ties) {
  const auto groups = g.groups();
  if (groups.size() != 2) {
    throw std::invalid_argument(
        "fit_logistic_adjustment: audit needs exactly two groups, got " +
        std::to_string(groups.size()));
  }
  if (target_group != groups[0] && target_group != groups[1]) {
    throw MissingGroup("fit_logistic_adjustment: unknown target group " +
                       target_group);
  }
  if (!(alpha_hi >= alpha_lo) || resolution < 2) {
    throw std::invalid_argument("fit_logistic_adjustment: bad alpha grid");
  }
  const std::string other =
      target_group == groups[0] ? groups[1] : groups[0];
  const auto& target_pos = g.cell(target_group, 1);
  const auto& target_neg = g.cell(target_group, 0);
  const auto& other_pos = g.cell(other, 1);
  const auto& other_neg = g.cell(other, 0);

  double best_alpha = alpha_lo;
  double best_objective = std::numeric_limits<double>::infinity();
  auto evaluate = [&](double alpha) {
    const LogisticTransform t{alpha, beta};
    const double obj = adjustment_objective(
        transform_sorted(target_pos, t), transform_sorted(target_neg, t),
        other_pos, other_neg, ties);
    // Ties on the piecewise-constant objective go to the smallest alpha.
    if (obj < best_objective ||
        (obj == best_objective && alpha < best_alpha)) {
      best_objective = obj;
      best_alpha = alpha;
    }
    return obj;
  };

  std::vector<double> grid(resolution);
  for (int i = 0; i < resolution; ++i) {
    grid[i] = alpha_lo + (alpha_hi - alpha_lo) * static_cast<double>(i) /
                             static_cast<double>(resolution - 1);
  }
  int best_index = 0;
  double best_grid = std::numeric_limits<double>::infinity();
  for (int i = 0; i < resolution; ++i) {
    const double obj = evaluate(grid[i]);
    if (obj < best_grid) {
      best_grid = obj;
      best_index = i;
    }
  }

  // Golden-section refinement inside the bracket around the best grid
  // point; the objective is piecewise constant, so this only sharpens the
  // location of the minimizing plateau's left edge.
  double lo = grid[std::max(0, best_index - 1)];
  double hi = grid[std::min(resolution - 1, best_index + 1)];
  const double golden = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - golden * (hi - lo);
  double d = lo + golden * (hi - lo);
  double fc = evaluate(c);
  double fd = evaluate(d);
  for (int iter = 0; iter < 80 && hi - lo > 1e-10; ++iter) {
    if (fc <= fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - golden * (hi - lo);
      fc = evaluate(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + golden * (hi - lo);
      fd = evaluate(d);
    }
  }

  LogisticAdjustment result;
  result.alpha = best_alpha;
  result.beta = beta;
  result.target_group = target_group;
  result.objective = best_objective;
  MonotoneTransform t{target_group, LogisticTransform{best_alpha, beta}};
  result.adjusted = audit(apply_transform(g, t), ties);
  return result;
}

namespace {

// Empirical quantile with midpoint plotting positions (j + 0.5) / n,
// linear between order statistics, clamped at the ends.
double quantile_at(std::span<const double> sorted, double q) {
  const double n = static_cast<double>(sorted.size());
  const double pos = q * n - 0.5;
  if (pos <= 0.0) return sorted.front();
  if (pos >= n - 1.0) return sorted.back();
  const std::size_t j = static_cast<std::size_t>(pos);
  const double frac = pos - static_cast<double>(j);
  return sorted[j] + frac * (sorted[j + 1] - sorted[j]);
}

double max_cdf_step(std::span<const double> sorted) {
  std::size_t longest = 1;
  std::size_t run = 1;
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    run = sorted[i] == sorted[i - 1] ? run + 1 : 1;
    longest = std::max(longest, run);
  }
  return static_cast<double>(longest) / static_cast<double>(sorted.size());
}

}  // namespace

MonotoneTransform eqop_transform(const GroupedScores& g,
                                 const std::string& reference_group,
                                 const std::string& moved_group) {
  const auto& moved = g.cell(moved_group, 1);
  const auto& reference = g.cell(reference_group, 1);

  QuantileMapTransform map;
  const double m = static_cast<double>(moved.size());
  std::size_t i = 0;
  while (i < moved.size()) {
    std::size_t j = i;
    while (j + 1 < moved.size() && moved[j + 1] == moved[i]) ++j;
    // Tied inputs collapse to one knot at their midrank quantile.
    const double q = (0.5 * static_cast<double>(i + j) + 0.5) / m;
    map.in_knots.push_back(moved[i]);
    map.out_knots.push_back(quantile_at(reference, q));
    i = j + 1;
  }
  // Interpolating between reference order statistics is nondecreasing by
  // construction, but clamp anyway against float edge cases.
  for (std::size_t k = 1; k < map.out_knots.size(); ++k) {
    map.out_knots[k] = std::max(map.out_knots[k], map.out_knots[k - 1]);
  }
  return MonotoneTransform{moved_group, std::move(map)};
}

EqopIdentityCheck verify_eqop_identity(const GroupedScores& g,
                                       const std::string& a,
                                       const std::string& b,
                                       TiePolicy ties) {
  EqopIdentityCheck check;
  const double auc_a = xauc(g, a, a, ties);
  const double auc_b = xauc(g, b, b, ties);
  check.auc_gap = auc_b - auc_a;

  const MonotoneTransform t = eqop_transform(g, a, b);
  const GroupedScores adjusted = apply_transform(g, t);
  check.delta_after = delta_xauc(adjusted, a, b, ties);
  check.residual = check.delta_after - check.auc_gap;
  check.discreteness_bound =
      std::max(max_cdf_step(g.cell(a, 1)), max_cdf_step(g.cell(b, 1)));
  return check;
}

}  // namespace xauc
