#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "xauc/samples.hpp"

namespace xauc {

struct CurvePoint {
  double x = 0.0;      // FPR-type rate in [0, 1]
  double y = 0.0;      // TPR-type rate in [0, 1]
  double theta = 0.0;  // threshold achieving this operating point
};

/// Threshold-parameterized (x, y) sequence. The sweep runs over the
/// distinct observed scores plus +/-inf sentinels, so the first point is
/// (0,0) and the last (1,1), with both coordinates nondecreasing as the
/// threshold falls. Trapezoidal area equals the half-tie xAUC.
struct CurveSeries {
  std::string kind;  // "ROC" or "xROC(a,b)"
  std::vector<CurvePoint> points;

  double trapezoid_area() const;

  /// CSV with header "x,y,theta".
  void write_csv(std::ostream& os) const;

  nlohmann::json to_json() const;
};

/// ROC of one positive/negative sample pair (vectors sorted ascending).
CurveSeries roc_curve(std::span<const double> pos,
                      std::span<const double> neg,
                      const std::string& kind = "ROC");

/// xROC(a,b): TPR of group a's positives against FPR of group b's
/// negatives over a shared threshold sweep.
CurveSeries xroc_curve(const GroupedScores& g, const std::string& a,
                       const std::string& b);

}  // namespace xauc
