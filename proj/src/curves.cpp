#include "xauc/curves.hpp"

#include <algorithm>
#include <limits>
#include <ostream>

#include <nlohmann/json.hpp>

#include "xauc/errors.hpp"

namespace xauc {

double CurveSeries::trapezoid_area() const {
  double area = 0.0;
  for (std::size_t i = 1; i < points.size(); ++i) {
    area += (points[i].x - points[i - 1].x) *
            (points[i].y + points[i - 1].y) * 0.5;
  }
  return area;
}

void CurveSeries::write_csv(std::ostream& os) const {
  os << "x,y,theta\n";
  const auto prec = os.precision(17);
  for (const auto& p : points) {
    os << p.x << ',' << p.y << ',' << p.theta << '\n';
  }
  os.precision(prec);
}

nlohmann::json CurveSeries::to_json() const {
  nlohmann::json j;
  j["kind"] = kind;
  auto& pts = j["points"] = nlohmann::json::array();
  for (const auto& p : points) {
    pts.push_back({{"x", p.x}, {"y", p.y}, {"theta", p.theta}});
  }
  return j;
}

CurveSeries roc_curve(std::span<const double> pos,
                      std::span<const double> neg, const std::string& kind) {
  if (pos.empty() || neg.empty()) {
    throw EmptyClass("roc_curve: empty " +
                     std::string(pos.empty() ? "positive" : "negative") +
                     " class");
  }
  // Distinct thresholds, descending; exceedance counts come from walking
  // each sorted vector backwards.
  std::vector<double> thresholds(pos.begin(), pos.end());
  thresholds.insert(thresholds.end(), neg.begin(), neg.end());
  std::sort(thresholds.begin(), thresholds.end(), std::greater<>());
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()),
                   thresholds.end());

  const double inf = std::numeric_limits<double>::infinity();
  const double n1 = static_cast<double>(pos.size());
  const double n0 = static_cast<double>(neg.size());

  CurveSeries curve;
  curve.kind = kind;
  curve.points.push_back({0.0, 0.0, inf});

  std::size_t pos_above = 0;  // positives strictly above current theta
  std::size_t neg_above = 0;
  auto pi = pos.rbegin();
  auto ni = neg.rbegin();
  for (double theta : thresholds) {
    while (pi != pos.rend() && *pi > theta) {
      ++pos_above;
      ++pi;
    }
    while (ni != neg.rend() && *ni > theta) {
      ++neg_above;
      ++ni;
    }
    const CurvePoint p{static_cast<double>(neg_above) / n0,
                       static_cast<double>(pos_above) / n1, theta};
    const CurvePoint& last = curve.points.back();
    if (p.x != last.x || p.y != last.y) {
      curve.points.push_back(p);
    }
  }
  if (curve.points.back().x != 1.0 || curve.points.back().y != 1.0) {
    curve.points.push_back({1.0, 1.0, -inf});
  } else {
    curve.points.back().theta = -inf;
  }
  return curve;
}

CurveSeries xroc_curve(const GroupedScores& g, const std::string& a,
                       const std::string& b) {
  return roc_curve(g.cell(a, 1), g.cell(b, 0), "xROC(" + a + "," + b + ")");
}

}  // namespace xauc
