#include "xauc/curves.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include <doctest.h>
#include <nlohmann/json.hpp>

#include "oracles.hpp"
#include "xauc/errors.hpp"
#include "xauc/metrics.hpp"

using namespace xauc;

TEST_CASE("roc curve on a hand-swept example") {
  const std::vector<double> pos{0.7, 0.9};
  const std::vector<double> neg{0.1, 0.4};
  const CurveSeries c = roc_curve(pos, neg);
  REQUIRE(c.points.size() == 5);
  const std::vector<std::pair<double, double>> expected{
      {0.0, 0.0}, {0.0, 0.5}, {0.0, 1.0}, {0.5, 1.0}, {1.0, 1.0}};
  for (std::size_t i = 0; i < expected.size(); ++i) {
    CHECK(c.points[i].x == expected[i].first);
    CHECK(c.points[i].y == expected[i].second);
  }
  CHECK(c.points.front().theta == std::numeric_limits<double>::infinity());
  CHECK(c.points.back().theta == -std::numeric_limits<double>::infinity());
}

TEST_CASE("single tied score collapses to the diagonal") {
  const std::vector<double> only{0.5};
  const CurveSeries c = roc_curve(only, only);
  REQUIRE(c.points.size() == 2);
  CHECK(c.points[0].x == 0.0);
  CHECK(c.points[0].y == 0.0);
  CHECK(c.points[1].x == 1.0);
  CHECK(c.points[1].y == 1.0);
  CHECK(c.trapezoid_area() == 0.5);
}

TEST_CASE("curve endpoints, monotonicity, and area identity") {
  std::mt19937_64 gen(41);
  for (int trial = 0; trial < 40; ++trial) {
    const auto samples =
        oracle::random_complete_samples(gen, 80, 2, trial % 2 == 0);
    const GroupedScores g = build_grouped(samples);
    const CurveSeries c = xroc_curve(g, "a", "b");

    CHECK(c.points.front().x == 0.0);
    CHECK(c.points.front().y == 0.0);
    CHECK(c.points.back().x == 1.0);
    CHECK(c.points.back().y == 1.0);
    for (std::size_t i = 1; i < c.points.size(); ++i) {
      CHECK(c.points[i].x >= c.points[i - 1].x);
      CHECK(c.points[i].y >= c.points[i - 1].y);
      CHECK(c.points[i].theta <= c.points[i - 1].theta);
    }
    // trapezoid area == half-tie xAUC, checked against the brute oracle
    CHECK(c.trapezoid_area() ==
          doctest::Approx(oracle::brute_xauc(g, "a", "b", TiePolicy::half))
              .epsilon(1e-12));
  }
}

TEST_CASE("curve serialization") {
  GroupedScores g;
  g.add_cell("a", 1, {0.9, 0.7});
  g.add_cell("b", 0, {0.1, 0.4});
  const CurveSeries c = xroc_curve(g, "a", "b");
  CHECK(c.kind == "xROC(a,b)");

  std::ostringstream csv;
  c.write_csv(csv);
  CHECK(csv.str().starts_with("x,y,theta\n0,0,inf\n"));

  const nlohmann::json j = c.to_json();
  CHECK(j["kind"] == "xROC(a,b)");
  CHECK(j["points"].size() == c.points.size());
  CHECK(j["points"][1]["y"] == 0.5);
}
