#include "xauc/samples.hpp"

#include <cmath>
#include <limits>

#include <doctest.h>

#include "xauc/errors.hpp"

using namespace xauc;

TEST_CASE("build_grouped partitions by group and outcome") {
  const std::vector<ScoredSample> samples{{0.9, 1, "a"}, {0.2, 0, "a"}};
  const GroupedScores g = build_grouped(samples);
  CHECK(g.cell("a", 1) == std::vector<double>{0.9});
  CHECK(g.cell("a", 0) == std::vector<double>{0.2});
  CHECK(g.total_count() == 2);
}

TEST_CASE("build_grouped sorts cell contents ascending") {
  const std::vector<ScoredSample> samples{{0.5, 1, "a"}, {0.3, 1, "a"}};
  const GroupedScores g = build_grouped(samples);
  CHECK(g.cell("a", 1) == std::vector<double>{0.3, 0.5});
}

TEST_CASE("build_grouped rejects empty and non-finite input") {
  CHECK_THROWS_AS(build_grouped({}), EmptyInput);

  const std::vector<ScoredSample> nan_sample{
      {std::numeric_limits<double>::quiet_NaN(), 1, "a"}};
  CHECK_THROWS_AS(build_grouped(nan_sample), NonFiniteScore);
  CHECK_THROWS_WITH_AS(build_grouped(nan_sample),
                       doctest::Contains("index 0"), NonFiniteScore);

  const std::vector<ScoredSample> inf_sample{
      {0.3, 1, "a"}, {std::numeric_limits<double>::infinity(), 0, "a"}};
  CHECK_THROWS_WITH_AS(build_grouped(inf_sample),
                       doctest::Contains("index 1"), NonFiniteScore);
}

TEST_CASE("grouped scores expose groups, counts, and pooled cells") {
  const std::vector<ScoredSample> samples{
      {0.9, 1, "b"}, {0.2, 0, "a"}, {0.5, 1, "a"}, {0.7, 0, "b"}};
  const GroupedScores g = build_grouped(samples);
  CHECK(g.groups() == std::vector<std::string>{"a", "b"});
  CHECK(g.count("a", 1) == 1);
  CHECK(g.count("a", 0) == 1);
  CHECK(g.pooled(1) == std::vector<double>{0.5, 0.9});
  CHECK(g.pooled(0) == std::vector<double>{0.2, 0.7});
  CHECK_FALSE(g.has_cell("c", 0));
  CHECK_THROWS_AS(g.cell("c", 0), MissingCell);
}
