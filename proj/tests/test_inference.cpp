#include "xauc/inference.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <doctest.h>

#include "oracles.hpp"
#include "xauc/errors.hpp"
#include "xauc/metrics.hpp"

using namespace xauc;

namespace {

std::vector<double> sorted_normal(std::mt19937_64& gen, std::size_t n,
                                  double mu, double sigma) {
  std::normal_distribution<double> dist(mu, sigma);
  std::vector<double> xs(n);
  for (auto& x : xs) x = dist(gen);
  std::sort(xs.begin(), xs.end());
  return xs;
}

}  // namespace

TEST_CASE("delong on perfectly separated data") {
  const std::vector<double> pos{0.7, 0.9};
  const std::vector<double> neg{0.1, 0.4};
  const auto est = delong_se(pos, neg, TiePolicy::strict);
  CHECK(est.point == 1.0);
  CHECK(est.se == 0.0);
  CHECK(est.n_pos == 2);
  CHECK(est.n_neg == 2);
  CHECK_FALSE(est.tie_discrepancy);
}

TEST_CASE("delong structural components on a 2x2 table") {
  // pos {0.4, 0.6} vs neg {0.5, 0.5}: V10 = {0, 1}, V01 = {0.5, 0.5},
  // so var(V10) = 1/2, var(V01) = 0, se = sqrt(0.5/2) = 0.5 and the
  // point estimate is 2 winning pairs out of 4.
  const std::vector<double> pos{0.4, 0.6};
  const std::vector<double> neg{0.5, 0.5};
  const auto est = delong_se(pos, neg, TiePolicy::strict);
  CHECK(est.point == 0.5);
  CHECK(est.se == 0.5);
  CHECK_FALSE(est.tie_discrepancy);  // tied only within the negatives
}

TEST_CASE("delong point estimate equals the auc under the same policy") {
  std::mt19937_64 gen(43);
  for (int trial = 0; trial < 20; ++trial) {
    const auto samples =
        oracle::random_complete_samples(gen, 80, 1, trial % 2 == 0);
    const GroupedScores g = build_grouped(samples);
    for (auto ties : {TiePolicy::strict, TiePolicy::half}) {
      const auto est = delong_se(g.cell("a", 1), g.cell("a", 0), ties);
      CHECK(est.point == auc(g.cell("a", 1), g.cell("a", 0), ties));
      CHECK(est.se >= 0.0);
    }
  }
}

TEST_CASE("tie discrepancy is flagged when policies disagree") {
  const std::vector<double> pos{0.5, 0.7};
  const std::vector<double> neg{0.5, 0.6};
  CHECK(delong_se(pos, neg, TiePolicy::strict).tie_discrepancy);
  CHECK_FALSE(delong_se(pos, neg, TiePolicy::half).tie_discrepancy);
}

TEST_CASE("delong needs two samples per class") {
  CHECK_THROWS_AS(
      delong_se(std::vector{0.5}, std::vector{0.1, 0.2}, TiePolicy::strict),
      InsufficientSamples);
  CHECK_THROWS_AS(
      delong_se(std::vector{0.5, 0.6}, std::vector{0.1}, TiePolicy::strict),
      InsufficientSamples);
}

TEST_CASE("bootstrap basics") {
  SUBCASE("degenerate single values give zero spread") {
    const std::vector<double> one{0.5};
    const auto est = bootstrap_se(one, one, TiePolicy::half, 200, 5);
    CHECK(est.se == 0.0);
    CHECK(est.point == 0.5);
  }
  SUBCASE("same seed reproduces the estimate bit for bit") {
    std::mt19937_64 gen(47);
    const auto pos = sorted_normal(gen, 40, 1.0, 1.0);
    const auto neg = sorted_normal(gen, 50, 0.0, 1.0);
    const auto a = bootstrap_se(pos, neg, TiePolicy::strict, 300, 99);
    const auto b = bootstrap_se(pos, neg, TiePolicy::strict, 300, 99);
    CHECK(a.se == b.se);
    CHECK(a.point == b.point);
  }
  SUBCASE("too few resamples or empty classes are rejected") {
    const std::vector<double> xs{0.1, 0.2};
    CHECK_THROWS_AS(bootstrap_se(xs, xs, TiePolicy::strict, 99, 1),
                    InsufficientSamples);
    CHECK_THROWS_AS(bootstrap_se({}, xs, TiePolicy::strict, 200, 1),
                    InsufficientSamples);
  }
}

TEST_CASE("delong and bootstrap agree on synthetic n=500") {
  std::mt19937_64 gen(53);
  const auto pos = sorted_normal(gen, 500, 1.0, 1.0);
  const auto neg = sorted_normal(gen, 500, 0.0, 1.0);
  const auto dl = delong_se(pos, neg, TiePolicy::half);
  const auto bs = bootstrap_se(pos, neg, TiePolicy::half, 1000, 7);
  const double ratio = dl.se / bs.se;
  CHECK(ratio > 0.8);
  CHECK(ratio < 1.25);
}

TEST_CASE("delong se shrinks like one over sqrt(n)") {
  std::mt19937_64 gen(59);
  double sum_small = 0.0;
  double sum_large = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const auto pos1 = sorted_normal(gen, 300, 0.8, 1.0);
    const auto neg1 = sorted_normal(gen, 300, 0.0, 1.0);
    const auto pos2 = sorted_normal(gen, 600, 0.8, 1.0);
    const auto neg2 = sorted_normal(gen, 600, 0.0, 1.0);
    sum_small += delong_se(pos1, neg1, TiePolicy::half).se;
    sum_large += delong_se(pos2, neg2, TiePolicy::half).se;
  }
  const double ratio = sum_large / sum_small;
  CHECK(ratio > 0.6);
  CHECK(ratio < 0.8);
}
