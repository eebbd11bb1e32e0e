#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "depthscan/qn.hpp"
#include "oracles.hpp"

using namespace depthscan;

TEST_CASE("qn_scale hand-checked values") {
  // n = 4 -> h = 3, k = 3; sorted pairwise diffs 1,1,1,2,2,3 -> third is 1.
  const std::vector<double> x = {1, 2, 3, 4};
  CHECK(qn_scale(x) == 2.2191);

  const std::vector<double> flat = {5, 5, 5, 5, 5};
  CHECK(qn_scale(flat) == 0.0);

  const std::vector<double> two = {1, 4};
  CHECK(qn_scale(two) == 2.2191 * 3.0);  // h = 2, k = 1, only diff is 3
}

TEST_CASE("qn_scale equals the sort-all-pairs oracle") {
  std::mt19937_64 engine(101);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> size(2, 60);
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<double> x(size(engine));
    for (auto& v : x) v = normal(engine);
    if (rep % 5 == 0)  // inject ties
      for (std::size_t i = 1; i < x.size(); i += 2) x[i] = x[i - 1];
    CHECK(qn_scale(x) == oracle::qn(x));
  }
}

TEST_CASE("bisection path returns the exact order statistic") {
  std::mt19937_64 engine(103);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int rep = 0; rep < 30; ++rep) {
    const std::size_t n = 5 + static_cast<std::size_t>(engine() % 80);
    std::vector<double> sorted(n);
    for (auto& v : sorted) v = normal(engine);
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> diffs;
    for (std::size_t j = 1; j < n; ++j)
      for (std::size_t i = 0; i < j; ++i)
        diffs.push_back(sorted[j] - sorted[i]);
    std::sort(diffs.begin(), diffs.end());
    const std::size_t h = n / 2 + 1;
    const std::size_t k = h * (h - 1) / 2;
    CHECK(detail::kth_pairwise_diff_bisect(sorted, k) == diffs[k - 1]);
    CHECK(detail::kth_pairwise_diff_bisect(sorted, 1) == diffs[0]);
    CHECK(detail::kth_pairwise_diff_bisect(sorted, diffs.size()) ==
          diffs.back());
  }
}

TEST_CASE("large inputs agree with the oracle across the path switch") {
  // n = 320 crosses the materialization threshold.
  std::mt19937_64 engine(107);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> x(320);
  for (auto& v : x) v = normal(engine);
  CHECK(qn_scale(x) == oracle::qn(x));
}

TEST_CASE("qn_scale is affine equivariant") {
  std::mt19937_64 engine(109);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> x(40);
  for (auto& v : x) v = normal(engine);
  const double base = qn_scale(x);
  std::vector<double> y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = -2.5 * x[i] + 7.0;
  CHECK(qn_scale(y) == Catch::Approx(2.5 * base).epsilon(1e-12));
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] + 100.0;
  CHECK(qn_scale(y) == Catch::Approx(base).epsilon(1e-9));
}

TEST_CASE("qn_scale resists heavy contamination") {
  // Replace a quarter of a unit-scale sample with huge spikes; the estimate
  // must stay near the clean scale rather than explode.
  std::mt19937_64 engine(113);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> x(200);
  for (auto& v : x) v = normal(engine);
  const double clean = qn_scale(x);
  for (std::size_t i = 0; i < 50; ++i) x[i] += 1e6;
  const double dirty = qn_scale(x);
  CHECK(dirty < 2.0 * clean);
  CHECK(dirty > 0.3 * clean);
}

TEST_CASE("qn_covariance recovers a known covariance") {
  std::mt19937_64 engine(127);
  std::normal_distribution<double> normal(0.0, 1.0);
  const std::size_t n = 20000;
  std::vector<double> x(n), y(n);
  const double rho = 0.6;
  for (std::size_t i = 0; i < n; ++i) {
    const double z1 = normal(engine);
    const double z2 = normal(engine);
    x[i] = z1;
    y[i] = rho * z1 + std::sqrt(1.0 - rho * rho) * z2;
  }
  CHECK(qn_covariance(x, y) == Catch::Approx(rho).margin(0.05));
  CHECK(qn_covariance(x, x) == Catch::Approx(1.0).margin(0.05));
}

TEST_CASE("qn input validation") {
  CHECK_THROWS_AS(qn_scale(std::vector<double>{1.0}), too_short);
  CHECK_THROWS_AS(qn_scale(std::vector<double>{}), too_short);
  CHECK_THROWS_AS(qn_scale(std::vector<double>{1.0, std::nan("")}),
                  non_finite_value);
  CHECK_THROWS_AS(
      qn_covariance(std::vector<double>{1, 2}, std::vector<double>{1, 2, 3}),
      length_mismatch);
  CHECK_THROWS_AS(
      qn_covariance(std::vector<double>{1.0}, std::vector<double>{1.0}),
      too_short);
}
