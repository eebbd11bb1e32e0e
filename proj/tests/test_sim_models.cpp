#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdlib>
#include <numbers>
#include <variant>
#include <vector>

#include "depthscan/sim_models.hpp"

using namespace depthscan;

namespace {

model_spec base_spec(model_id model, std::size_t n = 20, std::size_t p = 8,
                     double theta = 0.1, std::uint64_t seed = 5) {
  model_spec spec;
  spec.model = model;
  spec.n = n;
  spec.p = p;
  spec.theta = theta;
  spec.seed = seed;
  return spec;
}

}  // namespace

TEST_CASE("generate reproduces bitwise from a seed") {
  for (model_id m : {model_id::u1, model_id::u2, model_id::u5}) {
    const auto a = generate(base_spec(m));
    const auto b = generate(base_spec(m));
    CHECK(a.outlier_indices == b.outlier_indices);
    CHECK((a.univariate().values.array() == b.univariate().values.array())
              .all());
    auto other = base_spec(m);
    other.seed = 6;
    const auto c = generate(other);
    CHECK_FALSE(
        (a.univariate().values.array() == c.univariate().values.array())
            .all());
  }
  const auto a = generate(base_spec(model_id::m3, 8, 6));
  const auto b = generate(base_spec(model_id::m3, 8, 6));
  CHECK(a.outlier_indices == b.outlier_indices);
  CHECK((a.bivariate_view().component1.array() ==
         b.bivariate_view().component1.array())
            .all());
  CHECK((a.bivariate_view().component2.array() ==
         b.bivariate_view().component2.array())
            .all());
}

TEST_CASE("contamination rate endpoints") {
  const auto none = generate(base_spec(model_id::u3, 15, 6, 0.0));
  CHECK(none.outlier_indices.empty());
  const auto all = generate(base_spec(model_id::u4, 15, 6, 1.0));
  REQUIRE(all.outlier_indices.size() == 15);
  for (std::size_t i = 0; i < 15; ++i) CHECK(all.outlier_indices[i] == i);

  const auto none_biv = generate(base_spec(model_id::m1, 8, 6, 0.0));
  CHECK(none_biv.outlier_indices.empty());
}

TEST_CASE("label frequency tracks theta") {
  auto spec = base_spec(model_id::u1, 2000, 2, 0.3, 77);
  const auto sample = generate(spec);
  const double rate =
      static_cast<double>(sample.outlier_indices.size()) / 2000.0;
  CHECK(rate == Catch::Approx(0.3).margin(0.045));
}

TEST_CASE("noise_scale zero exposes the exact mean functions") {
  constexpr double pi = std::numbers::pi;

  auto u2 = base_spec(model_id::u2, 6, 9, 0.0);
  u2.noise_scale = 0.0;
  const auto s2 = generate(u2);
  const auto& grid2 = s2.univariate().grid;
  for (std::size_t j = 0; j < 9; ++j) {
    const double expected = 2.0 * std::sin(15.0 * pi * grid2[j]);
    for (Eigen::Index i = 0; i < 6; ++i)
      CHECK(s2.univariate().values(i, static_cast<Eigen::Index>(j)) ==
            expected);
  }

  auto u2_out = base_spec(model_id::u2, 6, 9, 1.0);
  u2_out.noise_scale = 0.0;
  const auto s2o = generate(u2_out);
  for (std::size_t j = 0; j < 9; ++j) {
    const double expected = 2.0 * std::sin(15.0 * pi * grid2[j] + 4.0);
    CHECK(s2o.univariate().values(0, static_cast<Eigen::Index>(j)) ==
          expected);
  }

  auto u3 = base_spec(model_id::u3, 5, 7, 0.0);
  u3.noise_scale = 0.0;
  const auto s3 = generate(u3);
  for (std::size_t j = 0; j < 7; ++j)
    CHECK(s3.univariate().values(0, static_cast<Eigen::Index>(j)) ==
          0.1 + std::atan(s3.univariate().grid[j]));

  auto u4 = base_spec(model_id::u4, 5, 7, 1.0);
  u4.noise_scale = 0.0;
  const auto s4 = generate(u4);
  for (std::size_t j = 0; j < 7; ++j) {
    const double t = s4.univariate().grid[j];
    CHECK(s4.univariate().values(2, static_cast<Eigen::Index>(j)) ==
          30.0 * t * std::pow(1.0 - t, 1.5));
  }

  auto m3 = base_spec(model_id::m3, 6, 8, 1.0);
  m3.noise_scale = 0.0;
  const auto sm = generate(m3);
  const auto& biv = sm.bivariate_view();
  for (std::size_t j = 0; j < 8; ++j) {
    const double t = biv.grid[j];
    for (Eigen::Index i = 0; i < 6; ++i) {
      CHECK(biv.component1(i, static_cast<Eigen::Index>(j)) ==
            std::cos(40.0 * pi * t));
      CHECK(biv.component2(i, static_cast<Eigen::Index>(j)) ==
            std::sin(40.0 * pi * t));
    }
  }
}

TEST_CASE("u5 consumes a phase draw only for outliers") {
  // With no outliers u1 and u5 share mean zero and the same draw sequence,
  // so their samples must coincide bitwise.
  const auto a = generate(base_spec(model_id::u1, 12, 6, 0.0, 9));
  const auto b = generate(base_spec(model_id::u5, 12, 6, 0.0, 9));
  CHECK((a.univariate().values.array() == b.univariate().values.array())
            .all());
}

TEST_CASE("powered_exponential_covariance entries and validation") {
  const auto grid = time_grid::uniform(3);  // 0, 0.5, 1
  const auto cov = powered_exponential_covariance(grid, 2.0, 0.5, 4.0);
  REQUIRE(cov.rows() == 3);
  CHECK(cov(0, 0) == 2.0);
  CHECK(cov(1, 1) == 2.0);
  CHECK(cov(0, 1) == 2.0 * std::exp(-std::pow(0.5, 0.5) / 4.0));
  CHECK(cov(0, 2) == 2.0 * std::exp(-1.0 / 4.0));
  CHECK(cov(0, 1) == cov(1, 0));

  CHECK_THROWS_AS(powered_exponential_covariance(grid, 0.0, 1.0, 1.0),
                  out_of_range);
  CHECK_THROWS_AS(powered_exponential_covariance(grid, 1.0, -1.0, 1.0),
                  out_of_range);
  CHECK_THROWS_AS(powered_exponential_covariance(grid, 1.0, 1.0, 0.0),
                  out_of_range);
}

TEST_CASE("bivariate matern covariance block structure") {
  matern_params m;  // defaults
  const auto grid = time_grid::uniform(4);
  const auto cov = bivariate_matern_covariance(m, grid);
  REQUIRE(cov.rows() == 8);
  REQUIRE(cov.cols() == 8);
  CHECK((cov - cov.transpose()).norm() == 0.0);
  for (Eigen::Index j = 0; j < 4; ++j) {
    CHECK(cov(j, j) == m.sigma1 * m.sigma1);
    CHECK(cov(4 + j, 4 + j) == m.sigma2 * m.sigma2);
    CHECK(cov(j, 4 + j) == m.rho12 * m.sigma1 * m.sigma2);  // M(0) = 1
  }
  const double h = grid[1] - grid[0];
  CHECK(cov(0, 1) ==
        m.sigma1 * m.sigma1 * matern(h, m.nu11, m.gamma11));
  CHECK(cov(4, 5) ==
        m.sigma2 * m.sigma2 * matern(h, m.nu22, m.gamma22));
  CHECK(cov(0, 5) ==
        m.rho12 * m.sigma1 * m.sigma2 * matern(h, m.nu12, m.gamma12));
}

TEST_CASE("bivariate_gp_simulate shape and determinism") {
  matern_params m;
  const auto grid = time_grid::uniform(6);
  const auto a = bivariate_gp_simulate(m, grid, 5, 31);
  const auto b = bivariate_gp_simulate(m, grid, 5, 31);
  REQUIRE(a.n() == 5);
  REQUIRE(a.p() == 6);
  CHECK((a.component1.array() == b.component1.array()).all());
  CHECK((a.component2.array() == b.component2.array()).all());
  CHECK(a.grid.points == grid.points);
}

TEST_CASE("spec validation and override rules") {
  CHECK_THROWS_AS(generate(base_spec(model_id::u1, 2, 8)), too_few_curves);
  CHECK_THROWS_AS(generate(base_spec(model_id::u1, 20, 1)), grid_too_short);
  CHECK_THROWS_AS(generate(base_spec(model_id::u1, 20, 8, 1.5)),
                  out_of_range);

  auto bad_scale = base_spec(model_id::u1);
  bad_scale.noise_scale = -1.0;
  CHECK_THROWS_AS(generate(bad_scale), out_of_range);

  auto override_wrong_model = base_spec(model_id::u2);
  override_wrong_model.outlier_cov = covariance_override{};
  CHECK_THROWS_AS(generate(override_wrong_model), out_of_range);

  auto matern_wrong_model = base_spec(model_id::u1);
  matern_wrong_model.matern = matern_params{};
  CHECK_THROWS_AS(generate(matern_wrong_model), out_of_range);

  auto bad_override = base_spec(model_id::u1);
  bad_override.outlier_cov = covariance_override{0.0, 0.5, 1.0};
  CHECK_THROWS_AS(generate(bad_override), out_of_range);

  auto bad_mu = base_spec(model_id::u1);
  bad_mu.outlier_cov = covariance_override{1.0, 2.5, 1.0};
  CHECK_THROWS_AS(generate(bad_mu), out_of_range);

  auto bad_matern = base_spec(model_id::m1, 8, 6);
  matern_params mp;
  mp.rho12 = 1.5;
  bad_matern.matern = mp;
  CHECK_THROWS_AS(generate(bad_matern), out_of_range);

  // A valid u1 override changes the outlier draws.
  auto with_override = base_spec(model_id::u1, 20, 8, 1.0, 13);
  with_override.outlier_cov = covariance_override{2.0, 0.5, 1.0};
  const auto plain = generate(base_spec(model_id::u1, 20, 8, 1.0, 13));
  const auto overridden = generate(with_override);
  CHECK_FALSE((plain.univariate().values.array() ==
               overridden.univariate().values.array())
                  .all());
}

TEST_CASE("labeled_sample accessors and generated ids") {
  const auto uni = generate(base_spec(model_id::u1));
  CHECK_FALSE(uni.bivariate());
  CHECK(uni.univariate().ids.empty());
  CHECK(uni.univariate().id_of(3) == "3");
  CHECK_THROWS_AS(uni.bivariate_view(), std::bad_variant_access);

  const auto biv = generate(base_spec(model_id::m2, 8, 6));
  CHECK(biv.bivariate());
  CHECK(biv.bivariate_view().id_of(0) == "0");
  CHECK_THROWS_AS(biv.univariate(), std::bad_variant_access);
}
