// Simulation designs with ground-truth labels. Five univariate models mix
// a base Gaussian process with shape-outlier processes (dependence change,
// phase shift, high-frequency oscillation); three bivariate models ride on
// a Matern cross-covariance base and add sinusoidal outlier means. Each
// curve flips an independent Bernoulli(theta) coin; all draws for one
// sample come sequentially from one seeded stream, so a (spec, seed) pair
// reproduces bitwise.
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <sstream>
#include <variant>
#include <vector>

#include "depthscan/errors.hpp"
#include "depthscan/gp.hpp"
#include "depthscan/matern.hpp"
#include "depthscan/random.hpp"
#include "depthscan/types.hpp"

namespace depthscan {

struct labeled_sample {
  std::variant<functional_sample, bivariate_sample> sample;
  std::vector<std::size_t> outlier_indices;
  model_spec spec;

  bool bivariate() const {
    return std::holds_alternative<bivariate_sample>(sample);
  }
  const functional_sample& univariate() const {
    return std::get<functional_sample>(sample);
  }
  const bivariate_sample& bivariate_view() const {
    return std::get<bivariate_sample>(sample);
  }
};

// k * exp(-(1/c) h^mu); the simulation-side parameterization (the fitted
// null model uses k * exp(-(h/c)^mu) instead, see shape_test.hpp).
inline Eigen::MatrixXd powered_exponential_covariance(const time_grid& grid,
                                                      double k, double mu,
                                                      double c) {
  if (!(k > 0) || !(mu > 0) || !(c > 0))
    throw out_of_range("powered exponential needs k, mu, c > 0");
  return stationary_covariance(
      grid, [&](double h) { return k * std::exp(-std::pow(h, mu) / c); });
}

inline void validate(const matern_params& m) {
  if (!(m.sigma1 > 0) || !(m.sigma2 > 0) || !(m.nu11 > 0) || !(m.nu22 > 0) ||
      !(m.nu12 > 0) || !(m.gamma11 > 0) || !(m.gamma22 > 0) ||
      !(m.gamma12 > 0))
    throw out_of_range("matern parameters must be positive");
  if (!(m.rho12 > -1.0 && m.rho12 < 1.0))
    throw out_of_range("rho12 outside (-1, 1)");
}

inline std::string describe(const matern_params& m) {
  std::ostringstream os;
  os << "sigma=(" << m.sigma1 << "," << m.sigma2 << ") rho12=" << m.rho12
     << " nu=(" << m.nu11 << "," << m.nu22 << "," << m.nu12 << ") gamma=("
     << m.gamma11 << "," << m.gamma22 << "," << m.gamma12 << ")";
  return os.str();
}

// 2p x 2p block covariance [[C11, C12], [C12, C22]] with
// c_kl(s,t) = rho_kl sigma_k sigma_l M(|s-t|; nu_kl, gamma_kl).
inline Eigen::MatrixXd bivariate_matern_covariance(const matern_params& m,
                                                   const time_grid& grid) {
  validate(m);
  const auto p = static_cast<Eigen::Index>(grid.size());
  Eigen::MatrixXd cov(2 * p, 2 * p);
  for (Eigen::Index j = 0; j < p; ++j)
    for (Eigen::Index l = j; l < p; ++l) {
      const double h = std::abs(grid[static_cast<std::size_t>(l)] -
                                grid[static_cast<std::size_t>(j)]);
      const double c11 = m.sigma1 * m.sigma1 * matern(h, m.nu11, m.gamma11);
      const double c22 = m.sigma2 * m.sigma2 * matern(h, m.nu22, m.gamma22);
      const double c12 =
          m.rho12 * m.sigma1 * m.sigma2 * matern(h, m.nu12, m.gamma12);
      cov(j, l) = cov(l, j) = c11;
      cov(p + j, p + l) = cov(p + l, p + j) = c22;
      cov(j, p + l) = cov(p + l, j) = c12;
      cov(l, p + j) = cov(p + j, l) = c12;
    }
  return cov;
}

inline bivariate_sample bivariate_gp_simulate(const matern_params& params,
                                              const time_grid& grid,
                                              std::size_t n,
                                              std::uint64_t seed) {
  validate(grid);
  const Eigen::MatrixXd cov = bivariate_matern_covariance(params, grid);
  Eigen::MatrixXd L;
  try {
    L = cholesky_with_jitter(cov, "bivariate matern covariance");
  } catch (const not_positive_definite&) {
    throw not_positive_definite("bivariate matern covariance not positive "
                                "definite for " +
                                describe(params));
  }
  const auto p = static_cast<Eigen::Index>(grid.size());
  auto engine = make_engine(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  bivariate_sample out;
  out.grid = grid;
  out.component1.resize(static_cast<Eigen::Index>(n), p);
  out.component2.resize(static_cast<Eigen::Index>(n), p);
  Eigen::VectorXd z(2 * p);
  for (std::size_t i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < 2 * p; ++j) z(j) = normal(engine);
    const Eigen::VectorXd e = L * z;
    out.component1.row(static_cast<Eigen::Index>(i)) = e.head(p).transpose();
    out.component2.row(static_cast<Eigen::Index>(i)) = e.tail(p).transpose();
  }
  return out;
}

namespace detail {

// Per-curve draw order: the Bernoulli label, then (u5 outliers only) the
// phase, then the Gaussian vector. Fixed so a seed pins the whole sample.
inline labeled_sample generate_univariate(const model_spec& spec) {
  const auto grid = time_grid::uniform(spec.p);
  const auto p = static_cast<Eigen::Index>(spec.p);
  const double scale = spec.noise_scale;
  constexpr double pi = std::numbers::pi;

  const Eigen::MatrixXd base_L = cholesky_with_jitter(
      powered_exponential_covariance(grid, 1.0, 1.0, 1.0), "base covariance");
  Eigen::MatrixXd outlier_L;
  if (spec.model == model_id::u1) {
    const covariance_override o =
        spec.outlier_cov.value_or(covariance_override{});
    outlier_L = cholesky_with_jitter(
        powered_exponential_covariance(grid, o.k, o.mu, o.c),
        "u1 outlier covariance");
  } else if (spec.model == model_id::u3 || spec.model == model_id::u4 ||
             spec.model == model_id::u5) {
    outlier_L = cholesky_with_jitter(
        powered_exponential_covariance(grid, 0.1, 0.1, 4.0),
        "low-amplitude outlier covariance");
  }

  auto engine = make_engine(spec.seed);
  std::bernoulli_distribution label(spec.theta);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> phase(0.25, 0.5);

  labeled_sample out;
  out.spec = spec;
  functional_sample sample;
  sample.grid = grid;
  sample.values.resize(static_cast<Eigen::Index>(spec.n), p);

  Eigen::VectorXd z(p);
  for (std::size_t i = 0; i < spec.n; ++i) {
    const bool outlier = label(engine);
    if (outlier) out.outlier_indices.push_back(i);
    double theta_i = 0.0;
    if (outlier && spec.model == model_id::u5) theta_i = phase(engine);
    for (Eigen::Index j = 0; j < p; ++j) z(j) = normal(engine);
    const Eigen::VectorXd noise =
        scale * ((outlier && spec.model != model_id::u2) ? outlier_L * z
                                                         : base_L * z);
    auto row = sample.values.row(static_cast<Eigen::Index>(i));
    for (Eigen::Index j = 0; j < p; ++j) {
      const double t = grid[static_cast<std::size_t>(j)];
      double mean = 0.0;
      switch (spec.model) {
        case model_id::u1:
          mean = 0.0;
          break;
        case model_id::u2:
          mean = outlier ? 2.0 * std::sin(15.0 * pi * t + 4.0)
                         : 2.0 * std::sin(15.0 * pi * t);
          break;
        case model_id::u3:
          mean = outlier ? std::atan(t) : 0.1 + std::atan(t);
          break;
        case model_id::u4:
          mean = 30.0 * t * std::pow(1.0 - t, 1.5);
          break;
        case model_id::u5:
          mean = outlier ? 0.1 * std::sin(40.0 * pi * (t + theta_i)) : 0.0;
          break;
        default:
          break;
      }
      row(j) = mean + noise(j);
    }
  }
  out.sample = std::move(sample);
  return out;
}

inline labeled_sample generate_bivariate(const model_spec& spec) {
  const auto grid = time_grid::uniform(spec.p);
  const auto p = static_cast<Eigen::Index>(spec.p);
  const double scale = spec.noise_scale;
  constexpr double pi = std::numbers::pi;

  const matern_params params = spec.matern.value_or(matern_params{});
  const Eigen::MatrixXd cov = bivariate_matern_covariance(params, grid);
  Eigen::MatrixXd L;
  try {
    L = cholesky_with_jitter(cov, "bivariate matern covariance");
  } catch (const not_positive_definite&) {
    throw not_positive_definite("bivariate matern covariance not positive "
                                "definite for " +
                                describe(params));
  }

  double amp1 = 0, freq1 = 0, amp2 = 0, freq2 = 0;
  switch (spec.model) {
    case model_id::m1:
      amp1 = 0.5; freq1 = 80.0; amp2 = 0.75; freq2 = 40.0;
      break;
    case model_id::m2:
      amp1 = 2.0; freq1 = 80.0; amp2 = 3.0; freq2 = 40.0;
      break;
    case model_id::m3:
      amp1 = 1.0; freq1 = 40.0; amp2 = 1.0; freq2 = 40.0;
      break;
    default:
      break;
  }

  auto engine = make_engine(spec.seed);
  std::bernoulli_distribution label(spec.theta);
  std::normal_distribution<double> normal(0.0, 1.0);

  labeled_sample out;
  out.spec = spec;
  bivariate_sample sample;
  sample.grid = grid;
  sample.component1.resize(static_cast<Eigen::Index>(spec.n), p);
  sample.component2.resize(static_cast<Eigen::Index>(spec.n), p);

  Eigen::VectorXd z(2 * p);
  for (std::size_t i = 0; i < spec.n; ++i) {
    const bool outlier = label(engine);
    if (outlier) out.outlier_indices.push_back(i);
    for (Eigen::Index j = 0; j < 2 * p; ++j) z(j) = normal(engine);
    const Eigen::VectorXd e = scale * (L * z);
    for (Eigen::Index j = 0; j < p; ++j) {
      const double t = grid[static_cast<std::size_t>(j)];
      const double m1 = outlier ? amp1 * std::cos(freq1 * pi * t) : 0.0;
      const double m2 = outlier ? amp2 * std::sin(freq2 * pi * t) : 0.0;
      sample.component1(static_cast<Eigen::Index>(i), j) = m1 + e(j);
      sample.component2(static_cast<Eigen::Index>(i), j) = m2 + e(p + j);
    }
  }
  out.sample = std::move(sample);
  return out;
}

}  // namespace detail

inline labeled_sample generate(const model_spec& spec) {
  validate(spec);
  if (spec.outlier_cov && spec.model != model_id::u1)
    throw out_of_range("covariance override applies to model u1 only");
  if (spec.matern && !is_bivariate(spec.model))
    throw out_of_range("matern override applies to bivariate models only");
  return is_bivariate(spec.model) ? detail::generate_bivariate(spec)
                                  : detail::generate_univariate(spec);
}

}  // namespace depthscan
