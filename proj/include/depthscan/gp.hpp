// Gaussian process draws on a fixed grid. Cholesky factorization retries
// with escalating diagonal jitter (relative to the largest diagonal entry)
// before giving up; an exactly zero covariance short-circuits to L = 0 so
// the draws reproduce the mean bitwise.
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>

#include "depthscan/errors.hpp"
#include "depthscan/random.hpp"
#include "depthscan/types.hpp"

namespace depthscan {

// Covariance matrix on a grid from a stationary lag function.
template <typename Fn>
Eigen::MatrixXd stationary_covariance(const time_grid& grid, Fn&& gamma) {
  const auto p = static_cast<Eigen::Index>(grid.size());
  Eigen::MatrixXd cov(p, p);
  for (Eigen::Index j = 0; j < p; ++j)
    for (Eigen::Index l = j; l < p; ++l) {
      const double h = std::abs(grid[static_cast<std::size_t>(l)] -
                                grid[static_cast<std::size_t>(j)]);
      cov(j, l) = cov(l, j) = gamma(h);
    }
  return cov;
}

// Lower Cholesky factor of cov (+ jitter * I if needed). Jitter escalates
// from 1e-10 * max diag by decades and gives up past 1e-4 * max diag.
inline Eigen::MatrixXd cholesky_with_jitter(const Eigen::MatrixXd& cov,
                                            const std::string& context) {
  if (cov.rows() != cov.cols())
    throw shape_mismatch("covariance matrix not square");
  if (!cov.allFinite())
    throw non_finite_value("covariance contains non-finite values");
  if (cov.isZero(0.0))
    return Eigen::MatrixXd::Zero(cov.rows(), cov.cols());

  const double scale = cov.diagonal().maxCoeff();
  if (!(scale > 0))
    throw not_positive_definite(context + ": non-positive diagonal");

  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() == Eigen::Success) return llt.matrixL();
  for (double jitter = 1e-10 * scale; jitter <= 1e-4 * scale; jitter *= 10) {
    Eigen::MatrixXd bumped = cov;
    bumped.diagonal().array() += jitter;
    llt.compute(bumped);
    if (llt.info() == Eigen::Success) return llt.matrixL();
  }
  throw not_positive_definite(context +
                              ": Cholesky failed up to jitter 1e-4 * diag");
}

// n draws from N(mean, cov), one row per draw. One engine, sequential
// draws: the same seed reproduces the same matrix bitwise.
inline Eigen::MatrixXd gp_simulate(const Eigen::VectorXd& mean,
                                   const Eigen::MatrixXd& cov,
                                   std::size_t n, std::uint64_t seed) {
  if (mean.size() != cov.rows())
    throw shape_mismatch("mean length does not match covariance");
  const Eigen::MatrixXd L = cholesky_with_jitter(cov, "gp_simulate");
  const auto p = mean.size();
  auto engine = make_engine(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd out(static_cast<Eigen::Index>(n), p);
  Eigen::VectorXd z(p);
  for (std::size_t i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < p; ++j) z(j) = normal(engine);
    out.row(static_cast<Eigen::Index>(i)) = (mean + L * z).transpose();
  }
  return out;
}

}  // namespace depthscan
