// Shared domain types. Samples are row-per-curve matrices over a common
// time grid; every record here is a plain value type validated by the
// free validate() functions rather than by constructors, so file readers
// and tests can assemble instances piecewise.
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "depthscan/errors.hpp"
#include "depthscan/stats.hpp"

namespace depthscan {

struct time_grid {
  std::vector<double> points;  // strictly increasing, at least 2 entries

  static time_grid uniform(std::size_t p, double t0 = 0.0, double t1 = 1.0) {
    time_grid g;
    g.points.resize(p);
    for (std::size_t j = 0; j < p; ++j)
      g.points[j] =
          t0 + (t1 - t0) * static_cast<double>(j) / static_cast<double>(p - 1);
    return g;
  }

  std::size_t size() const { return points.size(); }
  double operator[](std::size_t j) const { return points[j]; }
};

inline void validate(const time_grid& grid) {
  if (grid.points.size() < 2) throw grid_too_short("grid needs >= 2 points");
  for (double t : grid.points)
    if (!std::isfinite(t)) throw non_finite_value("grid point not finite");
  for (std::size_t j = 1; j < grid.points.size(); ++j)
    if (!(grid.points[j] > grid.points[j - 1]))
      throw grid_not_increasing("grid points must strictly increase");
}

// n curves observed on a common grid of p points; values is n x p.
// ids are optional labels (empty means "use the row number").
struct functional_sample {
  time_grid grid;
  Eigen::MatrixXd values;
  std::vector<std::string> ids;

  std::size_t n() const { return static_cast<std::size_t>(values.rows()); }
  std::size_t p() const { return static_cast<std::size_t>(values.cols()); }
  std::string id_of(std::size_t i) const {
    return ids.empty() ? std::to_string(i) : ids[i];
  }
};

inline const functional_sample& validate(const functional_sample& s) {
  validate(s.grid);
  if (s.n() < 3) throw too_few_curves("sample needs >= 3 curves");
  if (s.p() != s.grid.size())
    throw shape_mismatch("value columns do not match grid length");
  if (!s.ids.empty() && s.ids.size() != s.n())
    throw shape_mismatch("id list does not match curve count");
  if (!s.values.allFinite())
    throw non_finite_value("sample contains non-finite values");
  return s;
}

// Two components observed jointly on one grid.
struct bivariate_sample {
  time_grid grid;
  Eigen::MatrixXd component1;
  Eigen::MatrixXd component2;
  std::vector<std::string> ids;

  std::size_t n() const { return static_cast<std::size_t>(component1.rows()); }
  std::size_t p() const { return static_cast<std::size_t>(component1.cols()); }
  std::string id_of(std::size_t i) const {
    return ids.empty() ? std::to_string(i) : ids[i];
  }
};

inline const bivariate_sample& validate(const bivariate_sample& s) {
  validate(s.grid);
  if (s.component1.rows() != s.component2.rows() ||
      s.component1.cols() != s.component2.cols())
    throw shape_mismatch("components differ in shape");
  if (s.n() < 4) throw too_few_curves("bivariate sample needs >= 4 curves");
  if (s.p() != s.grid.size())
    throw shape_mismatch("value columns do not match grid length");
  if (!s.ids.empty() && s.ids.size() != s.n())
    throw shape_mismatch("id list does not match curve count");
  if (!s.component1.allFinite() || !s.component2.allFinite())
    throw non_finite_value("sample contains non-finite values");
  return s;
}

// Pointwise depth of curve i at grid point j; entries in [0, 1].
struct depth_matrix {
  Eigen::MatrixXd values;

  std::size_t n() const { return static_cast<std::size_t>(values.rows()); }
  std::size_t p() const { return static_cast<std::size_t>(values.cols()); }
};

struct boxplot_fences {
  double q1 = 0, q3 = 0, iqr = 0, factor = 0, lower = 0, upper = 0;
};

// Per-curve shape scores: r is the correlation of consecutive pointwise
// depth pairs, flags marks curves below the lower fence.
struct shape_scores {
  std::vector<double> r;
  double lower_fence = 0;
  std::vector<bool> flags;
};

struct test_result {
  double statistic = 0;
  double critical_value = 0;
  double alpha = 0;
  double p_value = 0;
  bool reject = false;
  std::size_t bootstrap_count = 0;
};

// detect() output. Indices refer to the original sample ordering; the
// shape stage runs on the magnitude-cleaned sample, so its scores carry a
// parallel list of original indices.
struct outlier_report {
  std::vector<std::size_t> magnitude_indices;
  std::vector<std::size_t> shape_indices;
  std::vector<five_number_summary> depth_summary;  // one per original curve
  std::vector<std::size_t> shape_curve_indices;    // original index per r entry
  shape_scores shape;
  boxplot_fences fences;  // fences of the r boxplot
  std::size_t median_index = 0;  // deepest curve
  std::optional<test_result> test;
};

// Built-in simulation models: u1..u5 are univariate contamination designs,
// m1..m3 bivariate ones on a Matern cross-covariance base.
enum class model_id { u1, u2, u3, u4, u5, m1, m2, m3 };

inline bool is_bivariate(model_id m) {
  return m == model_id::m1 || m == model_id::m2 || m == model_id::m3;
}

// Bivariate Matern cross-covariance parameters:
//   c_kl(s,t) = rho_kl sigma_k sigma_l M(|s-t|; nu_kl, gamma_kl)
// with M(h; nu, gamma) = 2^{1-nu} Gamma(nu)^{-1} (gamma h)^nu K_nu(gamma h).
struct matern_params {
  double sigma1 = 1.0;
  double sigma2 = 1.0;
  double rho12 = 0.6;
  double nu11 = 1.2;
  double nu22 = 0.6;
  double nu12 = 1.0;
  double gamma11 = 0.02;
  double gamma22 = 0.01;
  double gamma12 = 0.016;
};

// Covariance override for the u1 outlier process, k * exp(-(1/c)|s-t|^mu).
struct covariance_override {
  double k = 6.0;
  double mu = 0.1;
  double c = 1.0;
};

struct model_spec {
  model_id model = model_id::u1;
  std::size_t n = 100;
  std::size_t p = 50;
  double theta = 0.1;  // contamination rate; experiments use [0, 0.5)
  std::uint64_t seed = 0;
  std::optional<covariance_override> outlier_cov;  // u1 only
  std::optional<matern_params> matern;             // m1..m3 only
  double noise_scale = 1.0;  // test hook; scales every Gaussian draw
};

inline void validate(const model_spec& spec) {
  if (spec.n < 3) throw too_few_curves("model needs n >= 3");
  if (spec.p < 2) throw grid_too_short("model needs p >= 2");
  if (!(spec.theta >= 0.0 && spec.theta <= 1.0))
    throw out_of_range("theta outside [0, 1]");
  if (!std::isfinite(spec.noise_scale) || spec.noise_scale < 0)
    throw out_of_range("noise_scale must be finite and >= 0");
  if (spec.outlier_cov) {
    const auto& o = *spec.outlier_cov;
    if (!(o.k > 0) || !(o.c > 0) || !(o.mu > 0) || !(o.mu <= 2))
      throw out_of_range("covariance override needs k > 0, c > 0, mu in (0, 2]");
  }
  if (spec.matern) {
    const auto& m = *spec.matern;
    if (!(m.sigma1 > 0) || !(m.sigma2 > 0) || !(m.nu11 > 0) || !(m.nu22 > 0) ||
        !(m.nu12 > 0) || !(m.gamma11 > 0) || !(m.gamma22 > 0) ||
        !(m.gamma12 > 0))
      throw out_of_range("matern parameters must be positive");
    if (!(m.rho12 > -1.0 && m.rho12 < 1.0))
      throw out_of_range("rho12 outside (-1, 1)");
  }
}

// Row subset preserving grid and ids; keep must be sorted, in range.
inline functional_sample subsample(const functional_sample& s,
                                   const std::vector<std::size_t>& keep) {
  functional_sample out;
  out.grid = s.grid;
  out.values.resize(static_cast<Eigen::Index>(keep.size()),
                    s.values.cols());
  for (std::size_t i = 0; i < keep.size(); ++i)
    out.values.row(static_cast<Eigen::Index>(i)) =
        s.values.row(static_cast<Eigen::Index>(keep[i]));
  if (!s.ids.empty()) {
    out.ids.reserve(keep.size());
    for (std::size_t i : keep) out.ids.push_back(s.ids[i]);
  }
  return out;
}

inline bivariate_sample subsample(const bivariate_sample& s,
                                  const std::vector<std::size_t>& keep) {
  bivariate_sample out;
  out.grid = s.grid;
  out.component1.resize(static_cast<Eigen::Index>(keep.size()),
                        s.component1.cols());
  out.component2.resize(static_cast<Eigen::Index>(keep.size()),
                        s.component2.cols());
  for (std::size_t i = 0; i < keep.size(); ++i) {
    out.component1.row(static_cast<Eigen::Index>(i)) =
        s.component1.row(static_cast<Eigen::Index>(keep[i]));
    out.component2.row(static_cast<Eigen::Index>(i)) =
        s.component2.row(static_cast<Eigen::Index>(keep[i]));
  }
  if (!s.ids.empty()) {
    out.ids.reserve(keep.size());
    for (std::size_t i : keep) out.ids.push_back(s.ids[i]);
  }
  return out;
}

}  // namespace depthscan
