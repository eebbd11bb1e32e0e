// Depth engine. Univariate pointwise depth of curve i at grid point j is
//   (n_a * n_b + n - 1) / C(n, 2)
// where n_a and n_b count the other curves strictly above and strictly
// below at that point (ties count in neither). Row means of this matrix
// give the band-depth ranking used everywhere else. The bivariate variant
// replaces the above/below counts with pointwise simplicial depth: the
// fraction of the C(n, 3) triangles through the column's point cloud that
// contain the evaluated point, boundary inclusive.
#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "depthscan/errors.hpp"
#include "depthscan/stats.hpp"
#include "depthscan/types.hpp"

namespace depthscan {

// Population pointwise depth at marginal probability level prob.
inline double pwd_population(double prob) {
  if (!(prob >= 0.0 && prob <= 1.0))
    throw out_of_range("probability outside [0, 1]");
  return 2.0 * prob * (1.0 - prob);
}

inline depth_matrix pwd_matrix(const functional_sample& s) {
  validate(s);
  const std::size_t n = s.n();
  const std::size_t p = s.p();
  const double denom = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
  depth_matrix out;
  out.values.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
  std::vector<double> col(n);
  for (std::size_t j = 0; j < p; ++j) {
    for (std::size_t i = 0; i < n; ++i)
      col[i] = s.values(static_cast<Eigen::Index>(i),
                        static_cast<Eigen::Index>(j));
    std::sort(col.begin(), col.end());
    for (std::size_t i = 0; i < n; ++i) {
      const double v = s.values(static_cast<Eigen::Index>(i),
                                static_cast<Eigen::Index>(j));
      const auto below = static_cast<std::size_t>(
          std::lower_bound(col.begin(), col.end(), v) - col.begin());
      const auto above =
          n - static_cast<std::size_t>(
                  std::upper_bound(col.begin(), col.end(), v) - col.begin());
      out.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          (static_cast<double>(below) * static_cast<double>(above) +
           static_cast<double>(n - 1)) /
          denom;
    }
  }
  return out;
}

// Depth row for a curve not in the sample; counts run over all n members.
inline std::vector<double> pwd_row(const functional_sample& s,
                                   std::span<const double> curve) {
  validate(s);
  const std::size_t n = s.n();
  const std::size_t p = s.p();
  if (curve.size() != p)
    throw shape_mismatch("external curve length does not match grid");
  for (double v : curve)
    if (!std::isfinite(v)) throw non_finite_value("external curve not finite");
  const double denom = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
  std::vector<double> out(p);
  std::vector<double> col(n);
  for (std::size_t j = 0; j < p; ++j) {
    for (std::size_t i = 0; i < n; ++i)
      col[i] = s.values(static_cast<Eigen::Index>(i),
                        static_cast<Eigen::Index>(j));
    std::sort(col.begin(), col.end());
    const double v = curve[j];
    const auto below = static_cast<std::size_t>(
        std::lower_bound(col.begin(), col.end(), v) - col.begin());
    const auto above =
        n - static_cast<std::size_t>(
                std::upper_bound(col.begin(), col.end(), v) - col.begin());
    out[j] = (static_cast<double>(below) * static_cast<double>(above) +
              static_cast<double>(n - 1)) /
             denom;
  }
  return out;
}

inline std::vector<double> row_means(const depth_matrix& d) {
  std::vector<double> out(d.n());
  for (std::size_t i = 0; i < d.n(); ++i)
    out[i] = d.values.row(static_cast<Eigen::Index>(i)).mean();
  return out;
}

// Modified band depth (bands of two curves) via the pointwise depth matrix.
inline std::vector<double> mbd(const functional_sample& s) {
  return row_means(pwd_matrix(s));
}

// Pointwise total variation component: p_hat (1 - p_hat) with p_hat the
// fraction of the other curves at or below the evaluated value.
inline depth_matrix tvd_pointwise(const functional_sample& s) {
  validate(s);
  const std::size_t n = s.n();
  const std::size_t p = s.p();
  depth_matrix out;
  out.values.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
  std::vector<double> col(n);
  for (std::size_t j = 0; j < p; ++j) {
    for (std::size_t i = 0; i < n; ++i)
      col[i] = s.values(static_cast<Eigen::Index>(i),
                        static_cast<Eigen::Index>(j));
    std::sort(col.begin(), col.end());
    for (std::size_t i = 0; i < n; ++i) {
      const double v = s.values(static_cast<Eigen::Index>(i),
                                static_cast<Eigen::Index>(j));
      const auto leq = static_cast<std::size_t>(
          std::upper_bound(col.begin(), col.end(), v) - col.begin());
      const double phat =
          static_cast<double>(leq - 1) / static_cast<double>(n - 1);
      out.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          phat * (1.0 - phat);
    }
  }
  return out;
}

inline std::vector<double> pointwise_median(const functional_sample& s) {
  validate(s);
  const std::size_t n = s.n();
  const std::size_t p = s.p();
  std::vector<double> out(p);
  std::vector<double> col(n);
  for (std::size_t j = 0; j < p; ++j) {
    for (std::size_t i = 0; i < n; ++i)
      col[i] = s.values(static_cast<Eigen::Index>(i),
                        static_cast<Eigen::Index>(j));
    std::sort(col.begin(), col.end());
    out[j] = (n % 2 == 1) ? col[n / 2] : 0.5 * (col[n / 2 - 1] + col[n / 2]);
  }
  return out;
}

// Deepest-curve order: depth descending, row index as tiebreak.
inline std::vector<std::size_t> depth_order(std::span<const double> depths) {
  std::vector<std::size_t> order(depths.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (depths[a] != depths[b]) return depths[a] > depths[b];
    return a < b;
  });
  return order;
}

struct central_region_result {
  std::vector<double> lower;          // pointwise envelope over the members
  std::vector<double> upper;
  std::vector<std::size_t> members;   // deepest ceil(coverage * n) curves
};

inline central_region_result central_region(const functional_sample& s,
                                            double coverage = 0.5) {
  validate(s);
  if (!(coverage > 0.0 && coverage <= 1.0))
    throw out_of_range("coverage outside (0, 1]");
  const std::size_t n = s.n();
  const std::size_t p = s.p();
  const auto depths = mbd(s);
  const auto order = depth_order(depths);
  const auto k = static_cast<std::size_t>(
      std::ceil(coverage * static_cast<double>(n)));
  central_region_result out;
  out.members.assign(order.begin(), order.begin() + static_cast<long>(k));
  std::sort(out.members.begin(), out.members.end());
  out.lower.assign(p, 0.0);
  out.upper.assign(p, 0.0);
  for (std::size_t j = 0; j < p; ++j) {
    double lo = s.values(static_cast<Eigen::Index>(out.members[0]),
                         static_cast<Eigen::Index>(j));
    double hi = lo;
    for (std::size_t m = 1; m < out.members.size(); ++m) {
      const double v = s.values(static_cast<Eigen::Index>(out.members[m]),
                                static_cast<Eigen::Index>(j));
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    out.lower[j] = lo;
    out.upper[j] = hi;
  }
  return out;
}

namespace detail {

inline std::uint64_t choose2(std::uint64_t m) {
  return m < 2 ? 0 : m * (m - 1) / 2;
}
inline std::uint64_t choose3(std::uint64_t m) {
  return m < 3 ? 0 : m * (m - 1) * (m - 2) / 6;
}

// Triangles through `pts` (excluding index self as a vertex) that contain
// pts[self], with any boundary contact counting as containment. Exact sign
// tests only: a triple fails to contain the point iff all three directions
// fall strictly inside an open half-plane through it, so we count those
// triples per "first direction in counterclockwise order" and correct for
// same-ray groups, which the convention treats as containing.
inline std::uint64_t simplicial_contain_count(
    const std::vector<std::array<double, 2>>& pts, std::size_t self) {
  const std::size_t n = pts.size();
  const double ox = pts[self][0];
  const double oy = pts[self][1];
  std::vector<std::array<double, 2>> dir;
  dir.reserve(n - 1);
  for (std::size_t k = 0; k < n; ++k) {
    if (k == self) continue;
    const double dx = pts[k][0] - ox;
    const double dy = pts[k][1] - oy;
    if (dx == 0.0 && dy == 0.0) continue;  // coincident: every triple contains
    dir.push_back({dx, dy});
  }
  const std::uint64_t m_total = n - 1;
  std::uint64_t bad = 0;
  std::uint64_t same_ray = 0;
  for (std::size_t j = 0; j < dir.size(); ++j) {
    std::uint64_t a = 0;
    std::uint64_t r = 0;
    for (std::size_t k = 0; k < dir.size(); ++k) {
      if (k == j) continue;
      const double cross = dir[j][0] * dir[k][1] - dir[j][1] * dir[k][0];
      if (cross > 0.0) {
        ++a;
      } else if (cross == 0.0) {
        const double dot = dir[j][0] * dir[k][0] + dir[j][1] * dir[k][1];
        if (dot > 0.0 && k > j) {  // same ray: later index breaks the tie
          ++a;
          ++r;
        }
      }
    }
    bad += choose2(a);
    same_ray += choose2(r);
  }
  return choose3(m_total) - bad + same_ray;
}

}  // namespace detail

inline depth_matrix pwd_matrix(const bivariate_sample& s) {
  validate(s);
  const std::size_t n = s.n();
  const std::size_t p = s.p();
  const double denom = static_cast<double>(detail::choose3(n));
  const double with_self = static_cast<double>(detail::choose2(n - 1));
  depth_matrix out;
  out.values.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
  std::vector<std::array<double, 2>> pts(n);
  for (std::size_t j = 0; j < p; ++j) {
    for (std::size_t i = 0; i < n; ++i)
      pts[i] = {s.component1(static_cast<Eigen::Index>(i),
                             static_cast<Eigen::Index>(j)),
                s.component2(static_cast<Eigen::Index>(i),
                             static_cast<Eigen::Index>(j))};
    for (std::size_t i = 0; i < n; ++i) {
      const auto contain = detail::simplicial_contain_count(pts, i);
      out.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          (with_self + static_cast<double>(contain)) / denom;
    }
  }
  return out;
}

}  // namespace depthscan
