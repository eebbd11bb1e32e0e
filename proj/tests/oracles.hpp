// Brute-force reference implementations, deliberately literal and slow.
// These encode the definitions independently of the library's fast paths
// and were written (and frozen) before the implementations they check.
#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

namespace oracle {

// Two-curve band depth: for each of the C(n,2) curve pairs, the proportion
// of grid points where the evaluated curve lies inside the pair's pointwise
// band (endpoints inclusive), averaged over pairs. Pairs that include the
// evaluated curve count; the curve is always inside its own bands.
inline std::vector<double> mbd(const Eigen::MatrixXd& values) {
  const Eigen::Index n = values.rows();
  const Eigen::Index p = values.cols();
  const double pairs =
      0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
  std::vector<double> out(static_cast<std::size_t>(n), 0.0);
  for (Eigen::Index i = 0; i < n; ++i) {
    double total = 0.0;
    for (Eigen::Index a = 0; a + 1 < n; ++a)
      for (Eigen::Index b = a + 1; b < n; ++b) {
        Eigen::Index inside = 0;
        for (Eigen::Index j = 0; j < p; ++j) {
          const double lo = std::min(values(a, j), values(b, j));
          const double hi = std::max(values(a, j), values(b, j));
          if (values(i, j) >= lo && values(i, j) <= hi) ++inside;
        }
        total += static_cast<double>(inside) / static_cast<double>(p);
      }
    out[static_cast<std::size_t>(i)] = total / pairs;
  }
  return out;
}

// Boundary-inclusive triangle membership: the three edge cross products
// must not carry two opposite nonzero signs; zeros count as inside. This
// makes a degenerate (collinear) triangle contain every point on its line.
inline bool triangle_contains(const std::array<double, 2>& a,
                              const std::array<double, 2>& b,
                              const std::array<double, 2>& c,
                              const std::array<double, 2>& q) {
  const auto cross = [](const std::array<double, 2>& u,
                        const std::array<double, 2>& v,
                        const std::array<double, 2>& w) {
    return (v[0] - u[0]) * (w[1] - u[1]) - (v[1] - u[1]) * (w[0] - u[0]);
  };
  const double s1 = cross(a, b, q);
  const double s2 = cross(b, c, q);
  const double s3 = cross(c, a, q);
  const bool has_pos = s1 > 0 || s2 > 0 || s3 > 0;
  const bool has_neg = s1 < 0 || s2 < 0 || s3 < 0;
  return !(has_pos && has_neg);
}

// Simplicial depth of pts[self]: the fraction of all C(n,3) triples whose
// triangle contains it (triples through the point itself included).
inline double simplicial_depth(const std::vector<std::array<double, 2>>& pts,
                               std::size_t self) {
  const std::size_t n = pts.size();
  std::size_t contained = 0;
  std::size_t total = 0;
  for (std::size_t a = 0; a + 2 < n; ++a)
    for (std::size_t b = a + 1; b + 1 < n; ++b)
      for (std::size_t c = b + 1; c < n; ++c) {
        ++total;
        if (triangle_contains(pts[a], pts[b], pts[c], pts[self])) ++contained;
      }
  return static_cast<double>(contained) / static_cast<double>(total);
}

// Qn scale: k-th smallest of all pairwise absolute differences via a full
// sort, k = C(h, 2) with h = floor(n/2) + 1, times the consistency factor.
inline double qn(const std::vector<double>& x) {
  const std::size_t n = x.size();
  std::vector<double> diffs;
  diffs.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i + 1 < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      diffs.push_back(std::abs(x[i] - x[j]));
  std::sort(diffs.begin(), diffs.end());
  const std::size_t h = n / 2 + 1;
  const std::size_t k = h * (h - 1) / 2;
  return 2.2191 * diffs[k - 1];
}

}  // namespace oracle
