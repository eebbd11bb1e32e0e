// Qn scale estimator: the k-th smallest pairwise absolute difference with
// k = C(h, 2), h = floor(n/2) + 1, scaled by 2.2191 for consistency at the
// Gaussian. No finite-sample correction. Covariances come from the scale
// identity cov(X, Y) = (Qn(X+Y)^2 - Qn(X-Y)^2) / 4.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "depthscan/errors.hpp"

namespace depthscan {

inline constexpr double qn_consistency_constant = 2.2191;

namespace detail {

// Pairs (i < j) over sorted values with x[j] - x[i] <= t.
inline std::size_t pairs_within(const std::vector<double>& sorted, double t) {
  std::size_t count = 0;
  std::size_t i = 0;
  for (std::size_t j = 1; j < sorted.size(); ++j) {
    while (sorted[j] - sorted[i] > t) ++i;
    count += j - i;
  }
  return count;
}

// k-th smallest pairwise difference (1-based k) without materializing the
// C(n, 2) differences: bisect the value down to adjacent doubles, using
// the two-pointer rank count above. Exact for the same reason binary
// search is: the answer is the smallest t with rank(t) >= k, and every
// pairwise difference is representable.
inline double kth_pairwise_diff_bisect(const std::vector<double>& sorted,
                                       std::size_t k) {
  double lo = 0.0;
  double hi = sorted.back() - sorted.front();
  if (pairs_within(sorted, lo) >= k) return 0.0;
  while (true) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    if (pairs_within(sorted, mid) >= k)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

}  // namespace detail

inline double qn_scale(std::span<const double> x) {
  const std::size_t n = x.size();
  if (n < 2) throw too_short("qn_scale needs at least two values");
  for (double v : x)
    if (!std::isfinite(v)) throw non_finite_value("qn_scale input not finite");
  const std::size_t h = n / 2 + 1;
  const std::size_t k = h * (h - 1) / 2;

  std::vector<double> sorted(x.begin(), x.end());
  std::sort(sorted.begin(), sorted.end());

  // Materializing all pairs is faster for small inputs; past a few hundred
  // points the O(n log n) bisection wins and avoids the quadratic memory.
  const std::size_t pair_count = n * (n - 1) / 2;
  double kth;
  if (pair_count <= 50'000) {
    std::vector<double> diffs;
    diffs.reserve(pair_count);
    for (std::size_t j = 1; j < n; ++j)
      for (std::size_t i = 0; i < j; ++i)
        diffs.push_back(sorted[j] - sorted[i]);
    std::nth_element(diffs.begin(), diffs.begin() + static_cast<long>(k - 1),
                     diffs.end());
    kth = diffs[k - 1];
  } else {
    kth = detail::kth_pairwise_diff_bisect(sorted, k);
  }
  return qn_consistency_constant * kth;
}

inline double qn_covariance(std::span<const double> x,
                            std::span<const double> y) {
  if (x.size() != y.size())
    throw length_mismatch("qn_covariance inputs differ in length");
  const std::size_t n = x.size();
  if (n < 2) throw too_short("qn_covariance needs at least two values");
  std::vector<double> sum(n), diff(n);
  for (std::size_t i = 0; i < n; ++i) {
    sum[i] = x[i] + y[i];
    diff[i] = x[i] - y[i];
  }
  const double qs = qn_scale(sum);
  const double qd = qn_scale(diff);
  return (qs * qs - qd * qd) / 4.0;
}

}  // namespace depthscan
