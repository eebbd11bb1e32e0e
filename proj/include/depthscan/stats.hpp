// Order-statistic and moment helpers used by the outlier rules and the
// bootstrap test. Quantiles follow the linear-interpolation convention
// that places the k-th of n sorted values at probability (k-1)/(n-1).
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "depthscan/errors.hpp"

namespace depthscan {

// Quantile of already-sorted data, linear interpolation between order
// statistics. prob must lie in [0, 1].
inline double quantile_sorted(std::span<const double> sorted, double prob) {
  if (sorted.empty()) throw too_short("quantile of empty sample");
  if (!(prob >= 0.0 && prob <= 1.0))
    throw out_of_range("quantile probability outside [0, 1]");
  const std::size_t n = sorted.size();
  if (n == 1) return sorted[0];
  const double h = prob * static_cast<double>(n - 1);
  const auto lo = static_cast<std::size_t>(h);
  if (lo + 1 >= n) return sorted[n - 1];
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

inline double quantile(std::vector<double> values, double prob) {
  std::sort(values.begin(), values.end());
  return quantile_sorted(values, prob);
}

struct five_number_summary {
  double min = 0, q1 = 0, median = 0, q3 = 0, max = 0;
};

inline five_number_summary five_number(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  return {values.front(), quantile_sorted(values, 0.25),
          quantile_sorted(values, 0.50), quantile_sorted(values, 0.75),
          values.back()};
}

inline double mean(std::span<const double> x) {
  double s = 0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

// Standard deviation with the n-1 denominator.
inline double sample_sd(std::span<const double> x) {
  const std::size_t n = x.size();
  if (n < 2) throw too_short("sample_sd needs at least two values");
  const double m = mean(x);
  double ss = 0;
  for (double v : x) ss += (v - m) * (v - m);
  return std::sqrt(ss / static_cast<double>(n - 1));
}

inline bool all_equal(std::span<const double> x) {
  auto [lo, hi] = std::minmax_element(x.begin(), x.end());
  return *lo == *hi;
}

// Pearson correlation. Degenerate inputs (either coordinate constant) are
// the caller's responsibility; this asserts non-constancy via the exact
// min == max test rather than an epsilon, since depth values are exact
// rationals and summation noise could otherwise fabricate tiny variances.
inline double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size())
    throw length_mismatch("pearson inputs differ in length");
  if (x.size() < 2) throw too_short("pearson needs at least two points");
  const double mx = mean(x);
  const double my = mean(y);
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  const double denom = std::sqrt(sxx) * std::sqrt(syy);
  if (denom == 0) throw domain_error("pearson on constant input");
  double r = sxy / denom;
  return std::clamp(r, -1.0, 1.0);
}

}  // namespace depthscan
