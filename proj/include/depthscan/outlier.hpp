// Outlier rules. Magnitude outliers come from the functional boxplot: a
// curve is flagged when it leaves the central-region envelope inflated by
// factor * (pointwise envelope range). Shape outliers come from the
// correlation of consecutive pointwise depth pairs: central curves track
// the sample's depth profile (r near 1), shape outliers do not, and the
// flag is a one-sided boxplot fence on the r values. detect() chains the
// two stages, running the shape stage on the magnitude-cleaned sample.
#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <type_traits>
#include <utility>
#include <vector>

#include "depthscan/depth.hpp"
#include "depthscan/errors.hpp"
#include "depthscan/stats.hpp"
#include "depthscan/types.hpp"

namespace depthscan {

// Consecutive (depth at t_j, depth at t_{j+1}) pairs per curve.
struct pairwise_depth_series {
  std::vector<std::vector<std::pair<double, double>>> pairs;
};

inline pairwise_depth_series pairwise_depth(const depth_matrix& d) {
  if (d.p() < 3)
    throw grid_too_short("pairwise depth needs >= 3 grid points");
  pairwise_depth_series out;
  out.pairs.resize(d.n());
  for (std::size_t i = 0; i < d.n(); ++i) {
    out.pairs[i].reserve(d.p() - 1);
    for (std::size_t j = 0; j + 1 < d.p(); ++j)
      out.pairs[i].emplace_back(
          d.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)),
          d.values(static_cast<Eigen::Index>(i),
                   static_cast<Eigen::Index>(j + 1)));
  }
  return out;
}

// Pearson correlation of the consecutive depth pairs, one value per curve.
// A curve whose depth row is constant in either coordinate gives r = 1
// (a flat depth profile is maximally self-consistent, never flagged).
inline std::vector<double> shape_correlations(const depth_matrix& d) {
  if (d.p() < 3)
    throw grid_too_short("shape correlations need >= 3 grid points");
  const std::size_t m = d.p() - 1;
  std::vector<double> out(d.n());
  std::vector<double> x(m), y(m);
  for (std::size_t i = 0; i < d.n(); ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      x[j] = d.values(static_cast<Eigen::Index>(i),
                      static_cast<Eigen::Index>(j));
      y[j] = d.values(static_cast<Eigen::Index>(i),
                      static_cast<Eigen::Index>(j + 1));
    }
    out[i] = (all_equal(x) || all_equal(y)) ? 1.0 : pearson(x, y);
  }
  return out;
}

inline boxplot_fences make_fences(std::span<const double> values,
                                  double factor) {
  if (!(factor > 0))
    throw out_of_range("fence factor must be positive");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  boxplot_fences f;
  f.q1 = quantile_sorted(sorted, 0.25);
  f.q3 = quantile_sorted(sorted, 0.75);
  f.iqr = f.q3 - f.q1;
  f.factor = factor;
  if (std::isinf(factor)) {
    f.lower = -std::numeric_limits<double>::infinity();
    f.upper = std::numeric_limits<double>::infinity();
  } else {
    f.lower = f.q1 - factor * f.iqr;
    f.upper = f.q3 + factor * f.iqr;
  }
  return f;
}

// One-sided rule: flag r values strictly below the lower fence.
inline shape_scores shape_flags(std::span<const double> r, double factor = 3.0) {
  if (r.size() < 5)
    throw too_few_curves("shape flags need >= 5 curves");
  const auto f = make_fences(r, factor);
  shape_scores out;
  out.r.assign(r.begin(), r.end());
  out.lower_fence = f.lower;
  out.flags.resize(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) out.flags[i] = r[i] < f.lower;
  return out;
}

namespace detail {

// Envelope exceedance against an inflated band; one grid point outside the
// fence anywhere flags the curve.
inline bool exceeds_envelope(const Eigen::MatrixXd& values, std::size_t row,
                             std::span<const double> lower,
                             std::span<const double> upper, double factor) {
  for (std::size_t j = 0; j < lower.size(); ++j) {
    const double range = upper[j] - lower[j];
    const double lo = lower[j] - factor * range;
    const double hi = upper[j] + factor * range;
    const double v = values(static_cast<Eigen::Index>(row),
                            static_cast<Eigen::Index>(j));
    if (v < lo || v > hi) return true;
  }
  return false;
}

// Members = deepest ceil(coverage * n) rows under the given depth ranking.
inline std::vector<std::size_t> deepest_members(std::span<const double> depths,
                                                double coverage) {
  if (!(coverage > 0.0 && coverage <= 1.0))
    throw out_of_range("coverage outside (0, 1]");
  const auto order = depth_order(depths);
  const auto k = static_cast<std::size_t>(
      std::ceil(coverage * static_cast<double>(depths.size())));
  std::vector<std::size_t> members(order.begin(),
                                   order.begin() + static_cast<long>(k));
  std::sort(members.begin(), members.end());
  return members;
}

inline void member_envelope(const Eigen::MatrixXd& values,
                            const std::vector<std::size_t>& members,
                            std::vector<double>& lower,
                            std::vector<double>& upper) {
  const auto p = static_cast<std::size_t>(values.cols());
  lower.assign(p, 0.0);
  upper.assign(p, 0.0);
  for (std::size_t j = 0; j < p; ++j) {
    double lo = values(static_cast<Eigen::Index>(members[0]),
                       static_cast<Eigen::Index>(j));
    double hi = lo;
    for (std::size_t m = 1; m < members.size(); ++m) {
      const double v = values(static_cast<Eigen::Index>(members[m]),
                              static_cast<Eigen::Index>(j));
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    lower[j] = lo;
    upper[j] = hi;
  }
}

}  // namespace detail

inline std::vector<std::size_t> magnitude_flags(const functional_sample& s,
                                                double factor = 1.5,
                                                double coverage = 0.5) {
  validate(s);
  if (!(factor > 0)) throw out_of_range("fence factor must be positive");
  const auto region = central_region(s, coverage);
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < s.n(); ++i)
    if (detail::exceeds_envelope(s.values, i, region.lower, region.upper,
                                 factor))
      out.push_back(i);
  return out;
}

namespace detail {

// Bivariate magnitude rule given precomputed mean pointwise depths: rank by
// depth, envelope each component over the deepest half, flag a curve that
// leaves the inflated band in either component.
inline std::vector<std::size_t> magnitude_flags_ranked(
    const bivariate_sample& s, std::span<const double> depth_means,
    double factor, double coverage) {
  if (!(factor > 0)) throw out_of_range("fence factor must be positive");
  const auto members = deepest_members(depth_means, coverage);
  std::vector<double> lo1, hi1, lo2, hi2;
  member_envelope(s.component1, members, lo1, hi1);
  member_envelope(s.component2, members, lo2, hi2);
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < s.n(); ++i)
    if (exceeds_envelope(s.component1, i, lo1, hi1, factor) ||
        exceeds_envelope(s.component2, i, lo2, hi2, factor))
      out.push_back(i);
  return out;
}

}  // namespace detail

inline std::vector<std::size_t> magnitude_flags(const bivariate_sample& s,
                                                double factor = 1.5,
                                                double coverage = 0.5) {
  validate(s);
  const auto depths = row_means(pwd_matrix(s));
  return detail::magnitude_flags_ranked(s, depths, factor, coverage);
}

struct detect_config {
  double shape_factor = 3.0;
  double magnitude_factor = 1.5;
  double coverage = 0.5;
};

namespace detail {

inline std::vector<std::size_t> complement(
    const std::vector<std::size_t>& flagged, std::size_t n) {
  std::vector<std::size_t> keep;
  keep.reserve(n - flagged.size());
  std::size_t next = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (next < flagged.size() && flagged[next] == i) {
      ++next;
    } else {
      keep.push_back(i);
    }
  }
  return keep;
}

template <typename Sample>
outlier_report detect_impl(const Sample& s, const detect_config& cfg) {
  validate(s);
  const auto full = pwd_matrix(s);
  const auto depth_means = row_means(full);

  outlier_report report;
  report.depth_summary.reserve(s.n());
  for (std::size_t i = 0; i < s.n(); ++i) {
    const auto row = full.values.row(static_cast<Eigen::Index>(i));
    report.depth_summary.push_back(
        five_number(std::vector<double>(row.begin(), row.end())));
  }
  report.median_index = depth_order(depth_means).front();

  report.magnitude_indices = [&] {
    if constexpr (std::is_same_v<Sample, bivariate_sample>) {
      return detail::magnitude_flags_ranked(s, depth_means,
                                            cfg.magnitude_factor,
                                            cfg.coverage);
    } else {
      (void)depth_means;
      return magnitude_flags(s, cfg.magnitude_factor, cfg.coverage);
    }
  }();

  const auto keep = complement(report.magnitude_indices, s.n());
  if (keep.size() < 5)
    throw empty_after_cleaning(
        "fewer than 5 curves left after magnitude stage");
  const auto cleaned = subsample(s, keep);
  const auto r = shape_correlations(pwd_matrix(cleaned));
  report.fences = make_fences(r, cfg.shape_factor);
  report.shape = shape_flags(r, cfg.shape_factor);
  report.shape_curve_indices = keep;
  for (std::size_t i = 0; i < keep.size(); ++i)
    if (report.shape.flags[i]) report.shape_indices.push_back(keep[i]);
  return report;
}

}  // namespace detail

inline outlier_report detect(const functional_sample& s,
                             const detect_config& cfg = {}) {
  return detail::detect_impl(s, cfg);
}

inline outlier_report detect(const bivariate_sample& s,
                             const detect_config& cfg = {}) {
  return detail::detect_impl(s, cfg);
}

}  // namespace depthscan
