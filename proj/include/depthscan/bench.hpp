// Replicated experiments: detection TPR/FPR tables, the size (Type I) study
// of the existence test, and the two sensitivity sweeps. Replicates get
// derived seeds so experiments parallelize deterministically; summaries use
// compensated summation so aggregation order never matters.
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "depthscan/outlier.hpp"
#include "depthscan/parallel.hpp"
#include "depthscan/random.hpp"
#include "depthscan/shape_test.hpp"
#include "depthscan/sim_models.hpp"
#include "depthscan/types.hpp"

namespace depthscan {

// Percentages; absent when undefined for the replicate (no true outliers
// for tpr, no clean curves for fpr).
struct detection_metrics {
  std::optional<double> tpr;
  std::optional<double> fpr;
};

inline detection_metrics metrics(const std::vector<std::size_t>& flags,
                                 const std::vector<std::size_t>& truth,
                                 std::size_t n) {
  for (std::size_t i : flags)
    if (i >= n) throw out_of_range("flag index outside sample");
  for (std::size_t i : truth)
    if (i >= n) throw out_of_range("truth index outside sample");
  std::vector<std::size_t> f(flags), t(truth);
  std::sort(f.begin(), f.end());
  f.erase(std::unique(f.begin(), f.end()), f.end());
  std::sort(t.begin(), t.end());
  t.erase(std::unique(t.begin(), t.end()), t.end());

  std::size_t hit = 0;
  for (std::size_t i : f)
    if (std::binary_search(t.begin(), t.end(), i)) ++hit;
  const std::size_t false_flags = f.size() - hit;

  detection_metrics out;
  if (!t.empty())
    out.tpr = 100.0 * static_cast<double>(hit) / static_cast<double>(t.size());
  if (n > t.size())
    out.fpr = 100.0 * static_cast<double>(false_flags) /
              static_cast<double>(n - t.size());
  return out;
}

namespace detail {

// Kahan mean/sd over the present values; sd uses the n-1 denominator.
struct summary {
  std::optional<double> mean;
  std::optional<double> sd;
};

inline summary summarize(const std::vector<std::optional<double>>& values) {
  double sum = 0, comp = 0;
  std::size_t count = 0;
  for (const auto& v : values)
    if (v) {
      const double y = *v - comp;
      const double t = sum + y;
      comp = (t - sum) - y;
      sum = t;
      ++count;
    }
  summary out;
  if (count == 0) return out;
  const double m = sum / static_cast<double>(count);
  out.mean = m;
  if (count < 2) return out;
  double ss = 0, ssc = 0;
  for (const auto& v : values)
    if (v) {
      const double d = (*v - m) * (*v - m) - ssc;
      const double t = ss + d;
      ssc = (t - ss) - d;
      ss = t;
    }
  out.sd = std::sqrt(ss / static_cast<double>(count - 1));
  return out;
}

}  // namespace detail

struct experiment_result {
  std::vector<detection_metrics> per_replicate;
  std::optional<double> mean_tpr, sd_tpr, mean_fpr, sd_fpr;
  model_spec spec;
  std::size_t replicates = 0;
};

inline experiment_result run_detection_experiment(
    const model_spec& spec, std::size_t replicates, std::uint64_t seed,
    const detect_config& config = {}) {
  if (replicates < 1) throw out_of_range("need at least one replicate");
  validate(spec);

  experiment_result out;
  out.spec = spec;
  out.replicates = replicates;
  out.per_replicate.resize(replicates);
  parallel_for(replicates, [&](std::size_t rep) {
    model_spec rs = spec;
    rs.seed = derive_seed(seed, rep);
    const auto data = generate(rs);
    const auto report =
        data.bivariate() ? detect(data.bivariate_view(), config)
                         : detect(data.univariate(), config);
    out.per_replicate[rep] =
        metrics(report.shape_indices, data.outlier_indices, rs.n);
  });

  std::vector<std::optional<double>> tprs(replicates), fprs(replicates);
  for (std::size_t rep = 0; rep < replicates; ++rep) {
    tprs[rep] = out.per_replicate[rep].tpr;
    fprs[rep] = out.per_replicate[rep].fpr;
  }
  const auto ts = detail::summarize(tprs);
  const auto fshown = detail::summarize(fprs);
  out.mean_tpr = ts.mean;
  out.sd_tpr = ts.sd;
  out.mean_fpr = fshown.mean;
  out.sd_fpr = fshown.sd;
  return out;
}

// Size study of the existence test on outlier-free Gaussian samples (the
// u1 base process). One bootstrap run serves every alpha, so the rates
// share replication noise exactly as a single sweep would.
inline std::vector<double> run_type1_experiment(
    std::size_t n, const std::vector<double>& alphas,
    std::size_t replications, std::size_t B, std::uint64_t seed,
    std::size_t p = 50) {
  if (replications < 50) throw out_of_range("need at least 50 replications");
  for (double a : alphas)
    if (!(a > 0.0 && a < 0.5)) throw out_of_range("alpha outside (0, 0.5)");

  std::vector<std::vector<bool>> reject(replications);
  parallel_for(replications, [&](std::size_t rep) {
    const auto rep_seed = derive_seed(seed, rep);
    model_spec spec;
    spec.model = model_id::u1;
    spec.n = n;
    spec.p = p;
    spec.theta = 0.0;
    spec.seed = derive_seed(rep_seed, 0);
    const auto data = generate(spec);
    const auto& sample = data.univariate();

    const auto r = shape_correlations(pwd_matrix(sample));
    const double observed = test_statistic(r);
    const auto model = fit_null_model(sample);
    auto stats = bootstrap_null_distribution(model, n, sample.grid, B,
                                             derive_seed(rep_seed, 1));
    std::sort(stats.begin(), stats.end());
    auto& row = reject[rep];
    row.resize(alphas.size());
    for (std::size_t a = 0; a < alphas.size(); ++a)
      row[a] = observed >= bootstrap_critical_value_sorted(stats, alphas[a]);
  });

  std::vector<double> rates(alphas.size(), 0.0);
  for (const auto& row : reject)
    for (std::size_t a = 0; a < alphas.size(); ++a)
      if (row[a]) rates[a] += 1.0;
  for (double& rate : rates) rate /= static_cast<double>(replications);
  return rates;
}

inline double run_type1_experiment(std::size_t n, double alpha,
                                   std::size_t replications, std::size_t B,
                                   std::uint64_t seed, std::size_t p = 50) {
  return run_type1_experiment(n, std::vector<double>{alpha}, replications, B,
                              seed, p)
      .front();
}

// Sweep of the u1 outlier-covariance parameters k and mu (c fixed at 1);
// cells are row-major over (k, mu).
struct a1_result {
  std::vector<double> k_values;
  std::vector<double> mu_values;
  std::vector<experiment_result> cells;
};

inline a1_result run_sensitivity_a1(
    const std::vector<double>& k_values = {2, 4, 6},
    const std::vector<double>& mu_values = {0.1, 0.5, 0.7},
    std::size_t replicates = 100, std::uint64_t seed = 0) {
  a1_result out;
  out.k_values = k_values;
  out.mu_values = mu_values;
  out.cells.reserve(k_values.size() * mu_values.size());
  std::size_t cell = 0;
  for (double k : k_values)
    for (double mu : mu_values) {
      model_spec spec;
      spec.model = model_id::u1;
      spec.outlier_cov = covariance_override{k, mu, 1.0};
      out.cells.push_back(run_detection_experiment(
          spec, replicates, derive_seed(seed, cell)));
      ++cell;
    }
  return out;
}

// Contamination sweep across the five univariate models; cells are
// model-major over (model, theta).
struct a2_result {
  std::vector<double> theta_values;
  std::vector<model_id> models;
  std::vector<experiment_result> cells;
};

inline a2_result run_sensitivity_a2(
    const std::vector<double>& theta_values = {0.1, 0.15, 0.2, 0.25, 0.3},
    std::size_t replicates = 100, std::uint64_t seed = 0) {
  a2_result out;
  out.theta_values = theta_values;
  out.models = {model_id::u1, model_id::u2, model_id::u3, model_id::u4,
                model_id::u5};
  out.cells.reserve(out.models.size() * theta_values.size());
  std::size_t cell = 0;
  for (model_id m : out.models)
    for (double theta : theta_values) {
      model_spec spec;
      spec.model = m;
      spec.theta = theta;
      out.cells.push_back(run_detection_experiment(
          spec, replicates, derive_seed(seed, cell)));
      ++cell;
    }
  return out;
}

}  // namespace depthscan
