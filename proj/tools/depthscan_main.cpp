// depthscan: detect / test / simulate / benchmark on functional-data CSVs.
// Results go to stdout, diagnostics to stderr. Exit codes: 0 success,
// 2 malformed input, 3 numeric failure.
#include "CLI11.hpp"

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "depthscan/depthscan.hpp"

namespace {

using depthscan::derive_seed;
using depthscan::model_id;
using nlohmann::ordered_json;

struct detect_options {
  std::vector<std::string> inputs;
  double factor_shape = 3.0;
  double factor_mag = 1.5;
  double coverage = 0.5;
  bool bivariate = false;
  std::string out;
  std::string plot_dir;
};

struct test_options {
  std::string input;
  double alpha = 0.05;
  std::size_t bootstrap = 500;
  std::uint64_t seed = 0;
  std::string out;
};

struct simulate_options {
  std::string model;
  std::size_t n = 100;
  std::size_t p = 50;
  double theta = 0.1;
  std::uint64_t seed = 0;
  double k = 6.0;
  double mu = 0.1;
  double c = 1.0;
  bool has_override = false;
  std::string prefix;
};

struct benchmark_options {
  std::string table;
  std::size_t replicates = 0;  // 0 = scale default
  bool replicates_given = false;
  std::string scale = "desk";
  std::uint64_t seed = 0;
  std::string out;
};

void print_id_list(const char* label, const std::vector<std::size_t>& idx,
                   const std::vector<std::string>& ids) {
  std::cout << label << " (" << idx.size() << ")";
  for (std::size_t i : idx) std::cout << ' ' << ids[i];
  std::cout << '\n';
}

int run_detect(const detect_options& opt) {
  depthscan::detect_config config;
  config.shape_factor = opt.factor_shape;
  config.magnitude_factor = opt.factor_mag;
  config.coverage = opt.coverage;

  const bool bivariate = opt.bivariate || opt.inputs.size() == 2;
  ordered_json meta_config = {{"factor_shape", opt.factor_shape},
                              {"factor_mag", opt.factor_mag},
                              {"coverage", opt.coverage},
                              {"bivariate", bivariate}};

  depthscan::outlier_report report;
  std::vector<std::string> ids;
  if (bivariate) {
    const auto sample =
        opt.inputs.size() == 2
            ? depthscan::read_bivariate_csv(opt.inputs[0], opt.inputs[1])
            : depthscan::read_bivariate_long_csv(opt.inputs[0]);
    report = depthscan::detect(sample, config);
    ids = sample.ids;
    if (!opt.plot_dir.empty())
      depthscan::write_plot_data(opt.plot_dir, sample, report);
  } else {
    const auto sample = depthscan::read_curves_csv(opt.inputs[0]);
    report = depthscan::detect(sample, config);
    ids = sample.ids;
    if (!opt.plot_dir.empty())
      depthscan::write_plot_data(opt.plot_dir, sample, report);
  }

  const auto doc =
      depthscan::report_to_json(report, ids, std::nullopt, meta_config);
  if (opt.out.empty()) {
    std::cout << doc.dump(2) << '\n';
  } else {
    depthscan::write_report(opt.out, doc);
    print_id_list("magnitude", report.magnitude_indices, ids);
    print_id_list("shape", report.shape_indices, ids);
    std::cout << "report " << opt.out << '\n';
  }
  return 0;
}

int run_test(const test_options& opt) {
  const auto sample = depthscan::read_curves_csv(opt.input);
  const auto result =
      depthscan::existence_test(sample, opt.alpha, opt.bootstrap, opt.seed);
  auto report = depthscan::detect(sample);
  report.test = result;

  std::cout << (result.reject ? "REJECT" : "FAIL-TO-REJECT") << '\n';

  ordered_json meta_config = {{"alpha", opt.alpha}, {"B", opt.bootstrap}};
  const auto doc =
      depthscan::report_to_json(report, sample.ids, opt.seed, meta_config);
  if (opt.out.empty())
    std::cout << doc.dump(2) << '\n';
  else
    depthscan::write_report(opt.out, doc);
  return 0;
}

model_id parse_model(std::string name) {
  for (char& ch : name) ch = static_cast<char>(std::toupper(ch));
  if (name == "U1") return model_id::u1;
  if (name == "U2") return model_id::u2;
  if (name == "U3") return model_id::u3;
  if (name == "U4") return model_id::u4;
  if (name == "U5") return model_id::u5;
  if (name == "M1") return model_id::m1;
  if (name == "M2") return model_id::m2;
  if (name == "M3") return model_id::m3;
  throw depthscan::out_of_range("unknown model '" + name +
                                "' (expected U1..U5 or M1..M3)");
}

int run_simulate(const simulate_options& opt) {
  depthscan::model_spec spec;
  spec.model = parse_model(opt.model);
  spec.n = opt.n;
  spec.p = opt.p;
  spec.theta = opt.theta;
  spec.seed = opt.seed;
  if (opt.has_override)
    spec.outlier_cov = depthscan::covariance_override{opt.k, opt.mu, opt.c};

  const auto labeled = depthscan::generate(spec);
  if (labeled.bivariate()) {
    const auto& s = labeled.bivariate_view();
    depthscan::write_bivariate_csv(opt.prefix + "_c1.csv",
                                   opt.prefix + "_c2.csv", s);
    depthscan::write_labels_csv(opt.prefix + "_labels.csv",
                                depthscan::resolved_ids(s),
                                labeled.outlier_indices);
    std::cout << "wrote " << opt.prefix << "_c1.csv " << opt.prefix
              << "_c2.csv " << opt.prefix << "_labels.csv\n";
  } else {
    const auto& s = labeled.univariate();
    depthscan::write_curves_csv(opt.prefix + ".csv", s);
    depthscan::write_labels_csv(opt.prefix + "_labels.csv",
                                depthscan::resolved_ids(s),
                                labeled.outlier_indices);
    std::cout << "wrote " << opt.prefix << ".csv " << opt.prefix
              << "_labels.csv\n";
  }
  return 0;
}

void emit_table(const std::string& out, const std::string& csv) {
  if (out.empty()) {
    std::cout << csv;
  } else {
    depthscan::detail::write_text(out, csv);
    std::cout << "wrote " << out << '\n';
  }
}

int run_benchmark(const benchmark_options& opt) {
  if (opt.scale != "desk" && opt.scale != "paper")
    throw depthscan::out_of_range("scale must be desk or paper");
  const bool paper = opt.scale == "paper";
  if (opt.replicates_given && opt.replicates == 0)
    throw depthscan::out_of_range("replicates must be positive");

  if (opt.table == "1" || opt.table == "2") {
    const std::size_t reps =
        opt.replicates_given ? opt.replicates : (paper ? 500u : 100u);
    const std::vector<model_id> models =
        opt.table == "1"
            ? std::vector<model_id>{model_id::u1, model_id::u2, model_id::u3,
                                    model_id::u4, model_id::u5}
            : std::vector<model_id>{model_id::m1, model_id::m2, model_id::m3};
    std::vector<depthscan::experiment_result> results;
    for (std::size_t i = 0; i < models.size(); ++i) {
      depthscan::model_spec spec;
      spec.model = models[i];
      results.push_back(depthscan::run_detection_experiment(
          spec, reps, derive_seed(opt.seed, i)));
    }
    emit_table(opt.out, depthscan::detection_table_csv(results));
    return 0;
  }

  if (opt.table == "3") {
    const std::size_t reps =
        opt.replicates_given ? opt.replicates : (paper ? 500u : 200u);
    const std::size_t bootstrap = paper ? 500 : 250;
    const std::vector<std::size_t> sizes =
        paper ? std::vector<std::size_t>{1000, 10000, 100000}
              : std::vector<std::size_t>{100};
    const std::vector<double> alphas = {0.01, 0.05, 0.10};
    std::vector<std::vector<double>> rates;
    for (std::size_t i = 0; i < sizes.size(); ++i)
      rates.push_back(depthscan::run_type1_experiment(
          sizes[i], alphas, reps, bootstrap, derive_seed(opt.seed, i)));
    emit_table(opt.out, depthscan::type1_table_csv(sizes, alphas, rates));
    return 0;
  }

  if (opt.table == "a1") {
    const std::size_t reps =
        opt.replicates_given ? opt.replicates : (paper ? 500u : 100u);
    const auto result = depthscan::run_sensitivity_a1(
        {2.0, 4.0, 6.0}, {0.1, 0.5, 0.7}, reps, opt.seed);
    emit_table(opt.out, depthscan::a1_table_csv(result));
    return 0;
  }

  if (opt.table == "a2") {
    const std::size_t reps =
        opt.replicates_given ? opt.replicates : (paper ? 500u : 100u);
    const auto result = depthscan::run_sensitivity_a2(
        {0.1, 0.15, 0.2, 0.25, 0.3}, reps, opt.seed);
    emit_table(opt.out, depthscan::a2_table_csv(result));
    return 0;
  }

  throw depthscan::out_of_range("table must be one of 1, 2, 3, a1, a2");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pointwise-depth outlier detection for functional data"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "0.1.0");

  detect_options det;
  auto* detect_cmd = app.add_subcommand(
      "detect", "Flag magnitude and shape outliers in a curve CSV");
  detect_cmd->add_option("input", det.inputs, "curve CSV file(s)")
      ->required()
      ->expected(1, 2);
  detect_cmd->add_option("--factor-shape", det.factor_shape,
                         "shape fence factor F");
  detect_cmd->add_option("--factor-mag", det.factor_mag,
                         "magnitude envelope factor");
  detect_cmd->add_option("--coverage", det.coverage,
                         "central-region coverage");
  detect_cmd->add_flag("--bivariate", det.bivariate,
                       "treat input as bivariate (long format if one file)");
  detect_cmd->add_option("--out", det.out, "report JSON path");
  detect_cmd->add_option("--plot-data", det.plot_dir,
                         "directory for plot-data CSVs");

  test_options tst;
  auto* test_cmd = app.add_subcommand(
      "test", "Bootstrap test for the existence of shape outliers");
  test_cmd->add_option("input", tst.input, "curve CSV file")->required();
  test_cmd->add_option("--alpha", tst.alpha, "significance level");
  test_cmd->add_option("--B", tst.bootstrap, "bootstrap replicates");
  test_cmd->add_option("--seed", tst.seed, "bootstrap seed");
  test_cmd->add_option("--out", tst.out, "report JSON path");

  simulate_options sim;
  auto* sim_cmd =
      app.add_subcommand("simulate", "Generate a labeled simulation sample");
  sim_cmd->add_option("--model", sim.model, "U1..U5 or M1..M3")->required();
  sim_cmd->add_option("--n", sim.n, "number of curves");
  sim_cmd->add_option("--p", sim.p, "grid points");
  sim_cmd->add_option("--theta", sim.theta, "contamination level");
  sim_cmd->add_option("--seed", sim.seed, "generation seed");
  auto* k_opt =
      sim_cmd->add_option("--k", sim.k, "outlier covariance scale (U1)");
  auto* mu_opt =
      sim_cmd->add_option("--mu", sim.mu, "outlier covariance exponent (U1)");
  auto* c_opt =
      sim_cmd->add_option("--c", sim.c, "outlier covariance range (U1)");
  sim_cmd->add_option("--out", sim.prefix, "output path prefix")->required();

  benchmark_options bench;
  auto* bench_cmd =
      app.add_subcommand("benchmark", "Replicated detection/test experiments");
  bench_cmd->add_option("--table", bench.table, "1, 2, 3, a1 or a2")
      ->required();
  auto* reps_opt =
      bench_cmd->add_option("--replicates", bench.replicates,
                            "replicates per cell (default per scale)");
  bench_cmd->add_option("--scale", bench.scale, "desk or paper");
  bench_cmd->add_option("--seed", bench.seed, "master seed");
  bench_cmd->add_option("--out", bench.out, "output CSV path");

  try {
    app.parse(argc, argv);
    sim.has_override =
        k_opt->count() > 0 || mu_opt->count() > 0 || c_opt->count() > 0;
    bench.replicates_given = reps_opt->count() > 0;

    if (detect_cmd->parsed()) return run_detect(det);
    if (test_cmd->parsed()) return run_test(tst);
    if (sim_cmd->parsed()) return run_simulate(sim);
    return run_benchmark(bench);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << '\n';
    return 2;
  } catch (const depthscan::error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return depthscan::is_input_error(e) ? 2 : 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}
