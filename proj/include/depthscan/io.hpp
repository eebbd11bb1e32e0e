// File formats: curve CSVs (wide, one row per curve; bivariate data as two
// files sharing ids or one long-format file with a component column),
// label CSVs, the JSON detection/test report, plot-data CSVs, and the
// benchmark table CSVs. Doubles are written with enough digits to parse
// back bit-identically.
#pragma once

#include <nlohmann/json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "depthscan/bench.hpp"
#include "depthscan/errors.hpp"
#include "depthscan/outlier.hpp"
#include "depthscan/sim_models.hpp"
#include "depthscan/types.hpp"

namespace depthscan {

inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Materialized id list (row numbers when the sample carries no ids).
template <typename Sample>
std::vector<std::string> resolved_ids(const Sample& s) {
  std::vector<std::string> out;
  out.reserve(s.n());
  for (std::size_t i = 0; i < s.n(); ++i) out.push_back(s.id_of(i));
  return out;
}

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(field);
      field.clear();
    } else if (ch != '\r') {
      field += ch;
    }
  }
  out.push_back(field);
  return out;
}

inline double parse_double(const std::string& text, const std::string& what) {
  if (text.empty()) throw io_error("empty " + what);
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (end != text.c_str() + text.size())
    throw io_error("malformed " + what + ": '" + text + "'");
  return v;
}

inline void check_id(const std::string& id) {
  if (id.empty()) throw io_error("empty curve id");
  for (char ch : id)
    if (ch == ',' || ch == '\n' || ch == '"')
      throw io_error("curve id contains a CSV delimiter: '" + id + "'");
}

inline std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) lines.push_back(line);
  }
  if (lines.empty()) throw io_error("empty file " + path);
  return lines;
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw io_error("cannot write " + path);
  out << text;
  if (!out) throw io_error("write failed for " + path);
}

inline time_grid parse_grid_header(const std::vector<std::string>& header,
                                   std::size_t skip,
                                   const std::string& path) {
  if (header.size() <= skip)
    throw io_error("header has no grid columns in " + path);
  time_grid grid;
  grid.points.reserve(header.size() - skip);
  for (std::size_t j = skip; j < header.size(); ++j)
    grid.points.push_back(parse_double(header[j], "grid value in " + path));
  return grid;
}

}  // namespace detail

inline void write_curves_csv(const std::string& path,
                             const functional_sample& s) {
  validate(s);
  std::ostringstream out;
  out << "id";
  for (double t : s.grid.points) out << ',' << format_double(t);
  out << '\n';
  for (std::size_t i = 0; i < s.n(); ++i) {
    const auto id = s.id_of(i);
    detail::check_id(id);
    out << id;
    for (std::size_t j = 0; j < s.p(); ++j)
      out << ','
          << format_double(s.values(static_cast<Eigen::Index>(i),
                                    static_cast<Eigen::Index>(j)));
    out << '\n';
  }
  detail::write_text(path, out.str());
}

inline functional_sample read_curves_csv(const std::string& path) {
  const auto lines = detail::read_lines(path);
  const auto header = detail::split_csv_line(lines[0]);
  if (header.empty() || header[0] != "id")
    throw io_error("header must start with 'id' in " + path);
  if (header.size() > 1 && header[1] == "component")
    throw io_error(path + " is a long-format bivariate file");

  functional_sample s;
  s.grid = detail::parse_grid_header(header, 1, path);
  const std::size_t p = s.grid.size();
  const std::size_t n = lines.size() - 1;
  s.values.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(p));
  s.ids.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto fields = detail::split_csv_line(lines[i + 1]);
    if (fields.size() != p + 1)
      throw io_error("row " + std::to_string(i + 2) + " has " +
                     std::to_string(fields.size()) + " fields, expected " +
                     std::to_string(p + 1) + " in " + path);
    detail::check_id(fields[0]);
    for (const auto& seen : s.ids)
      if (seen == fields[0])
        throw io_error("duplicate curve id '" + fields[0] + "' in " + path);
    s.ids.push_back(fields[0]);
    for (std::size_t j = 0; j < p; ++j)
      s.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          detail::parse_double(fields[j + 1], "value in " + path);
  }
  validate(s);
  return s;
}

inline void write_bivariate_csv(const std::string& path1,
                                const std::string& path2,
                                const bivariate_sample& s) {
  validate(s);
  functional_sample c;
  c.grid = s.grid;
  c.ids = s.ids;
  c.values = s.component1;
  write_curves_csv(path1, c);
  c.values = s.component2;
  write_curves_csv(path2, c);
}

inline bivariate_sample read_bivariate_csv(const std::string& path1,
                                           const std::string& path2) {
  const auto c1 = read_curves_csv(path1);
  const auto c2 = read_curves_csv(path2);
  if (c1.grid.points != c2.grid.points)
    throw io_error("component files disagree on the grid");
  if (c1.ids != c2.ids)
    throw io_error("component files disagree on curve ids");
  bivariate_sample s;
  s.grid = c1.grid;
  s.ids = c1.ids;
  s.component1 = c1.values;
  s.component2 = c2.values;
  validate(s);
  return s;
}

// Long format: header "id,component,<grid>"; two rows per curve, one for
// each component, paired by id.
inline void write_bivariate_long_csv(const std::string& path,
                                     const bivariate_sample& s) {
  validate(s);
  std::ostringstream out;
  out << "id,component";
  for (double t : s.grid.points) out << ',' << format_double(t);
  out << '\n';
  for (std::size_t i = 0; i < s.n(); ++i) {
    const auto id = s.id_of(i);
    detail::check_id(id);
    for (int comp = 1; comp <= 2; ++comp) {
      const auto& values = comp == 1 ? s.component1 : s.component2;
      out << id << ',' << comp;
      for (std::size_t j = 0; j < s.p(); ++j)
        out << ','
            << format_double(values(static_cast<Eigen::Index>(i),
                                    static_cast<Eigen::Index>(j)));
      out << '\n';
    }
  }
  detail::write_text(path, out.str());
}

inline bivariate_sample read_bivariate_long_csv(const std::string& path) {
  const auto lines = detail::read_lines(path);
  const auto header = detail::split_csv_line(lines[0]);
  if (header.size() < 2 || header[0] != "id" || header[1] != "component")
    throw io_error("header must start with 'id,component' in " + path);

  bivariate_sample s;
  s.grid = detail::parse_grid_header(header, 2, path);
  const std::size_t p = s.grid.size();
  std::vector<std::vector<double>> rows1, rows2;
  for (std::size_t row = 1; row < lines.size(); ++row) {
    const auto fields = detail::split_csv_line(lines[row]);
    if (fields.size() != p + 2)
      throw io_error("row " + std::to_string(row + 1) +
                     " has wrong field count in " + path);
    detail::check_id(fields[0]);
    const auto comp = fields[1];
    if (comp != "1" && comp != "2")
      throw io_error("component must be 1 or 2 in " + path);
    std::size_t idx = s.ids.size();
    for (std::size_t i = 0; i < s.ids.size(); ++i)
      if (s.ids[i] == fields[0]) {
        idx = i;
        break;
      }
    if (idx == s.ids.size()) {
      s.ids.push_back(fields[0]);
      rows1.emplace_back();
      rows2.emplace_back();
    }
    auto& slot = comp == "1" ? rows1[idx] : rows2[idx];
    if (!slot.empty())
      throw io_error("duplicate (id, component) pair for '" + fields[0] +
                     "' in " + path);
    slot.resize(p);
    for (std::size_t j = 0; j < p; ++j)
      slot[j] = detail::parse_double(fields[j + 2], "value in " + path);
  }
  const std::size_t n = s.ids.size();
  for (std::size_t i = 0; i < n; ++i)
    if (rows1[i].empty() || rows2[i].empty())
      throw io_error("curve '" + s.ids[i] + "' is missing a component in " +
                     path);
  s.component1.resize(static_cast<Eigen::Index>(n),
                      static_cast<Eigen::Index>(p));
  s.component2.resize(static_cast<Eigen::Index>(n),
                      static_cast<Eigen::Index>(p));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < p; ++j) {
      s.component1(static_cast<Eigen::Index>(i),
                   static_cast<Eigen::Index>(j)) = rows1[i][j];
      s.component2(static_cast<Eigen::Index>(i),
                   static_cast<Eigen::Index>(j)) = rows2[i][j];
    }
  validate(s);
  return s;
}

inline void write_labels_csv(const std::string& path,
                             const std::vector<std::string>& ids,
                             const std::vector<std::size_t>& outliers) {
  std::ostringstream out;
  out << "id,is_outlier\n";
  std::size_t next = 0;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    detail::check_id(ids[i]);
    const bool flagged = next < outliers.size() && outliers[next] == i;
    if (flagged) ++next;
    out << ids[i] << ',' << (flagged ? 1 : 0) << '\n';
  }
  detail::write_text(path, out.str());
}

inline std::vector<std::size_t> read_labels_csv(
    const std::string& path, const std::vector<std::string>& ids) {
  const auto lines = detail::read_lines(path);
  if (detail::split_csv_line(lines[0]) !=
      std::vector<std::string>{"id", "is_outlier"})
    throw io_error("labels header must be 'id,is_outlier' in " + path);
  std::vector<std::size_t> out;
  for (std::size_t row = 1; row < lines.size(); ++row) {
    const auto fields = detail::split_csv_line(lines[row]);
    if (fields.size() != 2)
      throw io_error("labels row has wrong field count in " + path);
    if (fields[1] != "0" && fields[1] != "1")
      throw io_error("is_outlier must be 0 or 1 in " + path);
    if (fields[1] == "1") {
      bool found = false;
      for (std::size_t i = 0; i < ids.size(); ++i)
        if (ids[i] == fields[0]) {
          out.push_back(i);
          found = true;
          break;
        }
      if (!found)
        throw io_error("label id '" + fields[0] + "' not in the sample");
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Report JSON. ids maps original curve indices to the ids used in the
// document; meta.seed is null for operations that take no seed.
inline nlohmann::ordered_json report_to_json(
    const outlier_report& report, const std::vector<std::string>& ids,
    std::optional<std::uint64_t> seed, const nlohmann::ordered_json& config,
    const std::string& version = "0.1.0") {
  nlohmann::ordered_json doc;
  doc["magnitude"] = nlohmann::ordered_json::array();
  for (std::size_t i : report.magnitude_indices)
    doc["magnitude"].push_back(ids.at(i));
  doc["shape"] = nlohmann::ordered_json::array();
  for (std::size_t i : report.shape_indices) doc["shape"].push_back(ids.at(i));

  doc["r"] = nlohmann::ordered_json::object();
  for (std::size_t k = 0; k < report.shape_curve_indices.size(); ++k)
    doc["r"][ids.at(report.shape_curve_indices[k])] = report.shape.r[k];

  doc["fences"] = {{"q1", report.fences.q1},     {"q3", report.fences.q3},
                   {"iqr", report.fences.iqr},   {"factor", report.fences.factor},
                   {"lower", report.fences.lower}, {"upper", report.fences.upper}};

  if (report.test) {
    doc["test"] = {{"statistic", report.test->statistic},
                   {"critical_value", report.test->critical_value},
                   {"alpha", report.test->alpha},
                   {"p_value", report.test->p_value},
                   {"reject", report.test->reject},
                   {"B", report.test->bootstrap_count}};
  } else {
    doc["test"] = nullptr;
  }

  doc["pwd_summary"] = nlohmann::ordered_json::object();
  for (std::size_t i = 0; i < report.depth_summary.size(); ++i) {
    const auto& f = report.depth_summary[i];
    doc["pwd_summary"][ids.at(i)] = {f.min, f.q1, f.median, f.q3, f.max};
  }

  doc["meta"] = {{"seed", nullptr}, {"config", config}, {"version", version}};
  if (seed) doc["meta"]["seed"] = *seed;
  return doc;
}

inline void write_report(const std::string& path,
                         const nlohmann::ordered_json& doc) {
  detail::write_text(path, doc.dump(2) + "\n");
}

// Inverse of report_to_json over the same id list; used to verify the
// report round-trips losslessly.
inline outlier_report report_from_json(const nlohmann::json& doc,
                                       const std::vector<std::string>& ids) {
  const auto index_of = [&](const std::string& id) {
    for (std::size_t i = 0; i < ids.size(); ++i)
      if (ids[i] == id) return i;
    throw io_error("report id '" + id + "' not in the sample");
  };
  outlier_report report;
  for (const auto& id : doc.at("magnitude"))
    report.magnitude_indices.push_back(index_of(id.get<std::string>()));
  for (const auto& id : doc.at("shape"))
    report.shape_indices.push_back(index_of(id.get<std::string>()));

  std::vector<std::pair<std::size_t, double>> r_entries;
  for (const auto& [id, value] : doc.at("r").items())
    r_entries.emplace_back(index_of(id), value.get<double>());
  std::sort(r_entries.begin(), r_entries.end());
  for (const auto& [idx, value] : r_entries) {
    report.shape_curve_indices.push_back(idx);
    report.shape.r.push_back(value);
  }

  const auto& fences = doc.at("fences");
  report.fences.q1 = fences.at("q1").get<double>();
  report.fences.q3 = fences.at("q3").get<double>();
  report.fences.iqr = fences.at("iqr").get<double>();
  report.fences.factor = fences.at("factor").get<double>();
  report.fences.lower = fences.at("lower").get<double>();
  report.fences.upper = fences.at("upper").get<double>();
  report.shape.lower_fence = report.fences.lower;
  report.shape.flags.resize(report.shape.r.size());
  for (std::size_t k = 0; k < report.shape.r.size(); ++k)
    report.shape.flags[k] = report.shape.r[k] < report.fences.lower;

  if (!doc.at("test").is_null()) {
    const auto& t = doc.at("test");
    test_result res;
    res.statistic = t.at("statistic").get<double>();
    res.critical_value = t.at("critical_value").get<double>();
    res.alpha = t.at("alpha").get<double>();
    res.p_value = t.at("p_value").get<double>();
    res.reject = t.at("reject").get<bool>();
    res.bootstrap_count = t.at("B").get<std::size_t>();
    report.test = res;
  }

  std::vector<std::pair<std::size_t, five_number_summary>> summaries;
  for (const auto& [id, arr] : doc.at("pwd_summary").items()) {
    five_number_summary f;
    f.min = arr.at(0).get<double>();
    f.q1 = arr.at(1).get<double>();
    f.median = arr.at(2).get<double>();
    f.q3 = arr.at(3).get<double>();
    f.max = arr.at(4).get<double>();
    summaries.emplace_back(index_of(id), f);
  }
  std::sort(summaries.begin(), summaries.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (auto& [idx, f] : summaries) report.depth_summary.push_back(f);
  return report;
}

// ---- plot data ------------------------------------------------------------

namespace detail {

inline bool contains_index(const std::vector<std::size_t>& v, std::size_t i) {
  return std::find(v.begin(), v.end(), i) != v.end();
}

inline std::string flag_of(const outlier_report& report, std::size_t i) {
  if (contains_index(report.magnitude_indices, i)) return "magnitude";
  if (contains_index(report.shape_indices, i)) return "shape";
  if (i == report.median_index) return "median";
  return "none";
}

// The ids a plot file gets rows for: every flagged curve plus the median
// curve, exactly. Background curves come from the input file itself.
inline std::vector<std::size_t> plot_highlight_set(
    const outlier_report& report) {
  std::vector<std::size_t> keep;
  keep.insert(keep.end(), report.magnitude_indices.begin(),
              report.magnitude_indices.end());
  keep.insert(keep.end(), report.shape_indices.begin(),
              report.shape_indices.end());
  keep.push_back(report.median_index);
  std::sort(keep.begin(), keep.end());
  keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
  return keep;
}

inline void write_flagged_curves(const std::string& path,
                                 const time_grid& grid,
                                 const Eigen::MatrixXd& values,
                                 const std::vector<std::string>& ids,
                                 const outlier_report& report) {
  std::ostringstream out;
  out << "id,flag";
  for (double t : grid.points) out << ',' << format_double(t);
  out << '\n';
  for (std::size_t i : plot_highlight_set(report)) {
    out << ids[i] << ',' << flag_of(report, i);
    for (Eigen::Index j = 0; j < values.cols(); ++j)
      out << ',' << format_double(values(static_cast<Eigen::Index>(i), j));
    out << '\n';
  }
  write_text(path, out.str());
}

inline void write_pwd_summary_csv(const std::string& path,
                                  const std::vector<std::string>& ids,
                                  const outlier_report& report) {
  std::ostringstream out;
  out << "id,flag,min,q1,median,q3,max\n";
  for (std::size_t i : plot_highlight_set(report)) {
    const auto& f = report.depth_summary[i];
    out << ids[i] << ',' << flag_of(report, i) << ',' << format_double(f.min)
        << ',' << format_double(f.q1) << ',' << format_double(f.median) << ','
        << format_double(f.q3) << ',' << format_double(f.max) << '\n';
  }
  write_text(path, out.str());
}

inline void write_pd_pairs_csv(const std::string& path,
                               const std::vector<std::string>& ids,
                               const outlier_report& report,
                               const depth_matrix& full) {
  // Consecutive pairwise-depth pairs from the full-sample matrix, so
  // magnitude-flagged curves are representable too.
  std::ostringstream out;
  out << "id,flag,pair,d_t,d_next\n";
  for (std::size_t i : plot_highlight_set(report)) {
    for (std::size_t j = 0; j + 1 < full.p(); ++j)
      out << ids[i] << ',' << flag_of(report, i) << ',' << j << ','
          << format_double(full.values(static_cast<Eigen::Index>(i),
                                       static_cast<Eigen::Index>(j)))
          << ','
          << format_double(full.values(static_cast<Eigen::Index>(i),
                                       static_cast<Eigen::Index>(j + 1)))
          << '\n';
  }
  write_text(path, out.str());
}

}  // namespace detail

// Writes curves_flags.csv, pwd_summary.csv and pd_pairs.csv under dir.
inline void write_plot_data(const std::string& dir,
                            const functional_sample& sample,
                            const outlier_report& report) {
  std::filesystem::create_directories(dir);
  const auto base = std::filesystem::path(dir);
  const auto ids = resolved_ids(sample);
  detail::write_flagged_curves((base / "curves_flags.csv").string(),
                               sample.grid, sample.values, ids, report);
  detail::write_pwd_summary_csv((base / "pwd_summary.csv").string(), ids,
                                report);
  detail::write_pd_pairs_csv((base / "pd_pairs.csv").string(), ids, report,
                             pwd_matrix(sample));
}

inline void write_plot_data(const std::string& dir,
                            const bivariate_sample& sample,
                            const outlier_report& report) {
  std::filesystem::create_directories(dir);
  const auto base = std::filesystem::path(dir);
  const auto ids = resolved_ids(sample);
  detail::write_flagged_curves((base / "curves_flags_c1.csv").string(),
                               sample.grid, sample.component1, ids, report);
  detail::write_flagged_curves((base / "curves_flags_c2.csv").string(),
                               sample.grid, sample.component2, ids, report);
  detail::write_pwd_summary_csv((base / "pwd_summary.csv").string(), ids,
                                report);
  detail::write_pd_pairs_csv((base / "pd_pairs.csv").string(), ids, report,
                             pwd_matrix(sample));
}

// ---- benchmark tables -----------------------------------------------------

inline std::string format_rate(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

inline std::string format_mean_sd(const std::optional<double>& mean,
                                  const std::optional<double>& sd) {
  if (!mean) return "";
  if (!sd) return format_rate(*mean);
  return format_rate(*mean) + " (" + format_rate(*sd) + ")";
}

inline std::string model_name(model_id m) {
  switch (m) {
    case model_id::u1: return "model1";
    case model_id::u2: return "model2";
    case model_id::u3: return "model3";
    case model_id::u4: return "model4";
    case model_id::u5: return "model5";
    case model_id::m1: return "model1";
    case model_id::m2: return "model2";
    case model_id::m3: return "model3";
  }
  return "model";
}

// Tables of detection rates: one row for this method, one TPR and one FPR
// column per model, cells "mean (sd)" in percent.
inline std::string detection_table_csv(
    const std::vector<experiment_result>& results) {
  std::ostringstream out;
  out << "method";
  for (const auto& r : results)
    out << ',' << model_name(r.spec.model) << "_tpr,"
        << model_name(r.spec.model) << "_fpr";
  out << '\n';
  out << "pwd";
  for (const auto& r : results)
    out << ',' << format_mean_sd(r.mean_tpr, r.sd_tpr) << ','
        << format_mean_sd(r.mean_fpr, r.sd_fpr);
  out << '\n';
  return out.str();
}

// Null rejection rates: one row per sample size, one column per level.
inline std::string type1_table_csv(
    const std::vector<std::size_t>& sizes,
    const std::vector<double>& alphas,
    const std::vector<std::vector<double>>& rates) {
  std::ostringstream out;
  out << "n";
  for (double a : alphas) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), ",alpha_%g", a);
    out << buf;
  }
  out << '\n';
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    out << sizes[i];
    for (double rate : rates[i]) {
      char buf[32];
      std::snprintf(buf, sizeof(buf), ",%.4f", rate);
      out << buf;
    }
    out << '\n';
  }
  return out.str();
}

// Contamination-model sensitivity: one (k, mu) column per cell, rows for
// mean and sd of each rate.
inline std::string a1_table_csv(const a1_result& r) {
  std::ostringstream out;
  out << "metric";
  for (double k : r.k_values)
    for (double mu : r.mu_values) {
      char buf[48];
      std::snprintf(buf, sizeof(buf), ",\"k=%g mu=%g\"", k, mu);
      out << buf;
    }
  out << '\n';
  const auto row = [&](const char* name, auto pick) {
    out << name;
    for (const auto& cell : r.cells) out << ',' << format_mean_sd(pick(cell), std::nullopt);
    out << '\n';
  };
  row("tpr", [](const experiment_result& c) { return c.mean_tpr; });
  row("tpr_sd", [](const experiment_result& c) { return c.sd_tpr; });
  row("fpr", [](const experiment_result& c) { return c.mean_fpr; });
  row("fpr_sd", [](const experiment_result& c) { return c.sd_fpr; });
  return out.str();
}

// Contamination-level sensitivity: rows theta x {tpr, fpr}, columns models.
inline std::string a2_table_csv(const a2_result& r) {
  std::ostringstream out;
  out << "metric,theta";
  for (auto m : r.models) out << ',' << model_name(m);
  out << '\n';
  for (const char* metric : {"tpr", "fpr"}) {
    for (std::size_t ti = 0; ti < r.theta_values.size(); ++ti) {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%s,%g", metric, r.theta_values[ti]);
      out << buf;
      for (std::size_t mi = 0; mi < r.models.size(); ++mi) {
        const auto& cell = r.cells[mi * r.theta_values.size() + ti];
        out << ','
            << (std::string(metric) == "tpr"
                    ? format_mean_sd(cell.mean_tpr, cell.sd_tpr)
                    : format_mean_sd(cell.mean_fpr, cell.sd_fpr));
      }
      out << '\n';
    }
  }
  return out.str();
}

}  // namespace depthscan
