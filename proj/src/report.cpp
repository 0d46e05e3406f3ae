#include "sparserep/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "sparserep/error.hpp"

namespace sparserep {

using nlohmann::json;

std::string_view to_string(ReportSink sink) {
  switch (sink) {
    case ReportSink::Json: return "json";
    case ReportSink::Csv: return "csv";
    case ReportSink::Svg: return "svg";
  }
  return "json";
}

std::vector<ReportSink> parse_report_sinks(std::string_view list) {
  std::vector<ReportSink> out;
  std::size_t start = 0;
  while (start <= list.size()) {
    const auto comma = list.find(',', start);
    auto item = list.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    if (!item.empty()) {
      ReportSink sink;
      if (item == "json") {
        sink = ReportSink::Json;
      } else if (item == "csv") {
        sink = ReportSink::Csv;
      } else if (item == "svg") {
        sink = ReportSink::Svg;
      } else {
        throw Error(ErrorKind::InvalidArgument, "unknown report sink '" + std::string(item) + "'");
      }
      if (std::find(out.begin(), out.end(), sink) == out.end()) out.push_back(sink);
    }
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (out.empty()) throw Error(ErrorKind::InvalidArgument, "no report sink given");
  return out;
}

namespace {

json counts_to_json(const ErrorCounts& c) {
  return {{"n_test", c.n_test},
          {"n_dominant", c.n_dominant},
          {"n_dominant_wrong", c.n_dominant_wrong},
          {"n_nondominant_wrong", c.n_nondominant_wrong}};
}

ErrorCounts counts_from_json(const json& j) {
  ErrorCounts c;
  c.n_test = j.at("n_test").get<std::int64_t>();
  c.n_dominant = j.at("n_dominant").get<std::int64_t>();
  c.n_dominant_wrong = j.at("n_dominant_wrong").get<std::int64_t>();
  c.n_nondominant_wrong = j.at("n_nondominant_wrong").get<std::int64_t>();
  return c;
}

json config_to_json(const BenchConfig& c) {
  std::vector<std::string> solvers;
  for (const auto kind : c.solvers) solvers.emplace_back(to_string(kind));
  return {{"solvers", solvers},
          {"sparsity_max", c.sparsity_max},
          {"baseline_dims", c.baseline_dims},
          {"knn_k", c.knn_k},
          {"monte_carlo", c.monte_carlo},
          {"split_fraction", c.split_fraction},
          {"master_seed", c.master_seed},
          {"dataset", c.dataset},
          {"format", std::string(to_string(c.format))},
          {"similarity_input", c.similarity_input},
          {"run_baselines", c.run_baselines},
          {"lda_ridge", c.lda_ridge},
          {"threads", c.threads}};
}

BenchConfig config_from_json(const json& j) {
  BenchConfig c;
  c.solvers.clear();
  for (const auto& name : j.at("solvers")) c.solvers.push_back(parse_solver_kind(name.get<std::string>()));
  c.sparsity_max = j.at("sparsity_max").get<Index>();
  c.baseline_dims = j.at("baseline_dims").get<Index>();
  c.knn_k = j.at("knn_k").get<Index>();
  c.monte_carlo = j.at("monte_carlo").get<Index>();
  c.split_fraction = j.at("split_fraction").get<double>();
  c.master_seed = j.at("master_seed").get<std::uint64_t>();
  c.dataset = j.at("dataset").get<std::string>();
  c.format = parse_dataset_format(j.at("format").get<std::string>());
  c.similarity_input = j.at("similarity_input").get<bool>();
  c.run_baselines = j.at("run_baselines").get<bool>();
  c.lda_ridge = j.at("lda_ridge").get<double>();
  c.threads = j.at("threads").get<unsigned>();
  return c;
}

}  // namespace

std::string report_to_json(const BenchmarkReport& report, bool include_timings) {
  json root;
  root["schema_version"] = BenchmarkReport::kSchemaVersion;
  root["config"] = config_to_json(report.config);
  root["dataset"] = {{"name", report.dataset_name}, {"provenance", report.provenance}};

  json solvers = json::array();
  for (const auto& curve : report.solvers) {
    json pooled = json::array();
    for (const auto& c : curve.pooled) pooled.push_back(counts_to_json(c));
    solvers.push_back({{"solver", std::string(to_string(curve.kind))},
                       {"L", curve.L},
                       {"one_minus_PD", curve.one_minus_PD},
                       {"P1", curve.P1},
                       {"P2", curve.P2},
                       {"held_fraction", curve.held_fraction},
                       {"pooled_counts", pooled},
                       {"failures", curve.failures}});
  }
  root["solvers"] = solvers;

  json baselines = json::array();
  for (const auto& curve : report.baselines) {
    baselines.push_back({{"name", curve.name}, {"error", curve.error}, {"valid_dims", curve.valid_dims}});
  }
  root["baselines"] = baselines;
  root["replicate_seeds"] = report.replicate_seeds;

  json replicates = json::array();
  for (const auto& rep : report.replicates) {
    json counts = json::array();
    for (const auto& per_solver : rep.solver_counts) {
      json row = json::array();
      for (const auto& c : per_solver) row.push_back(counts_to_json(c));
      counts.push_back(row);
    }
    replicates.push_back({{"seed", rep.seed},
                          {"n_train", rep.n_train},
                          {"n_test", rep.n_test},
                          {"train_class_counts", rep.train_class_counts},
                          {"test_class_counts", rep.test_class_counts},
                          {"solver_counts", counts},
                          {"solver_held", rep.solver_held},
                          {"solver_failures", rep.solver_failures},
                          {"baseline_errors", rep.baseline_errors}});
  }
  root["replicates"] = replicates;

  if (include_timings) {
    root["timings"] = {{"split_seconds", report.timings.split_seconds},
                       {"solver_seconds", report.timings.solver_seconds},
                       {"baseline_seconds", report.timings.baseline_seconds}};
  }
  return root.dump(2) + "\n";
}

BenchmarkReport report_from_json(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::ParseError, std::string("report is not valid JSON: ") + e.what());
  }
  try {
    const int version = root.at("schema_version").get<int>();
    if (version != BenchmarkReport::kSchemaVersion) {
      throw Error(ErrorKind::ParseError, "unsupported schema_version " + std::to_string(version));
    }
    BenchmarkReport report;
    report.config = config_from_json(root.at("config"));
    if (root.contains("dataset")) {
      report.dataset_name = root["dataset"].value("name", "");
      report.provenance = root["dataset"].value("provenance", "");
    }
    for (const auto& s : root.at("solvers")) {
      SolverCurve curve;
      curve.kind = parse_solver_kind(s.at("solver").get<std::string>());
      curve.L = s.at("L").get<std::vector<double>>();
      curve.one_minus_PD = s.at("one_minus_PD").get<std::vector<double>>();
      curve.P1 = s.at("P1").get<std::vector<double>>();
      curve.P2 = s.at("P2").get<std::vector<double>>();
      curve.held_fraction = s.at("held_fraction").get<std::vector<double>>();
      for (const auto& c : s.at("pooled_counts")) curve.pooled.push_back(counts_from_json(c));
      curve.failures = s.at("failures").get<Index>();
      report.solvers.push_back(std::move(curve));
    }
    for (const auto& b : root.at("baselines")) {
      BaselineCurve curve;
      curve.name = b.at("name").get<std::string>();
      curve.error = b.at("error").get<std::vector<double>>();
      curve.valid_dims = b.at("valid_dims").get<Index>();
      report.baselines.push_back(std::move(curve));
    }
    report.replicate_seeds = root.at("replicate_seeds").get<std::vector<std::uint64_t>>();
    if (root.contains("replicates")) {
      for (const auto& r : root["replicates"]) {
        ReplicateRecord rep;
        rep.seed = r.at("seed").get<std::uint64_t>();
        rep.n_train = r.at("n_train").get<Index>();
        rep.n_test = r.at("n_test").get<Index>();
        rep.train_class_counts = r.at("train_class_counts").get<std::vector<Index>>();
        rep.test_class_counts = r.at("test_class_counts").get<std::vector<Index>>();
        for (const auto& per_solver : r.at("solver_counts")) {
          std::vector<ErrorCounts> row;
          for (const auto& c : per_solver) row.push_back(counts_from_json(c));
          rep.solver_counts.push_back(std::move(row));
        }
        rep.solver_held = r.at("solver_held").get<std::vector<std::vector<Index>>>();
        rep.solver_failures = r.at("solver_failures").get<std::vector<Index>>();
        rep.baseline_errors = r.at("baseline_errors").get<std::vector<std::vector<double>>>();
        report.replicates.push_back(std::move(rep));
      }
    }
    if (root.contains("timings")) {
      const auto& t = root["timings"];
      report.timings.split_seconds = t.at("split_seconds").get<double>();
      report.timings.solver_seconds = t.at("solver_seconds").get<double>();
      report.timings.baseline_seconds = t.at("baseline_seconds").get<double>();
    }
    return report;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("malformed report: ") + e.what());
  }
}

std::string report_to_csv(const BenchmarkReport& report) {
  std::ostringstream out;
  out << std::setprecision(17);
  out << "method,index,metric,value\n";
  for (const auto& curve : report.solvers) {
    const auto name = to_string(curve.kind);
    for (std::size_t s = 0; s < curve.L.size(); ++s) {
      out << name << ',' << (s + 1) << ",L," << curve.L[s] << '\n';
      out << name << ',' << (s + 1) << ",one_minus_PD," << curve.one_minus_PD[s] << '\n';
      out << name << ',' << (s + 1) << ",P1," << curve.P1[s] << '\n';
      out << name << ',' << (s + 1) << ",P2," << curve.P2[s] << '\n';
    }
  }
  for (const auto& curve : report.baselines) {
    for (std::size_t d = 0; d < curve.error.size(); ++d) {
      out << curve.name << ',' << (d + 1) << ",error," << curve.error[d] << '\n';
    }
  }
  return out.str();
}

namespace {

constexpr double kPanelWidth = 360.0;
constexpr double kPanelHeight = 260.0;
constexpr double kMarginLeft = 52.0;
constexpr double kMarginRight = 12.0;
constexpr double kMarginTop = 28.0;
constexpr double kMarginBottom = 40.0;

constexpr const char* kSolverColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};
constexpr const char* kBaselineColors[] = {"#7f7f7f", "#8c564b", "#e377c2", "#17becf"};

struct Series {
  std::string label;
  std::string color;
  bool dashed = false;
  std::vector<double> values;  // at x = 1, 2, ...
};

std::string fmt(double v) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(2) << v;
  return s.str();
}

std::string escape(const std::string& text) {
  std::string out;
  for (const char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

void draw_panel(std::ostringstream& out, double x0, const std::string& title, const std::string& y_label,
                const std::string& x_label, const std::vector<Series>& series) {
  std::size_t x_max = 1;
  double y_max = 0.0;
  for (const auto& s : series) {
    x_max = std::max(x_max, s.values.size());
    for (const double v : s.values) {
      if (std::isfinite(v)) y_max = std::max(y_max, v);
    }
  }
  y_max = y_max > 0.0 ? std::min(1.0, y_max * 1.05) : 1.0;
  if (y_max <= 0.0) y_max = 1.0;

  const double left = x0 + kMarginLeft;
  const double right = x0 + kPanelWidth - kMarginRight;
  const double top = kMarginTop;
  const double bottom = kPanelHeight - kMarginBottom;
  const auto px = [&](double x) {
    return x_max > 1 ? left + (x - 1.0) / static_cast<double>(x_max - 1) * (right - left) : (left + right) / 2;
  };
  const auto py = [&](double y) { return bottom - y / y_max * (bottom - top); };

  out << "<g>\n";
  out << "<text x=\"" << fmt((left + right) / 2) << "\" y=\"16\" text-anchor=\"middle\" font-size=\"13\">"
      << escape(title) << "</text>\n";
  out << "<line x1=\"" << fmt(left) << "\" y1=\"" << fmt(bottom) << "\" x2=\"" << fmt(right) << "\" y2=\""
      << fmt(bottom) << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << fmt(left) << "\" y1=\"" << fmt(top) << "\" x2=\"" << fmt(left) << "\" y2=\""
      << fmt(bottom) << "\" stroke=\"black\"/>\n";
  for (int t = 0; t <= 4; ++t) {
    const double v = y_max * t / 4.0;
    out << "<text x=\"" << fmt(left - 4) << "\" y=\"" << fmt(py(v) + 4) << "\" text-anchor=\"end\" font-size=\"10\">"
        << std::setprecision(3) << v << "</text>\n";
  }
  out << "<text x=\"" << fmt(left) << "\" y=\"" << fmt(bottom + 14) << "\" text-anchor=\"middle\" font-size=\"10\">1</text>\n";
  out << "<text x=\"" << fmt(right) << "\" y=\"" << fmt(bottom + 14) << "\" text-anchor=\"middle\" font-size=\"10\">"
      << x_max << "</text>\n";
  out << "<text x=\"" << fmt((left + right) / 2) << "\" y=\"" << fmt(bottom + 30)
      << "\" text-anchor=\"middle\" font-size=\"11\">" << escape(x_label) << "</text>\n";
  out << "<text x=\"" << fmt(x0 + 14) << "\" y=\"" << fmt((top + bottom) / 2) << "\" text-anchor=\"middle\" "
      << "font-size=\"11\" transform=\"rotate(-90 " << fmt(x0 + 14) << ' ' << fmt((top + bottom) / 2) << ")\">"
      << escape(y_label) << "</text>\n";

  double legend_y = top + 10;
  for (const auto& s : series) {
    if (s.values.empty()) continue;
    out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\"";
    if (s.dashed) out << " stroke-dasharray=\"5,3\"";
    out << " points=\"";
    for (std::size_t i = 0; i < s.values.size(); ++i) {
      if (i > 0) out << ' ';
      out << fmt(px(static_cast<double>(i + 1))) << ',' << fmt(py(std::clamp(s.values[i], 0.0, y_max)));
    }
    out << "\"/>\n";
    out << "<text x=\"" << fmt(right - 4) << "\" y=\"" << fmt(legend_y) << "\" text-anchor=\"end\" font-size=\"10\" fill=\""
        << s.color << "\">" << escape(s.label) << "</text>\n";
    legend_y += 12;
  }
  out << "</g>\n";
}

}  // namespace

std::string report_to_svg(const BenchmarkReport& report) {
  std::vector<Series> error_panel, dominance_panel, p2_panel;
  for (std::size_t k = 0; k < report.solvers.size(); ++k) {
    const auto& curve = report.solvers[k];
    const std::string color = kSolverColors[k % std::size(kSolverColors)];
    const std::string name(to_string(curve.kind));
    error_panel.push_back({name, color, false, curve.L});
    dominance_panel.push_back({name, color, false, curve.one_minus_PD});
    p2_panel.push_back({name, color, false, curve.P2});
  }
  for (std::size_t b = 0; b < report.baselines.size(); ++b) {
    const auto& curve = report.baselines[b];
    error_panel.push_back({curve.name, kBaselineColors[b % std::size(kBaselineColors)], true, curve.error});
  }

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(3 * kPanelWidth) << "\" height=\""
      << fmt(kPanelHeight) << "\" viewBox=\"0 0 " << fmt(3 * kPanelWidth) << ' ' << fmt(kPanelHeight)
      << "\" font-family=\"sans-serif\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  const std::string x_label = report.baselines.empty() ? "sparsity s" : "sparsity s / dimension d";
  draw_panel(out, 0.0, "SRC error", "L", x_label, error_panel);
  draw_panel(out, kPanelWidth, "Class dominance error", "1 - P_D", "sparsity s", dominance_panel);
  draw_panel(out, 2 * kPanelWidth, "Error when dominance fails", "P2", "sparsity s", p2_panel);
  out << "</svg>\n";
  return out.str();
}

std::filesystem::path emit_report(const BenchmarkReport& report, ReportSink sink, const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorKind::IoError, "cannot create " + out_dir.string() + ": " + ec.message());
  std::string body;
  std::filesystem::path path;
  switch (sink) {
    case ReportSink::Json:
      body = report_to_json(report);
      path = out_dir / "report.json";
      break;
    case ReportSink::Csv:
      body = report_to_csv(report);
      path = out_dir / "report.csv";
      break;
    case ReportSink::Svg:
      body = report_to_svg(report);
      path = out_dir / "report.svg";
      break;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error(ErrorKind::IoError, "cannot write " + path.string());
  file << body;
  if (!file) throw Error(ErrorKind::IoError, "write failed for " + path.string());
  return path;
}

}  // namespace sparserep
