#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "sparserep/benchmark.hpp"

namespace sparserep {

enum class ReportSink { Json, Csv, Svg };

std::string_view to_string(ReportSink sink);
// Comma-separated list such as "json,csv,svg".
std::vector<ReportSink> parse_report_sinks(std::string_view list);

// Full report, keyed by schema_version. Timings are wall-clock and are left
// out when `include_timings` is false, which makes the text a pure function
// of dataset, config and seed.
std::string report_to_json(const BenchmarkReport& report, bool include_timings = true);
BenchmarkReport report_from_json(const std::string& text);

// Rows of "method,index,metric,value": four metrics per solver and sparsity
// level, then one error row per baseline and dimension.
std::string report_to_csv(const BenchmarkReport& report);

// Three panels: SRC error (with baselines overlaid, dashed), 1 - P_D and P2.
std::string report_to_svg(const BenchmarkReport& report);

// Writes report.{json,csv,svg} under out_dir and returns the path written.
std::filesystem::path emit_report(const BenchmarkReport& report, ReportSink sink, const std::filesystem::path& out_dir);

}  // namespace sparserep
