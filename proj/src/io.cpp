#include "sparserep/io.hpp"

#include <cerrno>
#include <cmath>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <string>
#include <vector>

#include "sparserep/error.hpp"

namespace sparserep {

DatasetFormat parse_dataset_format(std::string_view name) {
  if (name == "feature" || name == "features" || name == "FeatureCsv") return DatasetFormat::FeatureCsv;
  if (name == "similarity" || name == "SimilarityCsv") return DatasetFormat::SimilarityCsv;
  throw Error(ErrorKind::InvalidArgument, "unknown dataset format '" + std::string(name) + "'");
}

std::string_view to_string(DatasetFormat format) {
  return format == DatasetFormat::FeatureCsv ? "feature" : "similarity";
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

bool skippable(std::string_view line) {
  const auto t = trim(line);
  return t.empty() || t.front() == '#';
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

double parse_real(std::string_view field, std::int64_t line) {
  const std::string text(field);
  char* end = nullptr;
  errno = 0;
  const double value = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE || !std::isfinite(value)) {
    throw Error(ErrorKind::ParseError, "line " + std::to_string(line) + ": bad number '" + text + "'", line);
  }
  return value;
}

int parse_label(std::string_view field, std::int64_t line) {
  int value = 0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size() || value < 1) {
    throw Error(ErrorKind::ParseError,
                "line " + std::to_string(line) + ": label must be a positive integer, got '" + std::string(field) + "'",
                line);
  }
  return value;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path.string());
  return in;
}

void finish(LabeledDataset& data, bool normalize) {
  data.num_classes = max_label(data.labels);
  if (normalize) {
    data.features = normalize_columns(data.features);
    data.normalized = true;
  }
  data.validate();
}

LoadedDataset load_features(const std::filesystem::path& path, bool normalize) {
  auto in = open_input(path);
  std::vector<std::vector<double>> rows;
  Labels labels;
  std::size_t width = 0;
  std::string line;
  for (std::int64_t number = 1; std::getline(in, line); ++number) {
    if (skippable(line)) continue;
    const auto fields = split_fields(line);
    if (fields.size() < 2) throw Error(ErrorKind::RaggedRow, "line " + std::to_string(number) + ": no features", number);
    if (width == 0) width = fields.size();
    if (fields.size() != width) {
      throw Error(ErrorKind::RaggedRow,
                  "line " + std::to_string(number) + ": " + std::to_string(fields.size() - 1) + " features, expected " +
                      std::to_string(width - 1),
                  number);
    }
    labels.push_back(parse_label(fields[0], number));
    std::vector<double> row(width - 1);
    for (std::size_t j = 1; j < width; ++j) row[j - 1] = parse_real(fields[j], number);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw Error(ErrorKind::EmptyInput, path.string() + " has no observations");

  LoadedDataset out;
  out.data.features.resize(static_cast<Index>(width - 1), static_cast<Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.data.features.col(static_cast<Index>(i)) = Eigen::Map<const Vector>(rows[i].data(), static_cast<Index>(width - 1));
  }
  out.data.labels = std::move(labels);
  out.data.name = path.stem().string();
  out.data.provenance = "FeatureCsv " + path.string();
  finish(out.data, normalize);
  return out;
}

LoadedDataset load_similarity(const std::filesystem::path& path, bool normalize) {
  auto in = open_input(path);
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t width = 0;
  for (std::int64_t number = 1; std::getline(in, line); ++number) {
    if (skippable(line)) continue;
    const auto fields = split_fields(line);
    if (width == 0) width = fields.size();
    if (fields.size() != width) throw Error(ErrorKind::RaggedRow, "line " + std::to_string(number) + ": ragged row", number);
    std::vector<double> row(width);
    for (std::size_t j = 0; j < width; ++j) row[j] = parse_real(fields[j], number);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw Error(ErrorKind::EmptyInput, path.string() + " is empty");
  if (rows.size() != width) {
    throw Error(ErrorKind::NotSquare,
                std::to_string(rows.size()) + " rows by " + std::to_string(width) + " columns");
  }
  const auto n = static_cast<Index>(width);
  DenseMatrix square(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) square(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  }

  const auto label_path = labels_path_for(path);
  auto label_in = open_input(label_path);
  Labels labels;
  for (std::int64_t number = 1; std::getline(label_in, line); ++number) {
    if (skippable(line)) continue;
    labels.push_back(parse_label(trim(line), number));
  }
  if (static_cast<Index>(labels.size()) != n) {
    throw Error(ErrorKind::LabelCountMismatch,
                std::to_string(labels.size()) + " labels for a " + std::to_string(n) + "x" + std::to_string(n) + " matrix");
  }

  LoadedDataset out;
  out.data.features = square;
  out.data.labels = std::move(labels);
  out.data.name = path.stem().string();
  out.data.provenance = "SimilarityCsv " + path.string() + " labels " + label_path.string();
  out.square = std::move(square);
  finish(out.data, normalize);
  return out;
}

}  // namespace

std::filesystem::path labels_path_for(const std::filesystem::path& similarity_path) {
  auto sibling = similarity_path;
  sibling.replace_extension(".labels");
  if (std::filesystem::exists(sibling)) return sibling;
  auto appended = similarity_path;
  appended += ".labels";
  if (std::filesystem::exists(appended)) return appended;
  return sibling;
}

LoadedDataset load_dataset(const std::filesystem::path& path, DatasetFormat format, bool normalize) {
  return format == DatasetFormat::FeatureCsv ? load_features(path, normalize) : load_similarity(path, normalize);
}

void write_feature_csv(const LabeledDataset& data, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + path.string());
  out << "# label";
  for (Index i = 0; i < data.dimension(); ++i) out << ",f" << (i + 1);
  out << "\n";
  out << std::setprecision(17);
  for (Index j = 0; j < data.size(); ++j) {
    out << data.labels[static_cast<std::size_t>(j)];
    for (Index i = 0; i < data.dimension(); ++i) out << ',' << data.features(i, j);
    out << '\n';
  }
  if (!out) throw Error(ErrorKind::IoError, "write failed for " + path.string());
}

}  // namespace sparserep
