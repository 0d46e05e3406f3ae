#pragma once

#include <filesystem>
#include <optional>
#include <string_view>

#include "sparserep/dataset.hpp"

namespace sparserep {

enum class DatasetFormat { FeatureCsv, SimilarityCsv };

DatasetFormat parse_dataset_format(std::string_view name);
std::string_view to_string(DatasetFormat format);

struct LoadedDataset {
  LabeledDataset data;                // observations as columns
  std::optional<DenseMatrix> square;  // the raw N x N matrix for SimilarityCsv
};

// FeatureCsv: one observation per line, "label,f1,...,fm"; lines starting
// with '#' and blank lines are skipped.
// SimilarityCsv: N lines of N comma-separated reals; labels are read from the
// sibling file "<stem>.labels" (or "<path>.labels"), one integer per line.
// Columns are scaled to unit norm when `normalize` is set.
LoadedDataset load_dataset(const std::filesystem::path& path, DatasetFormat format, bool normalize = true);

std::filesystem::path labels_path_for(const std::filesystem::path& similarity_path);

// Writes the FeatureCsv format, with a '#' header line.
void write_feature_csv(const LabeledDataset& data, const std::filesystem::path& path);

}  // namespace sparserep
