#include "sparserep/dataset.hpp"

#include <algorithm>

#include "sparserep/error.hpp"

namespace sparserep {

std::vector<Index> LabeledDataset::class_counts() const {
  std::vector<Index> counts(static_cast<std::size_t>(std::max(num_classes, 0)), 0);
  for (const int y : labels) {
    if (y >= 1 && y <= num_classes) ++counts[static_cast<std::size_t>(y - 1)];
  }
  return counts;
}

void LabeledDataset::validate() const {
  if (static_cast<Index>(labels.size()) != features.cols()) {
    throw Error(ErrorKind::LabelCountMismatch, std::to_string(labels.size()) + " labels for " +
                                                   std::to_string(features.cols()) + " observations");
  }
  if (features.rows() < 1 || features.cols() < 1) throw Error(ErrorKind::EmptyInput, "dataset is empty");
  if (!features.allFinite()) throw Error(ErrorKind::ParseError, "non-finite feature value");
  for (const int y : labels) {
    if (y < 1 || y > num_classes) throw Error(ErrorKind::ParseError, "label outside 1..K", y);
  }
  const auto counts = class_counts();
  for (std::size_t k = 0; k < counts.size(); ++k) {
    if (counts[k] == 0) {
      throw Error(ErrorKind::InsufficientData, "class " + std::to_string(k + 1) + " has no observations",
                  static_cast<std::int64_t>(k + 1));
    }
  }
  if (normalized && !has_unit_columns(features)) {
    throw Error(ErrorKind::InvalidArgument, "dataset flagged normalized but columns are not unit norm");
  }
}

LabeledDataset LabeledDataset::subset(const std::vector<Index>& columns) const {
  LabeledDataset out;
  out.features = gather_columns(features, columns);
  out.labels.reserve(columns.size());
  for (const Index i : columns) out.labels.push_back(labels[static_cast<std::size_t>(i)]);
  out.num_classes = num_classes;
  out.normalized = normalized;
  out.name = name;
  out.provenance = provenance;
  return out;
}

}  // namespace sparserep
