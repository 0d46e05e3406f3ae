#pragma once

#include <string>
#include <vector>

#include "sparserep/classifier.hpp"
#include "sparserep/linalg.hpp"

namespace sparserep {

struct LabeledDataset {
  DenseMatrix features;  // m x n, one observation per column
  Labels labels;         // n entries in 1..num_classes
  int num_classes = 0;
  bool normalized = false;
  std::string name;
  std::string provenance;  // generator parameters or source path

  Index dimension() const { return features.rows(); }
  Index size() const { return features.cols(); }

  // Observation counts per class, class k at position k - 1.
  std::vector<Index> class_counts() const;

  // Throws unless labels match columns, lie in 1..K, every class is present,
  // entries are finite and (when flagged) columns have unit norm.
  void validate() const;

  LabeledDataset subset(const std::vector<Index>& columns) const;
};

}  // namespace sparserep
