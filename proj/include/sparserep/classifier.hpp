#pragma once

#include <span>
#include <vector>

#include "sparserep/linalg.hpp"

namespace sparserep {

// Class labels are 1..K throughout; vectors indexed by class hold class k at
// position k - 1.
using Labels = std::vector<int>;

// A regression vector stored by its support: beta(indices[j]) = values(j).
struct SparseCoefficients {
  std::vector<Index> indices;
  Vector values;

  static SparseCoefficients from_dense(const Vector& beta);
};

struct SrcDecision {
  int label = 0;
  Vector class_residuals;  // ||x - X beta_k|| for k = 1..K
  Index sparsity_used = 0;
};

// Sum of beta_i x_i over support entries whose label satisfies `keep`,
// accumulated in increasing column order.
template <typename Predicate>
Vector masked_fit(const DenseMatrix& X, const SparseCoefficients& beta, const Labels& labels, Predicate keep) {
  Vector out = Vector::Zero(X.rows());
  for (std::size_t j = 0; j < beta.indices.size(); ++j) {
    const Index i = beta.indices[j];
    if (keep(labels[static_cast<std::size_t>(i)])) out.noalias() += beta.values(static_cast<Index>(j)) * X.col(i);
  }
  return out;
}

Vector class_residuals(const DenseMatrix& X, const SparseCoefficients& beta, const Labels& labels,
                       const Vector& x, int num_classes);
Vector class_residuals(const DenseMatrix& X, const Vector& beta, const Labels& labels, const Vector& x,
                       int num_classes);
// K taken as the largest label present.
Vector class_residuals(const DenseMatrix& X, const Vector& beta, const Labels& labels, const Vector& x);

// argmin over the class residuals; lowest class wins ties.
int argmin_label(const Vector& residuals);

SrcDecision src_classify(const DenseMatrix& X, const SparseCoefficients& beta, const Labels& labels,
                         const Vector& x, int num_classes);
SrcDecision src_classify(const DenseMatrix& X, const Vector& beta, const Labels& labels, const Vector& x,
                         int num_classes);
SrcDecision src_classify(const DenseMatrix& X, const Vector& beta, const Labels& labels, const Vector& x);

int max_label(const Labels& labels);

}  // namespace sparserep
