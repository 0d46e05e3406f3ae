#include "sparserep/classifier.hpp"

#include <algorithm>

#include "sparserep/error.hpp"

namespace sparserep {

SparseCoefficients SparseCoefficients::from_dense(const Vector& beta) {
  SparseCoefficients out;
  for (Index i = 0; i < beta.size(); ++i) {
    if (beta(i) != 0.0) out.indices.push_back(i);
  }
  out.values.resize(static_cast<Index>(out.indices.size()));
  for (std::size_t j = 0; j < out.indices.size(); ++j) out.values(static_cast<Index>(j)) = beta(out.indices[j]);
  return out;
}

int max_label(const Labels& labels) {
  return labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end());
}

namespace {

void check_shapes(const DenseMatrix& X, const SparseCoefficients& beta, const Labels& labels, const Vector& x,
                  int num_classes) {
  if (num_classes <= 0) throw Error(ErrorKind::EmptyClassSet, "no classes");
  if (static_cast<Index>(labels.size()) != X.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "label count differs from training columns");
  }
  if (x.size() != X.rows()) throw Error(ErrorKind::DimensionMismatch, "observation length differs from training rows");
  if (static_cast<Index>(beta.indices.size()) != beta.values.size()) {
    throw Error(ErrorKind::DimensionMismatch, "support and coefficient counts differ");
  }
  for (const Index i : beta.indices) {
    if (i < 0 || i >= X.cols()) throw Error(ErrorKind::DimensionMismatch, "coefficient index out of range", i);
  }
  for (const int y : labels) {
    if (y < 1 || y > num_classes) throw Error(ErrorKind::InvalidArgument, "label outside 1..K", y);
  }
}

}  // namespace

Vector class_residuals(const DenseMatrix& X, const SparseCoefficients& beta, const Labels& labels,
                       const Vector& x, int num_classes) {
  check_shapes(X, beta, labels, x, num_classes);
  Vector out(num_classes);
  const double unfit = x.norm();
  std::vector<char> present(static_cast<std::size_t>(num_classes) + 1, 0);
  for (const Index i : beta.indices) present[static_cast<std::size_t>(labels[static_cast<std::size_t>(i)])] = 1;
  for (int k = 1; k <= num_classes; ++k) {
    if (!present[static_cast<std::size_t>(k)]) {
      out(k - 1) = unfit;
      continue;
    }
    out(k - 1) = (x - masked_fit(X, beta, labels, [k](int y) { return y == k; })).norm();
  }
  return out;
}

Vector class_residuals(const DenseMatrix& X, const Vector& beta, const Labels& labels, const Vector& x,
                       int num_classes) {
  if (beta.size() != X.cols()) throw Error(ErrorKind::DimensionMismatch, "beta length differs from training columns");
  return class_residuals(X, SparseCoefficients::from_dense(beta), labels, x, num_classes);
}

Vector class_residuals(const DenseMatrix& X, const Vector& beta, const Labels& labels, const Vector& x) {
  return class_residuals(X, beta, labels, x, max_label(labels));
}

int argmin_label(const Vector& residuals) {
  if (residuals.size() == 0) throw Error(ErrorKind::EmptyClassSet, "no classes");
  Index best = 0;
  for (Index k = 1; k < residuals.size(); ++k) {
    if (residuals(k) < residuals(best)) best = k;
  }
  return static_cast<int>(best) + 1;
}

SrcDecision src_classify(const DenseMatrix& X, const SparseCoefficients& beta, const Labels& labels,
                         const Vector& x, int num_classes) {
  SrcDecision out;
  out.class_residuals = class_residuals(X, beta, labels, x, num_classes);
  out.label = argmin_label(out.class_residuals);
  out.sparsity_used = static_cast<Index>(beta.indices.size());
  return out;
}

SrcDecision src_classify(const DenseMatrix& X, const Vector& beta, const Labels& labels, const Vector& x,
                         int num_classes) {
  if (beta.size() != X.cols()) throw Error(ErrorKind::DimensionMismatch, "beta length differs from training columns");
  return src_classify(X, SparseCoefficients::from_dense(beta), labels, x, num_classes);
}

SrcDecision src_classify(const DenseMatrix& X, const Vector& beta, const Labels& labels, const Vector& x) {
  return src_classify(X, beta, labels, x, max_label(labels));
}

}  // namespace sparserep
