#pragma once

#include <string_view>

#include "sparserep/classifier.hpp"
#include "sparserep/linalg.hpp"

namespace sparserep {

enum class ProjectionKind { Pca, SpectralEmbedding };

std::string_view to_string(ProjectionKind kind);

/// Linear dimension reduction fitted once and applied to many observations.
///
/// PCA: `basis` holds the top-d principal directions (m x d, orthonormal) of
/// the centered training columns, each with its largest-magnitude entry made
/// positive; `project` maps a column v to basis' (v - center).
///
/// Spectral embedding: the square relational matrix S is factored by SVD and
/// observation i gets the i-th row of U_d diag(sqrt(sigma_d)). `coordinates`
/// then holds those rows as columns (d x N); there is no out-of-sample map.
struct Projection {
  ProjectionKind kind = ProjectionKind::Pca;
  Index dimension = 0;
  DenseMatrix basis;
  Vector center;
  DenseMatrix coordinates;
  Vector spectrum;  // singular values, leading first

  DenseMatrix project(const DenseMatrix& columns) const;
  // Same projection restricted to the first d components.
  Projection truncated(Index d) const;
};

// PCA over the columns of `train` (m x n).
Projection fit_pca(const DenseMatrix& train, Index d);
// Spectral embedding of a square matrix (N x N).
Projection fit_spectral(const DenseMatrix& square, Index d);
Projection fit_projection(const DenseMatrix& input, ProjectionKind kind, Index d);

inline constexpr Index kDefaultNeighbors = 9;
inline constexpr double kDefaultLdaRidge = 1e-6;

// Majority vote among the k nearest training columns (Euclidean). Distance
// ties go to the lower training index, vote ties to the lower class.
int knn_classify(const DenseMatrix& train, const Labels& labels, const Vector& x, Index k = kDefaultNeighbors);

/// Linear discriminant analysis with pooled covariance
/// Sigma + ridge * trace(Sigma) / d * I and class priors from the training counts.
class LdaModel {
 public:
  LdaModel(const DenseMatrix& train, const Labels& labels, double ridge = kDefaultLdaRidge);

  int classify(const Vector& x) const;
  Vector discriminants(const Vector& x) const;

 private:
  std::vector<int> classes_;
  DenseMatrix weights_;  // d x classes, Sigma^-1 mu_k
  Vector offsets_;       // -mu_k' Sigma^-1 mu_k / 2 + log prior_k
};

int lda_classify(const DenseMatrix& train, const Labels& labels, const Vector& x, double ridge = kDefaultLdaRidge);

}  // namespace sparserep
