#include "sparserep/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "sparserep/error.hpp"

namespace sparserep {

std::string_view to_string(ProjectionKind kind) {
  return kind == ProjectionKind::Pca ? "pca" : "spectral";
}

DenseMatrix Projection::project(const DenseMatrix& columns) const {
  if (kind != ProjectionKind::Pca) {
    throw Error(ErrorKind::InvalidArgument, "spectral embedding has no out-of-sample projection");
  }
  if (columns.rows() != basis.rows()) throw Error(ErrorKind::DimensionMismatch, "projection input has wrong length");
  return basis.transpose() * (columns.colwise() - center);
}

Projection Projection::truncated(Index d) const {
  if (d < 1 || d > dimension) throw Error(ErrorKind::DimensionTooLarge, "truncation beyond fitted dimension", d);
  Projection out = *this;
  out.dimension = d;
  if (kind == ProjectionKind::Pca) {
    out.basis = basis.leftCols(d);
  } else {
    out.coordinates = coordinates.topRows(d);
  }
  out.spectrum = spectrum.head(std::min(d, spectrum.size()));
  return out;
}

namespace {

void fix_sign(Eigen::Ref<Vector> v) {
  Index arg = 0;
  v.cwiseAbs().maxCoeff(&arg);
  if (v(arg) < 0) v = -v;
}

}  // namespace

Projection fit_pca(const DenseMatrix& train, Index d) {
  if (d < 1) throw Error(ErrorKind::InvalidArgument, "projection dimension must be >= 1");
  if (d > std::min(train.rows(), train.cols())) {
    throw Error(ErrorKind::DimensionTooLarge, "dimension exceeds min(m, n)", d);
  }
  Projection out;
  out.kind = ProjectionKind::Pca;
  out.dimension = d;
  out.center = train.rowwise().mean();
  const DenseMatrix centered = train.colwise() - out.center;
  Eigen::BDCSVD<DenseMatrix> svd(centered, Eigen::ComputeThinU);
  out.basis = svd.matrixU().leftCols(d);
  for (Index j = 0; j < d; ++j) fix_sign(out.basis.col(j));
  out.spectrum = svd.singularValues().head(d);
  return out;
}

Projection fit_spectral(const DenseMatrix& square, Index d) {
  if (square.rows() != square.cols()) throw Error(ErrorKind::NotSquare, "spectral embedding needs a square matrix");
  if (d < 1) throw Error(ErrorKind::InvalidArgument, "projection dimension must be >= 1");
  if (d > square.rows()) throw Error(ErrorKind::DimensionTooLarge, "dimension exceeds matrix size", d);
  Projection out;
  out.kind = ProjectionKind::SpectralEmbedding;
  out.dimension = d;
  Eigen::BDCSVD<DenseMatrix> svd(square, Eigen::ComputeThinU);
  DenseMatrix u = svd.matrixU().leftCols(d);
  for (Index j = 0; j < d; ++j) fix_sign(u.col(j));
  out.spectrum = svd.singularValues().head(d);
  out.coordinates = (u * out.spectrum.cwiseSqrt().asDiagonal()).transpose();
  return out;
}

Projection fit_projection(const DenseMatrix& input, ProjectionKind kind, Index d) {
  return kind == ProjectionKind::Pca ? fit_pca(input, d) : fit_spectral(input, d);
}

int knn_classify(const DenseMatrix& train, const Labels& labels, const Vector& x, Index k) {
  const Index n = train.cols();
  if (n == 0) throw Error(ErrorKind::EmptyTrainingSet, "no training points");
  if (static_cast<Index>(labels.size()) != n) throw Error(ErrorKind::DimensionMismatch, "label count differs");
  if (x.size() != train.rows()) throw Error(ErrorKind::DimensionMismatch, "query has wrong length");
  if (k < 1 || k > n) throw Error(ErrorKind::InvalidArgument, "k must lie in 1..n", k);

  const Vector dist = (train.colwise() - x).colwise().squaredNorm().transpose();
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  const auto closer = [&dist](Index a, Index b) { return dist(a) < dist(b) || (dist(a) == dist(b) && a < b); };
  std::partial_sort(order.begin(), order.begin() + k, order.end(), closer);

  std::map<int, Index> votes;
  for (Index j = 0; j < k; ++j) ++votes[labels[static_cast<std::size_t>(order[static_cast<std::size_t>(j)])]];
  int best = 0;
  Index best_votes = -1;
  for (const auto& [label, count] : votes) {  // ascending label order
    if (count > best_votes) {
      best = label;
      best_votes = count;
    }
  }
  return best;
}

LdaModel::LdaModel(const DenseMatrix& train, const Labels& labels, double ridge) {
  const Index n = train.cols();
  const Index d = train.rows();
  if (n == 0) throw Error(ErrorKind::EmptyTrainingSet, "no training points");
  if (static_cast<Index>(labels.size()) != n) throw Error(ErrorKind::DimensionMismatch, "label count differs");
  if (ridge < 0) throw Error(ErrorKind::InvalidArgument, "ridge must be >= 0");

  std::map<int, std::vector<Index>> members;
  for (Index i = 0; i < n; ++i) members[labels[static_cast<std::size_t>(i)]].push_back(i);
  const Index groups = static_cast<Index>(members.size());

  DenseMatrix means(d, groups);
  DenseMatrix scatter = DenseMatrix::Zero(d, d);
  Vector log_prior(groups);
  Index g = 0;
  for (const auto& [label, idx] : members) {
    classes_.push_back(label);
    const DenseMatrix block = gather_columns(train, idx);
    means.col(g) = block.rowwise().mean();
    const DenseMatrix centered = block.colwise() - means.col(g);
    scatter.noalias() += centered * centered.transpose();
    log_prior(g) = std::log(static_cast<double>(idx.size()) / static_cast<double>(n));
    ++g;
  }
  const Index dof = std::max<Index>(n - groups, 1);
  DenseMatrix sigma = scatter / static_cast<double>(dof);
  const double trace = sigma.trace();
  if (ridge > 0) {
    // A zero trace (all points identical) falls back to an absolute ridge.
    const double shift = trace > 0 ? ridge * trace / static_cast<double>(d) : ridge;
    sigma.diagonal().array() += shift;
  }

  Eigen::LDLT<DenseMatrix> ldlt(sigma);
  const Vector pivots = ldlt.vectorD();
  const double scale = std::max(pivots.cwiseAbs().maxCoeff(), 0.0);
  if (ldlt.info() != Eigen::Success || !(pivots.minCoeff() > 1e-12 * scale) || scale == 0.0) {
    throw Error(ErrorKind::SingularCovariance, "pooled covariance is singular; use a positive ridge");
  }
  weights_ = ldlt.solve(means);
  offsets_.resize(groups);
  for (Index k = 0; k < groups; ++k) offsets_(k) = -0.5 * means.col(k).dot(weights_.col(k)) + log_prior(k);
}

Vector LdaModel::discriminants(const Vector& x) const {
  if (x.size() != weights_.rows()) throw Error(ErrorKind::DimensionMismatch, "query has wrong length");
  return weights_.transpose() * x + offsets_;
}

int LdaModel::classify(const Vector& x) const {
  const Vector scores = discriminants(x);
  Index best = 0;
  for (Index k = 1; k < scores.size(); ++k) {
    if (scores(k) > scores(best)) best = k;
  }
  return classes_[static_cast<std::size_t>(best)];
}

int lda_classify(const DenseMatrix& train, const Labels& labels, const Vector& x, double ridge) {
  return LdaModel(train, labels, ridge).classify(x);
}

}  // namespace sparserep
