#include "sparserep/linalg.hpp"

#include <algorithm>
#include <cmath>

#include "sparserep/error.hpp"

namespace sparserep {

DenseMatrix normalize_columns(const DenseMatrix& m) {
  DenseMatrix out = m;
  for (Index j = 0; j < out.cols(); ++j) {
    const double norm = out.col(j).norm();
    if (!(norm > kZeroColumnNorm)) {
      throw Error(ErrorKind::ZeroColumn, "column " + std::to_string(j) + " has zero norm", j);
    }
    out.col(j) /= norm;
  }
  return out;
}

bool has_unit_columns(const DenseMatrix& m, double tol) {
  for (Index j = 0; j < m.cols(); ++j) {
    if (std::abs(m.col(j).norm() - 1.0) > tol) return false;
  }
  return true;
}

Vector least_squares_minnorm(const DenseMatrix& a, const Vector& b) {
  if (a.rows() != b.size()) {
    throw Error(ErrorKind::DimensionMismatch,
                "matrix has " + std::to_string(a.rows()) + " rows but rhs has " +
                    std::to_string(b.size()) + " entries");
  }
  if (a.cols() == 0) return Vector();
  // Column-pivoted QR followed by an orthogonal step on R yields the minimum
  // norm solution for rank-deficient systems.
  Eigen::CompleteOrthogonalDecomposition<DenseMatrix> cod;
  cod.setThreshold(kDefaultRankTolerance);
  cod.compute(a);
  return cod.solve(b);
}

double principal_angle(const Vector& x, const DenseMatrix& m) {
  if (x.size() != m.rows()) {
    throw Error(ErrorKind::DimensionMismatch, "vector and matrix row counts differ");
  }
  bool any_nonzero = false;
  for (Index j = 0; j < m.cols() && !any_nonzero; ++j) {
    any_nonzero = m.col(j).norm() > kZeroColumnNorm;
  }
  if (!any_nonzero) throw Error(ErrorKind::ZeroColumn, "matrix has no nonzero column", 0);

  double cosine = 0.0;
  if (m.cols() == 1) {
    cosine = std::abs(x.dot(m.col(0))) / m.col(0).norm();
  } else {
    Eigen::ColPivHouseholderQR<DenseMatrix> qr(m);
    qr.setThreshold(kDefaultRankTolerance);
    qr.compute(m);
    const Index rank = qr.rank();
    const Vector coords = qr.householderQ().transpose() * x;
    cosine = coords.head(rank).norm();
  }
  return std::acos(std::clamp(cosine, 0.0, 1.0));
}

Index numerical_rank(const DenseMatrix& m, double tol) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<DenseMatrix> svd(m);
  const Vector& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  const double threshold = tol < 0 ? kDefaultRankTolerance * sv(0) : tol;
  return static_cast<Index>((sv.array() > threshold).count());
}

OrthoState::OrthoState(Index rows, Index reserve) : rows_(rows) {
  grow(std::max<Index>(reserve, 4));
}

void OrthoState::grow(Index needed) {
  if (needed <= q_.cols()) return;
  const Index capacity = std::max(needed, 2 * q_.cols());
  DenseMatrix q(rows_, capacity);
  DenseMatrix r = DenseMatrix::Zero(capacity, capacity);
  if (rank_ > 0) {
    q.leftCols(rank_) = q_.leftCols(rank_);
    r.topLeftCorner(rank_, rank_) = r_.topLeftCorner(rank_, rank_);
  }
  q_ = std::move(q);
  r_ = std::move(r);
}

bool OrthoState::append(const Eigen::Ref<const Vector>& column, Index index, double tol) {
  const double norm = column.norm();
  if (!(norm > kZeroColumnNorm)) return false;

  Vector w = column;
  Vector coeff = Vector::Zero(rank_);
  for (int pass = 0; pass < 2 && rank_ > 0; ++pass) {
    const Vector h = q_.leftCols(rank_).transpose() * w;
    w.noalias() -= q_.leftCols(rank_) * h;
    coeff += h;
  }
  const double rest = w.norm();
  if (!(rest > tol * norm)) return false;

  grow(rank_ + 1);
  q_.col(rank_) = w / rest;
  r_.col(rank_).head(rank_) = coeff;
  r_(rank_, rank_) = rest;
  ++rank_;
  selected_.push_back(index);
  return true;
}

OrthoState::BasisView OrthoState::basis() const { return q_.leftCols(rank_); }

OrthoState::FactorView OrthoState::r_factor() const { return r_.topLeftCorner(rank_, rank_); }

Vector OrthoState::solve(const Vector& b) const {
  if (rank_ == 0) return Vector();
  const Vector qtb = basis().transpose() * b;
  return r_factor().triangularView<Eigen::Upper>().solve(qtb);
}

Vector OrthoState::residual(const Vector& b) const {
  if (rank_ == 0) return b;
  const Vector qtb = basis().transpose() * b;
  Vector r = b;
  r.noalias() -= basis() * qtb;
  return r;
}

DenseMatrix gather_columns(const DenseMatrix& m, std::span<const Index> columns) {
  DenseMatrix out(m.rows(), static_cast<Index>(columns.size()));
  for (std::size_t k = 0; k < columns.size(); ++k) out.col(static_cast<Index>(k)) = m.col(columns[k]);
  return out;
}

}  // namespace sparserep
