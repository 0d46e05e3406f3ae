#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

namespace sparserep {

// Column-major m x n matrix, one observation per column.
using DenseMatrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

inline constexpr double kZeroColumnNorm = 1e-12;
inline constexpr double kDefaultRankTolerance = 1e-10;

// Throws ZeroColumn(index) if a column has norm <= 1e-12.
DenseMatrix normalize_columns(const DenseMatrix& m);

// True when every column has unit norm within tol.
bool has_unit_columns(const DenseMatrix& m, double tol = 1e-10);

// Minimum-norm least squares solution of min ||b - A beta||.
Vector least_squares_minnorm(const DenseMatrix& a, const Vector& b);

// Angle between x and span(m), in [0, pi/2]. x must be a unit vector.
double principal_angle(const Vector& x, const DenseMatrix& m);

// Number of singular values above tol. A negative tol selects the default
// relative tolerance 1e-10 * sigma_max.
Index numerical_rank(const DenseMatrix& m, double tol = -1.0);

/// Incrementally grown thin QR factorization of a column subset of X.
///
/// Columns are appended one at a time with classical Gram-Schmidt plus one
/// reorthogonalization pass, which keeps Q^T Q = I to working precision at a
/// cost of O(m t) per append. A column whose component orthogonal to the
/// current basis falls below `tol` (relative to its own norm) is rejected and
/// the state is left unchanged.
class OrthoState {
 public:
  explicit OrthoState(Index rows, Index reserve = 0);

  // Returns false (and changes nothing) if `column` is numerically dependent.
  bool append(const Eigen::Ref<const Vector>& column, Index index,
              double tol = kDefaultRankTolerance);

  Index rank() const { return rank_; }
  Index rows() const { return rows_; }
  const std::vector<Index>& selected() const { return selected_; }

  using BasisView = Eigen::Block<const DenseMatrix, Eigen::Dynamic, Eigen::Dynamic, true>;
  using FactorView = Eigen::Block<const DenseMatrix>;

  // Orthonormal basis, rows x rank.
  BasisView basis() const;
  // Upper triangular factor, rank x rank (entries below the diagonal are 0).
  FactorView r_factor() const;

  // Coefficients over the selected columns minimizing ||b - X_sel c||.
  Vector solve(const Vector& b) const;
  // (I - P) b, with P the orthogonal projector onto the selected span.
  Vector residual(const Vector& b) const;

 private:
  void grow(Index needed);

  Index rows_;
  Index rank_ = 0;
  DenseMatrix q_;
  DenseMatrix r_;
  std::vector<Index> selected_;
};

// Copies the listed columns of m, in order.
DenseMatrix gather_columns(const DenseMatrix& m, std::span<const Index> columns);

}  // namespace sparserep
