#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sparserep/linalg.hpp"

namespace sparserep {

struct StopCriteria {
  Index max_sparsity = 100;
  double residual_tol = 1e-8;       // stop once ||r|| < residual_tol
  double orthogonality_tol = 1e-8;  // stop once max_i |x_i' r| <= orthogonality_tol

  void validate() const;
};

enum class StopReason { IterationCap, ResidualSmall, NearOrthogonal, RankBoundary };

std::string_view to_string(StopReason reason);

struct SolverStep {
  std::vector<Index> selected;  // column indices of X, in order of entry
  Vector coefficients;          // least-squares fit over `selected`, same order
  double residual_norm = 0.0;   // ||x - X_sel * coefficients||

  // Homotopy only: penalty at which this active set was last held, and the
  // lasso coefficients over `selected` at that penalty.
  std::optional<double> lambda;
  Vector lasso_coefficients;

  // Coefficients scattered into a length-n vector, zero off `selected`.
  Vector enlarged(Index n) const;
};

// Lasso solution at one breakpoint of the homotopy path.
struct Breakpoint {
  double lambda = 0.0;
  Vector beta;  // length n
  std::vector<Index> active;
};

struct SolverPath {
  std::vector<SolverStep> steps;  // steps[s - 1] holds the sparsity-s solution
  StopReason stop_reason = StopReason::IterationCap;
  std::vector<Breakpoint> breakpoints;  // homotopy only, lambda decreasing

  Index max_sparsity() const { return static_cast<Index>(steps.size()); }
  // Solution at sparsity s; beyond the last step the last one is held.
  const SolverStep& at_sparsity(Index s) const;
};

enum class SolverKind { Omp, Homotopy, Marginal, Full };

std::string_view to_string(SolverKind kind);
SolverKind parse_solver_kind(std::string_view name);

// Orthogonal matching pursuit. X must have unit columns, x unit norm.
SolverPath omp_path(const DenseMatrix& X, const Vector& x, const StopCriteria& stop = {});

// l1 homotopy (lasso path with insertion and deletion breakpoints) for
// min ||x - X b||^2 / 2 + lambda ||b||_1, from lambda = max|X'x| down to 0.
SolverPath homotopy_path(const DenseMatrix& X, const Vector& x, const StopCriteria& stop = {});

// Lasso solution at an arbitrary penalty, interpolated between breakpoints.
// Penalties above the first breakpoint give zero; below the last one throw.
Vector homotopy_solution_at(const SolverPath& path, double lambda, Index n);

// Marginal regression: top-s columns by |x_i' x|, refit on each prefix.
SolverPath marginal_path(const DenseMatrix& X, const Vector& x, const StopCriteria& stop = {});

// Dispatch for the three subset-regression methods.
SolverPath solve_path(SolverKind kind, const DenseMatrix& X, const Vector& x, const StopCriteria& stop = {});

struct FullRegressionResult {
  Vector coefficients;  // length n, minimum norm
  double residual_norm = 0.0;
  Index rank = 0;
  bool full_rank = false;  // rank == min(m, n)
};

FullRegressionResult full_regression(const DenseMatrix& X, const Vector& x);

// Factorizes X once for many right-hand sides.
class FullRegression {
 public:
  explicit FullRegression(const DenseMatrix& X);
  FullRegressionResult solve(const Vector& x) const;
  Index rank() const { return rank_; }

 private:
  DenseMatrix x_;
  Eigen::CompleteOrthogonalDecomposition<DenseMatrix> cod_;
  Index rank_;
};

// Indices of the k largest |values|, ordered by decreasing magnitude with
// ties broken by lowest index. Runs in O(n + k log k).
std::vector<Index> top_k_by_magnitude(const Vector& values, Index k);

}  // namespace sparserep
