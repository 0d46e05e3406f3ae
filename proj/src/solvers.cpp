#include "sparserep/solvers.hpp"

#include <algorithm>
#include <cmath>

#include "sparserep/error.hpp"

namespace sparserep {

void StopCriteria::validate() const {
  if (max_sparsity < 1) throw Error(ErrorKind::InvalidArgument, "max_sparsity must be >= 1");
  if (!(residual_tol >= 0) || !(orthogonality_tol >= 0)) {
    throw Error(ErrorKind::InvalidArgument, "stopping tolerances must be >= 0");
  }
}

std::string_view to_string(StopReason reason) {
  switch (reason) {
    case StopReason::IterationCap: return "IterationCap";
    case StopReason::ResidualSmall: return "ResidualSmall";
    case StopReason::NearOrthogonal: return "NearOrthogonal";
    case StopReason::RankBoundary: return "RankBoundary";
  }
  return "Unknown";
}

std::string_view to_string(SolverKind kind) {
  switch (kind) {
    case SolverKind::Omp: return "omp";
    case SolverKind::Homotopy: return "homotopy";
    case SolverKind::Marginal: return "marginal";
    case SolverKind::Full: return "full";
  }
  return "unknown";
}

SolverKind parse_solver_kind(std::string_view name) {
  if (name == "omp") return SolverKind::Omp;
  if (name == "homotopy" || name == "l1") return SolverKind::Homotopy;
  if (name == "marginal") return SolverKind::Marginal;
  if (name == "full") return SolverKind::Full;
  throw Error(ErrorKind::InvalidArgument, "unknown solver '" + std::string(name) + "'");
}

Vector SolverStep::enlarged(Index n) const {
  Vector beta = Vector::Zero(n);
  for (std::size_t k = 0; k < selected.size(); ++k) beta(selected[k]) = coefficients(static_cast<Index>(k));
  return beta;
}

const SolverStep& SolverPath::at_sparsity(Index s) const {
  if (steps.empty()) throw Error(ErrorKind::EmptyInput, "solver path has no steps");
  if (s < 1) throw Error(ErrorKind::InvalidArgument, "sparsity must be >= 1");
  const auto k = static_cast<std::size_t>(std::min<Index>(s, max_sparsity()) - 1);
  return steps[k];
}

namespace {

void check_inputs(const DenseMatrix& X, const Vector& x) {
  if (X.rows() == 0 || X.cols() == 0) throw Error(ErrorKind::EmptyInput, "training matrix is empty");
  if (X.rows() != x.size()) {
    throw Error(ErrorKind::DimensionMismatch,
                "training rows " + std::to_string(X.rows()) + " vs observation length " +
                    std::to_string(x.size()));
  }
}

// argmax_i |v_i| over entries not masked out; lowest index wins ties.
Index argmax_abs(const Vector& v, const std::vector<char>& excluded) {
  Index best = -1;
  double best_value = -1.0;
  for (Index i = 0; i < v.size(); ++i) {
    if (excluded[static_cast<std::size_t>(i)]) continue;
    const double a = std::abs(v(i));
    if (a > best_value) {
      best_value = a;
      best = i;
    }
  }
  return best;
}

void check_not_orthogonal(const Vector& correlations, const StopCriteria& stop) {
  if (correlations.cwiseAbs().maxCoeff() <= stop.orthogonality_tol) {
    throw Error(ErrorKind::OrthogonalInput, "observation is orthogonal to every training column");
  }
}

SolverStep make_step(const DenseMatrix& X, const Vector& x, const OrthoState& qr) {
  SolverStep step;
  step.selected = qr.selected();
  step.coefficients = qr.solve(x);
  Vector fitted = Vector::Zero(x.size());
  for (std::size_t k = 0; k < step.selected.size(); ++k) {
    fitted.noalias() += step.coefficients(static_cast<Index>(k)) * X.col(step.selected[k]);
  }
  step.residual_norm = (x - fitted).norm();
  return step;
}

}  // namespace

SolverPath omp_path(const DenseMatrix& X, const Vector& x, const StopCriteria& stop) {
  check_inputs(X, x);
  stop.validate();
  const Index n = X.cols();
  const Index cap = std::min(stop.max_sparsity, std::min(n, X.rows()));

  SolverPath path;
  OrthoState qr(X.rows(), cap);
  std::vector<char> used(static_cast<std::size_t>(n), 0);
  Vector residual = x;
  Vector correlations = X.transpose() * x;
  check_not_orthogonal(correlations, stop);

  for (Index t = 1;; ++t) {
    const Index pick = argmax_abs(correlations, used);
    if (pick < 0 || !qr.append(X.col(pick), pick)) {
      path.stop_reason = StopReason::RankBoundary;
      break;
    }
    used[static_cast<std::size_t>(pick)] = 1;
    path.steps.push_back(make_step(X, x, qr));

    residual = qr.residual(x);
    correlations.noalias() = X.transpose() * residual;
    if (residual.norm() < stop.residual_tol) {
      path.stop_reason = StopReason::ResidualSmall;
      break;
    }
    if (correlations.cwiseAbs().maxCoeff() <= stop.orthogonality_tol) {
      path.stop_reason = StopReason::NearOrthogonal;
      break;
    }
    if (t >= stop.max_sparsity) {
      path.stop_reason = StopReason::IterationCap;
      break;
    }
    if (t >= cap) {
      // Selected columns already span R^m (or X is exhausted).
      path.stop_reason = StopReason::RankBoundary;
      break;
    }
  }
  return path;
}

std::vector<Index> top_k_by_magnitude(const Vector& values, Index k) {
  const Index n = values.size();
  k = std::clamp<Index>(k, 0, n);
  std::vector<Index> order(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
  const auto before = [&values](Index a, Index b) {
    const double va = std::abs(values(a));
    const double vb = std::abs(values(b));
    return va > vb || (va == vb && a < b);
  };
  if (k < n) std::nth_element(order.begin(), order.begin() + k, order.end(), before);
  order.resize(static_cast<std::size_t>(k));
  std::sort(order.begin(), order.end(), before);
  return order;
}

SolverPath marginal_path(const DenseMatrix& X, const Vector& x, const StopCriteria& stop) {
  check_inputs(X, x);
  stop.validate();
  const Vector correlations = X.transpose() * x;
  check_not_orthogonal(correlations, stop);

  const std::vector<Index> order = top_k_by_magnitude(correlations, stop.max_sparsity);
  SolverPath path;
  path.stop_reason = StopReason::IterationCap;
  OrthoState qr(X.rows(), static_cast<Index>(order.size()));
  for (const Index pick : order) {
    if (!qr.append(X.col(pick), pick)) {
      path.stop_reason = StopReason::RankBoundary;
      break;
    }
    path.steps.push_back(make_step(X, x, qr));
    if (path.steps.back().residual_norm < stop.residual_tol) {
      path.stop_reason = StopReason::ResidualSmall;
      break;
    }
  }
  if (path.stop_reason == StopReason::IterationCap &&
      static_cast<Index>(path.steps.size()) < stop.max_sparsity) {
    // Fewer than max_sparsity columns exist.
    path.stop_reason = StopReason::RankBoundary;
  }
  return path;
}

SolverPath solve_path(SolverKind kind, const DenseMatrix& X, const Vector& x, const StopCriteria& stop) {
  switch (kind) {
    case SolverKind::Omp: return omp_path(X, x, stop);
    case SolverKind::Homotopy: return homotopy_path(X, x, stop);
    case SolverKind::Marginal: return marginal_path(X, x, stop);
    case SolverKind::Full: break;
  }
  throw Error(ErrorKind::InvalidArgument, "full regression has no solution path");
}

FullRegression::FullRegression(const DenseMatrix& X) : x_(X) {
  if (X.rows() == 0 || X.cols() == 0) throw Error(ErrorKind::EmptyInput, "training matrix is empty");
  cod_.setThreshold(kDefaultRankTolerance);
  cod_.compute(X);
  rank_ = cod_.rank();
}

FullRegressionResult FullRegression::solve(const Vector& x) const {
  if (x.size() != x_.rows()) throw Error(ErrorKind::DimensionMismatch, "observation length differs from training rows");
  FullRegressionResult out;
  out.coefficients = cod_.solve(x);
  out.residual_norm = (x - x_ * out.coefficients).norm();
  out.rank = rank_;
  out.full_rank = rank_ == std::min(x_.rows(), x_.cols());
  return out;
}

FullRegressionResult full_regression(const DenseMatrix& X, const Vector& x) {
  check_inputs(X, x);
  return FullRegression(X).solve(x);
}

}  // namespace sparserep
