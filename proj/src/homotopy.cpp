// l1 homotopy: follows the piecewise-linear lasso path as the penalty falls
// from max|X'x| to zero. Between breakpoints the active coefficients move along
// d = (X_A' X_A)^{-1} z, z the active sign vector; a breakpoint is either an
// inactive correlation reaching the penalty (insertion) or an active
// coefficient crossing zero (deletion).

#include <algorithm>
#include <cmath>
#include <limits>

#include "sparserep/error.hpp"
#include "sparserep/solvers.hpp"

namespace sparserep {

namespace {

enum class Event { End, Insert, Delete };

constexpr double kDependenceTol = 1e-10;
constexpr double kDenominatorTol = 1e-12;

double sign_of(double v) { return v >= 0 ? 1.0 : -1.0; }

struct ActiveFactor {
  Eigen::HouseholderQR<DenseMatrix> qr;
  Index size = 0;

  ActiveFactor(const DenseMatrix& X, const std::vector<Index>& active)
      : qr(gather_columns(X, active)), size(static_cast<Index>(active.size())) {}

  // Solves (X_A' X_A) d = rhs through R' R.
  Vector gram_solve(const Vector& rhs) const {
    const auto r = qr.matrixQR().topLeftCorner(size, size);
    const Vector y = r.transpose().triangularView<Eigen::Lower>().solve(rhs);
    return r.triangularView<Eigen::Upper>().solve(y);
  }

  // Distance from a unit column to span(X_A).
  double distance_to_span(const Eigen::Ref<const Vector>& column) const {
    const Index m = column.size();
    if (size >= m) return 0.0;
    const Vector coords = qr.householderQ().transpose() * column;
    return coords.tail(m - size).norm();
  }

  double min_abs_diagonal() const { return qr.matrixQR().diagonal().head(size).cwiseAbs().minCoeff(); }
};

}  // namespace

SolverPath homotopy_path(const DenseMatrix& X, const Vector& x, const StopCriteria& stop) {
  if (X.rows() == 0 || X.cols() == 0) throw Error(ErrorKind::EmptyInput, "training matrix is empty");
  if (X.rows() != x.size()) throw Error(ErrorKind::DimensionMismatch, "observation length differs from training rows");
  stop.validate();

  const Index n = X.cols();
  Vector beta = Vector::Zero(n);
  Vector correlations = X.transpose() * x;
  const double lambda_max = correlations.cwiseAbs().maxCoeff();
  if (lambda_max <= stop.orthogonality_tol) {
    throw Error(ErrorKind::OrthogonalInput, "observation is orthogonal to every training column");
  }

  Index first = 0;
  for (Index i = 1; i < n; ++i) {
    if (std::abs(correlations(i)) > std::abs(correlations(first))) first = i;
  }

  std::vector<Index> active{first};
  std::vector<double> signs{sign_of(correlations(first))};
  std::vector<char> in_active(static_cast<std::size_t>(n), 0);
  in_active[static_cast<std::size_t>(first)] = 1;
  std::vector<char> blocked(static_cast<std::size_t>(n), 0);
  Index just_deleted = -1;
  double lambda = lambda_max;
  const double step_tol = 1e-13 * lambda_max;

  SolverPath path;
  path.breakpoints.push_back({lambda, beta, active});
  std::vector<std::optional<SolverStep>> by_size;

  const std::size_t max_events = static_cast<std::size_t>(20 * (stop.max_sparsity + n) + 100);
  for (std::size_t event_count = 0;; ++event_count) {
    if (event_count > max_events) {
      throw Error(ErrorKind::NumericalBreakdown, "homotopy path did not terminate");
    }
    const Index k = static_cast<Index>(active.size());
    const ActiveFactor factor(X, active);
    if (!(factor.min_abs_diagonal() > kDependenceTol)) {
      throw Error(ErrorKind::NumericalBreakdown, "active set became rank deficient");
    }
    const Vector z = Eigen::Map<const Vector>(signs.data(), k);
    const Vector direction = factor.gram_solve(z);
    if (!direction.allFinite()) throw Error(ErrorKind::NumericalBreakdown, "non-finite path direction");
    const Vector moved = gather_columns(X, active) * direction;
    const Vector drift = X.transpose() * moved;

    Event event = Event::End;
    double gamma = lambda;
    Index who = -1;

    // Insertion: smallest step at which an inactive |correlation| meets the
    // shrinking penalty. Candidates lying in span(X_A) can never enter.
    while (true) {
      double best = gamma;
      Index best_j = -1;
      for (Index j = 0; j < n; ++j) {
        const auto uj = static_cast<std::size_t>(j);
        if (in_active[uj] || blocked[uj]) continue;
        const double c = correlations(j);
        const double a = drift(j);
        // The index deleted at this breakpoint sits at |c| = lambda; it may
        // come back later in the segment but not at a zero-length step.
        const double floor = j == just_deleted ? step_tol : -step_tol;
        double g = std::numeric_limits<double>::infinity();
        const auto consider = [&](double numerator, double denominator) {
          if (denominator <= kDenominatorTol) return;
          const double candidate = numerator / denominator;
          if (candidate > floor || (j != just_deleted && candidate >= floor)) g = std::min(g, std::max(candidate, 0.0));
        };
        consider(lambda - c, 1.0 - a);
        consider(lambda + c, 1.0 + a);
        if (g < best) {
          best = g;
          best_j = j;
        }
      }
      if (best_j < 0) break;
      if (factor.distance_to_span(X.col(best_j)) <= kDependenceTol) {
        blocked[static_cast<std::size_t>(best_j)] = 1;
        continue;
      }
      event = Event::Insert;
      gamma = best;
      who = best_j;
      break;
    }

    // Deletion: an active coefficient reaching zero before the next insertion.
    for (Index p = 0; p < k; ++p) {
      const double d = direction(p);
      if (d == 0.0) continue;
      const double g = -beta(active[static_cast<std::size_t>(p)]) / d;
      if (g > step_tol && g < gamma) {
        event = Event::Delete;
        gamma = g;
        who = p;
      }
    }

    const double next_lambda = event == Event::End ? 0.0 : std::max(0.0, lambda - gamma);
    for (Index p = 0; p < k; ++p) beta(active[static_cast<std::size_t>(p)]) += gamma * direction(p);
    if (event == Event::Delete) beta(active[static_cast<std::size_t>(who)]) = 0.0;

    // The active set just held over (next_lambda, lambda] is recorded at its
    // end; a later occurrence of the same size overwrites it.
    SolverStep step;
    step.selected = active;
    step.coefficients = factor.qr.solve(x);
    step.residual_norm = (x - gather_columns(X, active) * step.coefficients).norm();
    step.lambda = next_lambda;
    step.lasso_coefficients.resize(k);
    for (Index p = 0; p < k; ++p) step.lasso_coefficients(p) = beta(active[static_cast<std::size_t>(p)]);
    if (by_size.size() < static_cast<std::size_t>(k)) by_size.resize(static_cast<std::size_t>(k));
    by_size[static_cast<std::size_t>(k - 1)] = step;
    path.breakpoints.push_back({next_lambda, beta, active});

    if (step.residual_norm < stop.residual_tol) {
      path.stop_reason = StopReason::ResidualSmall;
      break;
    }
    if (event == Event::End || next_lambda <= stop.orthogonality_tol) {
      path.stop_reason = StopReason::NearOrthogonal;
      break;
    }
    if (event == Event::Insert && k >= stop.max_sparsity) {
      path.stop_reason = StopReason::IterationCap;
      break;
    }

    lambda = next_lambda;
    correlations.noalias() = X.transpose() * (x - X * beta);
    std::fill(blocked.begin(), blocked.end(), 0);
    if (event == Event::Insert) {
      active.push_back(who);
      signs.push_back(sign_of(correlations(who)));
      in_active[static_cast<std::size_t>(who)] = 1;
      just_deleted = -1;
    } else {
      const Index removed = active[static_cast<std::size_t>(who)];
      active.erase(active.begin() + who);
      signs.erase(signs.begin() + who);
      in_active[static_cast<std::size_t>(removed)] = 0;
      just_deleted = removed;
    }
  }

  for (auto& step : by_size) {
    if (!step) throw Error(ErrorKind::NumericalBreakdown, "homotopy path skipped an active-set size");
    path.steps.push_back(std::move(*step));
  }
  return path;
}

Vector homotopy_solution_at(const SolverPath& path, double lambda, Index n) {
  const auto& bps = path.breakpoints;
  if (bps.empty()) throw Error(ErrorKind::InvalidArgument, "path has no breakpoints");
  if (lambda >= bps.front().lambda) return Vector::Zero(n);
  for (std::size_t k = 0; k + 1 < bps.size(); ++k) {
    const double hi = bps[k].lambda;
    const double lo = bps[k + 1].lambda;
    if (lambda <= hi && lambda >= lo) {
      if (hi == lo) return bps[k + 1].beta;
      const double t = (lambda - lo) / (hi - lo);
      return bps[k + 1].beta + t * (bps[k].beta - bps[k + 1].beta);
    }
  }
  throw Error(ErrorKind::InvalidArgument, "penalty below the traced part of the path");
}

}  // namespace sparserep
