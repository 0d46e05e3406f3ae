#pragma once

// Reference implementations used only by the tests. They favour plainness
// over speed and share no code with the library's solvers.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

namespace oracle {

using Matrix = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using Idx = Eigen::Index;

inline Matrix columns(const Matrix& X, const std::vector<Idx>& idx) {
  Matrix out(X.rows(), static_cast<Idx>(idx.size()));
  for (std::size_t j = 0; j < idx.size(); ++j) out.col(static_cast<Idx>(j)) = X.col(idx[j]);
  return out;
}

// Moore-Penrose pseudo-inverse from a full SVD.
inline Matrix pinv(const Matrix& A) {
  Eigen::JacobiSVD<Matrix> svd(A, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Vec& s = svd.singularValues();
  const double tol = 1e-12 * std::max(A.rows(), A.cols()) * (s.size() ? s(0) : 0.0);
  Matrix sinv = Matrix::Zero(A.cols(), A.rows());
  for (Idx i = 0; i < s.size(); ++i) {
    if (s(i) > tol) sinv(i, i) = 1.0 / s(i);
  }
  return svd.matrixV() * sinv * svd.matrixU().transpose();
}

// Least squares by the normal equations.
inline Vec normal_equations(const Matrix& A, const Vec& b) {
  return (A.transpose() * A).ldlt().solve(A.transpose() * b);
}

struct GreedyStep {
  std::vector<Idx> selected;
  Vec coefficients;
  double residual = 0.0;
};

// Greedy pursuit with a fresh pseudo-inverse refit at every step. Picks the
// unused column with the largest |x_i' r|, lowest index on ties.
inline std::vector<GreedyStep> naive_omp(const Matrix& X, const Vec& x, Idx max_steps, double tol = 1e-8) {
  std::vector<GreedyStep> out;
  std::vector<Idx> selected;
  std::vector<bool> used(static_cast<std::size_t>(X.cols()), false);
  Vec r = x;
  for (Idx t = 0; t < max_steps && t < std::min(X.rows(), X.cols()); ++t) {
    if (r.norm() < tol) break;
    Idx best = -1;
    double best_val = -1.0;
    for (Idx i = 0; i < X.cols(); ++i) {
      if (used[static_cast<std::size_t>(i)]) continue;
      const double c = std::abs(X.col(i).dot(r));
      if (c > best_val) {
        best_val = c;
        best = i;
      }
    }
    if (best < 0 || best_val <= tol) break;
    used[static_cast<std::size_t>(best)] = true;
    selected.push_back(best);
    const Matrix Xs = columns(X, selected);
    const Vec coef = pinv(Xs) * x;
    r = x - Xs * coef;
    out.push_back({selected, coef, r.norm()});
  }
  return out;
}

// Columns sorted by |x_i' x| decreasing (stable, so lower index first on ties).
inline std::vector<Idx> marginal_order(const Matrix& X, const Vec& x) {
  const Vec c = (X.transpose() * x).cwiseAbs();
  std::vector<Idx> order(static_cast<std::size_t>(X.cols()));
  std::iota(order.begin(), order.end(), Idx{0});
  std::stable_sort(order.begin(), order.end(), [&](Idx a, Idx b) { return c(a) > c(b); });
  return order;
}

// Cyclic coordinate descent for min ||x - X b||^2 / 2 + lambda ||b||_1,
// iterated until no coordinate moves by more than tol.
inline Vec cd_lasso(const Matrix& X, const Vec& x, double lambda, double tol = 1e-12, int max_sweeps = 2000000) {
  const Idx n = X.cols();
  Vec b = Vec::Zero(n);
  Vec r = x;
  const Vec sq = X.colwise().squaredNorm().transpose();
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double moved = 0.0;
    for (Idx j = 0; j < n; ++j) {
      const double rho = X.col(j).dot(r) + sq(j) * b(j);
      double next = 0.0;
      if (rho > lambda) next = (rho - lambda) / sq(j);
      else if (rho < -lambda) next = (rho + lambda) / sq(j);
      const double delta = next - b(j);
      if (delta != 0.0) {
        r -= delta * X.col(j);
        b(j) = next;
        moved = std::max(moved, std::abs(delta));
      }
    }
    if (moved < tol) break;
  }
  return b;
}

// Class-masked residual argmin, written out directly.
inline int src_label(const Matrix& X, const Vec& beta, const std::vector<int>& labels, const Vec& x, int K) {
  int best = 1;
  double best_r = INFINITY;
  for (int k = 1; k <= K; ++k) {
    Vec fit = Vec::Zero(X.rows());
    for (Idx i = 0; i < X.cols(); ++i) {
      if (labels[static_cast<std::size_t>(i)] == k) fit += beta(i) * X.col(i);
    }
    const double r = (x - fit).norm();
    if (r < best_r) {
      best_r = r;
      best = k;
    }
  }
  return best;
}

inline Matrix random_unit_columns(Idx m, Idx n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Matrix X(m, n);
  for (Idx j = 0; j < n; ++j) {
    for (Idx i = 0; i < m; ++i) X(i, j) = normal(rng);
    X.col(j).normalize();
  }
  return X;
}

inline Vec random_unit_vector(Idx m, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Vec v(m);
  for (Idx i = 0; i < m; ++i) v(i) = normal(rng);
  return v.normalized();
}

}  // namespace oracle
