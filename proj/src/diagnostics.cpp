#include "sparserep/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "sparserep/error.hpp"
#include "sparserep/random.hpp"

namespace sparserep {

namespace {

constexpr double kRightAngle = std::numbers::pi / 2;

double vector_angle(const Vector& x, const Vector& v) {
  const double scale = x.norm() * v.norm();
  if (scale == 0.0) return kRightAngle;
  return std::acos(std::clamp(std::abs(x.dot(v)) / scale, 0.0, 1.0));
}

}  // namespace

double DominanceReport::dominance_ratio() const {
  if (other_norm == 0.0) return std::numeric_limits<double>::infinity();
  return own_norm / other_norm;
}

DominanceReport dominance_report(const DenseMatrix& X, const SparseCoefficients& beta, const Labels& labels,
                                 int y, const Vector& x, int num_classes) {
  if (num_classes <= 0) throw Error(ErrorKind::EmptyClassSet, "no classes");
  if (y < 1 || y > num_classes) throw Error(ErrorKind::InvalidArgument, "true class outside 1..K", y);
  if (static_cast<Index>(labels.size()) != X.cols() || x.size() != X.rows() ||
      static_cast<Index>(beta.indices.size()) != beta.values.size()) {
    throw Error(ErrorKind::DimensionMismatch, "inconsistent shapes for dominance report");
  }

  DominanceReport report;
  const Vector own = masked_fit(X, beta, labels, [y](int label) { return label == y; });
  report.own_norm = own.norm();
  report.complement_norms.resize(num_classes);
  Vector other;
  for (int k = 1; k <= num_classes; ++k) {
    Vector complement = masked_fit(X, beta, labels, [k](int label) { return label != k; });
    report.complement_norms(k - 1) = complement.norm();
    if (k == y) other = std::move(complement);
  }

  report.other_norm = report.complement_norms(y - 1);
  report.dominates = report.other_norm < report.own_norm;
  report.positively_dominates = true;
  for (int k = 1; k <= num_classes; ++k) {
    if (k != y && !(report.own_norm <= report.complement_norms(k - 1))) report.positively_dominates = false;
  }
  report.angle_own = vector_angle(x, own);
  report.angle_other = vector_angle(x, other);
  return report;
}

DominanceReport dominance_report(const DenseMatrix& X, const Vector& beta, const Labels& labels, int y,
                                 const Vector& x, int num_classes) {
  if (beta.size() != X.cols()) throw Error(ErrorKind::DimensionMismatch, "beta length differs from training columns");
  return dominance_report(X, SparseCoefficients::from_dense(beta), labels, y, x, num_classes);
}

bool check_theorem1(const DominanceReport& report, const SrcDecision& decision, int y) {
  if (report.dominates && report.positively_dominates) return decision.label == y;
  return true;
}

ErrorCounts& ErrorCounts::operator+=(const ErrorCounts& other) {
  n_test += other.n_test;
  n_dominant += other.n_dominant;
  n_dominant_wrong += other.n_dominant_wrong;
  n_nondominant_wrong += other.n_nondominant_wrong;
  return *this;
}

bool ErrorDecomposition::identity_holds_exactly() const {
  // L n = P_D P1 n + (1 - P_D) P2 n reduces to
  // wrong = dominant_wrong + nondominant_wrong over the two disjoint groups.
  const auto& c = counts;
  const bool groups_ok = c.n_dominant >= 0 && c.n_dominant <= c.n_test && c.n_dominant_wrong <= c.n_dominant &&
                         c.n_nondominant_wrong <= c.n_test - c.n_dominant;
  if (!groups_ok || c.n_test <= 0) return false;
  const double n = static_cast<double>(c.n_test);
  const std::int64_t n_nondominant = c.n_test - c.n_dominant;
  const double p1 = c.n_dominant > 0 ? static_cast<double>(c.n_dominant_wrong) / static_cast<double>(c.n_dominant) : 0.0;
  const double p2 = n_nondominant > 0 ? static_cast<double>(c.n_nondominant_wrong) / static_cast<double>(n_nondominant) : 0.0;
  return L == static_cast<double>(c.n_wrong()) / n && P_D == static_cast<double>(c.n_dominant) / n && P1 == p1 &&
         P2 == p2;
}

double ErrorDecomposition::identity_residual() const { return std::abs(L - (P_D * P1 + (1.0 - P_D) * P2)); }

ErrorDecomposition decompose_counts(const ErrorCounts& counts) {
  if (counts.n_test <= 0) throw Error(ErrorKind::EmptyInput, "no records to decompose");
  ErrorDecomposition out;
  out.counts = counts;
  const double n = static_cast<double>(counts.n_test);
  const std::int64_t n_nondominant = counts.n_test - counts.n_dominant;
  out.L = static_cast<double>(counts.n_wrong()) / n;
  out.P_D = static_cast<double>(counts.n_dominant) / n;
  out.P1 = counts.n_dominant > 0
               ? static_cast<double>(counts.n_dominant_wrong) / static_cast<double>(counts.n_dominant)
               : 0.0;
  out.P2 = n_nondominant > 0 ? static_cast<double>(counts.n_nondominant_wrong) / static_cast<double>(n_nondominant)
                             : 0.0;
  return out;
}

ErrorDecomposition decompose_errors(std::span<const DominanceRecord> records) {
  ErrorCounts counts;
  for (const auto& r : records) {
    ++counts.n_test;
    if (r.dominates) {
      ++counts.n_dominant;
      if (!r.correct) ++counts.n_dominant_wrong;
    } else if (!r.correct) {
      ++counts.n_nondominant_wrong;
    }
  }
  return decompose_counts(counts);
}

namespace {

// Smallest angle between x and the span of an s-column subset of `pool`,
// exhaustive for s = 1, otherwise over `samples` random subsets.
double min_between_angle(const DenseMatrix& X, const Vector& x, std::vector<Index> pool, Index s, Index samples,
                         Rng& rng, Index& used) {
  if (pool.empty()) {
    used = 0;
    return kRightAngle;
  }
  double best = kRightAngle;
  if (s == 1) {
    for (const Index i : pool) best = std::min(best, vector_angle(x, X.col(i)));
    used = static_cast<Index>(pool.size());
    return best;
  }
  if (static_cast<Index>(pool.size()) <= s) {
    used = 1;
    return principal_angle(x, gather_columns(X, pool));
  }
  std::vector<Index> subset(static_cast<std::size_t>(s));
  for (Index draw = 0; draw < samples; ++draw) {
    for (Index k = 0; k < s; ++k) {
      std::uniform_int_distribution<std::size_t> pick(static_cast<std::size_t>(k), pool.size() - 1);
      std::swap(pool[static_cast<std::size_t>(k)], pool[pick(rng)]);
      subset[static_cast<std::size_t>(k)] = pool[static_cast<std::size_t>(k)];
    }
    best = std::min(best, principal_angle(x, gather_columns(X, subset)));
  }
  used = samples;
  return best;
}

}  // namespace

AngleScanResult angle_condition_scan(const LabeledDataset& train, const LabeledDataset& test,
                                     const AngleScanOptions& options) {
  if (train.size() == 0) throw Error(ErrorKind::InsufficientData, "training set is empty");
  if (test.size() == 0) throw Error(ErrorKind::InsufficientData, "test set is empty");
  if (train.dimension() != test.dimension()) throw Error(ErrorKind::DimensionMismatch, "train/test dimensions differ");
  if (options.sparsity < 1) throw Error(ErrorKind::InvalidArgument, "sparsity must be >= 1");
  if (options.samples < 1) throw Error(ErrorKind::InvalidArgument, "sample count must be >= 1");
  for (const double c : options.c_grid) {
    if (!(c >= 0.0 && c < kRightAngle)) throw Error(ErrorKind::InvalidArgument, "c outside [0, pi/2)");
  }

  const DenseMatrix& X = train.features;
  const std::size_t grid = options.c_grid.size();
  AngleScanResult result;
  result.points.resize(static_cast<std::size_t>(test.size()));
  Index satisfied = 0;

  for (Index t = 0; t < test.size(); ++t) {
    const Vector x = test.features.col(t);
    const int y = test.labels[static_cast<std::size_t>(t)];
    AngleScanPoint& point = result.points[static_cast<std::size_t>(t)];
    point.label = y;

    std::vector<Index> others;
    std::vector<std::pair<double, Index>> own;  // (angle, column)
    for (Index i = 0; i < X.cols(); ++i) {
      if (train.labels[static_cast<std::size_t>(i)] == y) {
        own.emplace_back(vector_angle(x, X.col(i)), i);
      } else {
        others.push_back(i);
      }
    }
    point.nearest_within = kRightAngle;
    point.farthest_within = own.empty() ? kRightAngle : 0.0;
    for (const auto& [angle, i] : own) {
      point.nearest_within = std::min(point.nearest_within, angle);
      point.farthest_within = std::max(point.farthest_within, angle);
    }

    point.min_between.assign(grid, kRightAngle);
    point.holds.assign(grid, 0);
    double shared_between = kRightAngle;
    if (options.mode != AngleScanMode::Extended) {
      Rng rng = make_rng(options.seed, static_cast<std::uint64_t>(t));
      shared_between = min_between_angle(X, x, others, options.sparsity, options.samples, rng, point.samples_used);
    }

    bool any = false;
    for (std::size_t g = 0; g < grid; ++g) {
      const double c = options.c_grid[g];
      double between = shared_between;
      if (options.mode == AngleScanMode::Extended) {
        std::vector<Index> pool = others;
        for (const auto& [angle, i] : own) {
          if (angle > c) pool.push_back(i);
        }
        std::sort(pool.begin(), pool.end());
        Rng rng = make_rng(options.seed, static_cast<std::uint64_t>(t) * grid + g);
        between = min_between_angle(X, x, pool, options.sparsity, options.samples, rng, point.samples_used);
      }
      point.min_between[g] = between;
      const double within = options.mode == AngleScanMode::Strict ? point.farthest_within : point.nearest_within;
      const bool ok = !own.empty() && within <= c && between > c;
      point.holds[g] = ok ? 1 : 0;
      any = any || ok;
    }
    if (any) ++satisfied;
  }
  result.q_hat = static_cast<double>(satisfied) / static_cast<double>(test.size());
  return result;
}

}  // namespace sparserep
