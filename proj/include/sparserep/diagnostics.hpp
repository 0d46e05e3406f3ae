#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sparserep/classifier.hpp"
#include "sparserep/dataset.hpp"

namespace sparserep {

// Class dominance of a regression vector with respect to the true class y.
struct DominanceReport {
  bool dominates = false;             // ||X beta_{-y}|| < ||X beta_y||
  bool positively_dominates = false;  // ||X beta_y|| <= ||X beta_{-k}|| for all k != y
  double own_norm = 0.0;              // ||X beta_y||
  double other_norm = 0.0;            // ||X beta_{-y}||
  Vector complement_norms;            // ||X beta_{-k}||, k = 1..K
  double angle_own = 0.0;             // angle(x, X beta_y), pi/2 when X beta_y = 0
  double angle_other = 0.0;           // angle(x, X beta_{-y}), pi/2 when X beta_{-y} = 0

  // ||X beta_y|| / ||X beta_{-y}||; +inf when the complement contribution is 0.
  double dominance_ratio() const;
};

DominanceReport dominance_report(const DenseMatrix& X, const SparseCoefficients& beta, const Labels& labels,
                                 int y, const Vector& x, int num_classes);
DominanceReport dominance_report(const DenseMatrix& X, const Vector& beta, const Labels& labels, int y,
                                 const Vector& x, int num_classes);

// (dominates && positively_dominates) => decision.label == y.
bool check_theorem1(const DominanceReport& report, const SrcDecision& decision, int y);

struct ErrorCounts {
  std::int64_t n_test = 0;
  std::int64_t n_dominant = 0;
  std::int64_t n_dominant_wrong = 0;
  std::int64_t n_nondominant_wrong = 0;

  std::int64_t n_wrong() const { return n_dominant_wrong + n_nondominant_wrong; }
  ErrorCounts& operator+=(const ErrorCounts& other);
};

// Error split by whether class dominance held: L = P_D P1 + (1 - P_D) P2.
// Conditional rates over an empty conditioning set are 0.
struct ErrorDecomposition {
  double L = 0.0;
  double P_D = 0.0;
  double P1 = 0.0;
  double P2 = 0.0;
  ErrorCounts counts;

  // Exact integer form of the decomposition identity.
  bool identity_holds_exactly() const;
  // |L - (P_D P1 + (1 - P_D) P2)| in floating point.
  double identity_residual() const;
};

struct DominanceRecord {
  bool dominates = false;
  bool correct = false;
};

ErrorDecomposition decompose_errors(std::span<const DominanceRecord> records);
ErrorDecomposition decompose_counts(const ErrorCounts& counts);

enum class AngleScanMode {
  Nearest,   // some class-y column within c; complement pool = other classes
  Strict,    // every class-y column within c; complement pool = other classes
  Extended,  // some class-y column within c; far class-y columns join the pool
};

struct AngleScanOptions {
  std::vector<double> c_grid;  // radians, each in [0, pi/2)
  Index sparsity = 1;
  Index samples = 200;  // sampled s-column submatrices per test point
  std::uint64_t seed = 0;
  AngleScanMode mode = AngleScanMode::Nearest;
};

struct AngleScanPoint {
  int label = 0;
  double nearest_within = 0.0;  // min angle to a class-y training column (pi/2 if none)
  double farthest_within = 0.0;
  std::vector<double> min_between;  // per c: smallest sampled angle to an s-subset of the pool
  std::vector<char> holds;          // per c
  Index samples_used = 0;
};

struct AngleScanResult {
  std::vector<AngleScanPoint> points;
  double q_hat = 0.0;  // fraction of test points for which some c holds
};

// Monte Carlo check of the principal angle condition on a train/test split.
AngleScanResult angle_condition_scan(const LabeledDataset& train, const LabeledDataset& test,
                                     const AngleScanOptions& options);

}  // namespace sparserep
