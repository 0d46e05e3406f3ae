#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "sparserep/diagnostics.hpp"
#include "sparserep/error.hpp"
#include "sparserep/solvers.hpp"
#include "sparserep/synth.hpp"

using namespace sparserep;

namespace {

constexpr double kHalfPi = std::numbers::pi / 2;

LabeledDataset make_dataset(DenseMatrix features, Labels labels) {
  LabeledDataset d;
  d.features = std::move(features);
  d.labels = std::move(labels);
  d.num_classes = max_label(d.labels);
  return d;
}

}  // namespace

TEST_CASE("dominance on an orthonormal instance") {
  const DenseMatrix X = DenseMatrix::Identity(3, 2);
  const Labels labels{1, 2};
  Vector beta(2);
  beta << 0.8, 0.3;
  Vector x(3);
  x << 0.8, 0.3, std::sqrt(1 - 0.73);
  const auto rep = dominance_report(X, beta, labels, 1, x, 2);
  CHECK(rep.dominates);
  CHECK(rep.positively_dominates);
  CHECK(rep.own_norm == doctest::Approx(0.8));
  CHECK(rep.other_norm == doctest::Approx(0.3));
  CHECK(rep.dominance_ratio() == doctest::Approx(0.8 / 0.3));
  CHECK(rep.angle_own < rep.angle_other);

  beta << 0.5, 0.5;
  x << 0.5, 0.5, std::sqrt(0.5);
  CHECK_FALSE(dominance_report(X, beta, labels, 1, x, 2).dominates);
}

TEST_CASE("zero contributions get right angles") {
  const DenseMatrix X = DenseMatrix::Identity(3, 2);
  Vector beta(2);
  beta << 0.7, 0.0;
  const Vector x = Vector::Unit(3, 0);
  const auto rep = dominance_report(X, beta, Labels{1, 2}, 2, x, 2);
  CHECK(rep.angle_own == doctest::Approx(kHalfPi));
  CHECK_FALSE(rep.dominates);
  const auto mine = dominance_report(X, beta, Labels{1, 2}, 1, x, 2);
  CHECK(mine.angle_other == doctest::Approx(kHalfPi));
  CHECK(std::isinf(mine.dominance_ratio()));
}

TEST_CASE("dominance errors") {
  const DenseMatrix X = DenseMatrix::Identity(2, 2);
  try {
    dominance_report(X, Vector::Zero(3), Labels{1, 2}, 1, Vector::Unit(2, 0), 2);
    FAIL("no throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DimensionMismatch);
  }
}

TEST_CASE("dominance matches the angle comparison on full rank OMP fits") {
  std::mt19937_64 rng(83);
  std::uniform_int_distribution<int> label(1, 3);
  int compared = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const DenseMatrix X = oracle::random_unit_columns(12, 24, rng);
    Labels labels(24);
    for (auto& y : labels) y = label(rng);
    const Vector x = oracle::random_unit_vector(12, rng);
    const int y = label(rng);
    const auto path = omp_path(X, x, StopCriteria{1 + trial % 8, 1e-8, 1e-8});
    const auto& step = path.steps.back();
    const auto rep = dominance_report(X, SparseCoefficients{step.selected, step.coefficients}, labels, y, x, 3);
    if (std::abs(rep.own_norm - rep.other_norm) < 1e-10 || std::abs(rep.angle_own - rep.angle_other) < 1e-10) continue;
    CHECK(rep.dominates == (rep.angle_own < rep.angle_other));
    ++compared;
  }
  CHECK(compared >= 90);
}

TEST_CASE("dominance with positive dominance certifies the label") {
  DominanceReport rep;
  rep.dominates = true;
  rep.positively_dominates = true;
  SrcDecision d;
  d.label = 2;
  CHECK(check_theorem1(rep, d, 2));
  CHECK_FALSE(check_theorem1(rep, d, 1));
  rep.dominates = false;
  CHECK(check_theorem1(rep, d, 1));
}

TEST_CASE("two classes: dominance implies positive dominance") {
  std::mt19937_64 rng(89);
  std::uniform_int_distribution<int> label(1, 2);
  for (int trial = 0; trial < 200; ++trial) {
    const DenseMatrix X = oracle::random_unit_columns(8, 16, rng);
    Labels labels(16);
    for (auto& y : labels) y = label(rng);
    const Vector x = oracle::random_unit_vector(8, rng);
    const auto step = homotopy_path(X, x, StopCriteria{1 + trial % 6, 1e-8, 1e-8}).steps.back();
    const int y = label(rng);
    const auto rep = dominance_report(X, SparseCoefficients{step.selected, step.coefficients}, labels, y, x, 2);
    if (rep.dominates) CHECK(rep.positively_dominates);
  }
}

TEST_CASE("nonnegative two-class data: dominance and the label") {
  // Unconstrained fits may carry negative entries, so mismatches are counted
  // and reported rather than failed.
  std::mt19937_64 rng(97);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int dominant = 0, mismatched = 0;
  for (int trial = 0; trial < 300; ++trial) {
    DenseMatrix X(10, 20);
    for (Index i = 0; i < X.size(); ++i) X.data()[i] = unit(rng);
    X = X.colwise().normalized();
    Labels labels(20);
    for (std::size_t i = 0; i < 20; ++i) labels[i] = i < 10 ? 1 : 2;
    Vector x(10);
    for (Index i = 0; i < 10; ++i) x(i) = unit(rng);
    x.normalize();
    const auto step = omp_path(X, x, StopCriteria{1 + trial % 5, 1e-8, 1e-8}).steps.back();
    const SparseCoefficients beta{step.selected, step.coefficients};
    const int y = 1 + trial % 2;
    const auto rep = dominance_report(X, beta, labels, y, x, 2);
    if (!rep.dominates) continue;
    ++dominant;
    mismatched += src_classify(X, beta, labels, x, 2).label != y;
  }
  MESSAGE("dominant instances " << dominant << ", label mismatches " << mismatched);
  CHECK(dominant > 0);
}

TEST_CASE("decomposition arithmetic") {
  std::vector<DominanceRecord> records;
  for (int i = 0; i < 90; ++i) records.push_back({true, i != 0});
  for (int i = 0; i < 10; ++i) records.push_back({false, i >= 6});
  const auto dec = decompose_errors(records);
  CHECK(dec.P_D == doctest::Approx(0.9));
  CHECK(dec.P1 == doctest::Approx(1.0 / 90));
  CHECK(dec.P2 == doctest::Approx(0.6));
  CHECK(dec.L == doctest::Approx(0.07));
  CHECK(dec.identity_holds_exactly());
  CHECK(dec.identity_residual() < 1e-15);

  std::vector<DominanceRecord> perfect(20, DominanceRecord{true, true});
  const auto clean = decompose_errors(perfect);
  CHECK(clean.L == 0.0);
  CHECK(clean.P_D == 1.0);
  CHECK(clean.P1 == 0.0);
  CHECK(clean.P2 == 0.0);

  try {
    decompose_errors(std::vector<DominanceRecord>{});
    FAIL("no throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::EmptyInput);
  }
}

TEST_CASE("decomposition ignores record order") {
  std::mt19937_64 rng(101);
  std::bernoulli_distribution coin(0.3);
  std::vector<DominanceRecord> records(57);
  for (auto& r : records) r = {coin(rng), !coin(rng)};
  const auto a = decompose_errors(records);
  std::shuffle(records.begin(), records.end(), rng);
  const auto b = decompose_errors(records);
  CHECK(a.L == b.L);
  CHECK(a.P_D == b.P_D);
  CHECK(a.P1 == b.P1);
  CHECK(a.P2 == b.P2);
  const auto wrong = std::count_if(records.begin(), records.end(), [](const auto& r) { return !r.correct; });
  CHECK(a.L == static_cast<double>(wrong) / 57.0);
}

TEST_CASE("angle scan on two orthogonal classes") {
  const auto train = make_dataset(DenseMatrix::Identity(2, 2), Labels{1, 2});
  const auto test = make_dataset(DenseMatrix(Vector::Unit(2, 0)), Labels{1});
  AngleScanOptions options;
  options.c_grid = {0.1, 0.7, 1.5};
  const auto result = angle_condition_scan(train, test, options);
  CHECK(result.q_hat == 1.0);
  for (const char h : result.points[0].holds) CHECK(h == 1);
  CHECK(result.points[0].nearest_within == doctest::Approx(0.0));
  CHECK(result.points[0].min_between[0] == doctest::Approx(kHalfPi));
}

TEST_CASE("angle scan fails when the neighbours carry the wrong label") {
  const Vector x = Vector::Unit(3, 0);
  DenseMatrix features(3, 3);
  features << x, x, Vector::Unit(3, 1);
  const auto train = make_dataset(features, Labels{2, 2, 1});
  const auto test = make_dataset(DenseMatrix(x), Labels{1});
  AngleScanOptions options;
  options.c_grid = {0.1, 0.5, 1.0, 1.5};
  CHECK(angle_condition_scan(train, test, options).q_hat == 0.0);
}

TEST_CASE("angle scan on noiseless orthogonal subspaces") {
  SubspaceModelParams p;
  p.num_classes = 3;
  p.dimension = 12;
  p.subspace_dim = 3;
  p.per_class = 20;
  p.seed = 5;
  const auto data = subspace_model(p);
  std::vector<Index> tr, te;
  for (Index i = 0; i < data.size(); ++i) (i % 4 == 0 ? te : tr).push_back(i);
  const auto train = data.subset(tr);
  const auto test = data.subset(te);

  // Between-subspace angles computed directly: other-class columns span a
  // subspace orthogonal to x, so every subset angle is pi/2.
  for (Index t = 0; t < test.size(); ++t) {
    std::vector<Index> other;
    for (Index i = 0; i < train.size(); ++i) {
      if (train.labels[static_cast<std::size_t>(i)] != test.labels[static_cast<std::size_t>(t)]) other.push_back(i);
    }
    CHECK(principal_angle(test.features.col(t), gather_columns(train.features, other)) ==
          doctest::Approx(kHalfPi).epsilon(1e-10));
  }
  for (const Index s : {1, 2, 3}) {
    AngleScanOptions options;
    options.c_grid = {kHalfPi / 2};
    options.sparsity = s;
    options.samples = 50;
    options.seed = 3;
    const auto result = angle_condition_scan(train, test, options);
    // Nearest mode asks for some class-y column within c of x; with 15
    // training columns in a 3-dimensional subspace that holds for most x.
    CHECK(result.q_hat >= 0.9);
    for (const auto& pt : result.points) CHECK(pt.min_between[0] == doctest::Approx(kHalfPi).epsilon(1e-10));
  }
}

TEST_CASE("angle scan modes and seeds") {
  ConeModelParams p;
  p.num_classes = 3;
  p.dimension = 10;
  p.within_angle = 5.0 * std::numbers::pi / 180;
  p.between_angle = kHalfPi;
  p.per_class = 12;
  p.seed = 8;
  const auto data = cone_model(p);
  std::vector<Index> tr, te;
  for (Index i = 0; i < data.size(); ++i) (i % 3 == 0 ? te : tr).push_back(i);
  AngleScanOptions options;
  options.c_grid = {30.0 * std::numbers::pi / 180};
  options.sparsity = 2;
  options.samples = 30;
  options.seed = 1;
  for (const auto mode : {AngleScanMode::Nearest, AngleScanMode::Strict, AngleScanMode::Extended}) {
    options.mode = mode;
    const auto a = angle_condition_scan(data.subset(tr), data.subset(te), options);
    const auto b = angle_condition_scan(data.subset(tr), data.subset(te), options);
    CHECK(a.q_hat == 1.0);
    CHECK(a.points[0].min_between == b.points[0].min_between);
  }
}

TEST_CASE("angle scan argument checks") {
  const auto train = make_dataset(DenseMatrix::Identity(2, 2), Labels{1, 2});
  LabeledDataset empty;
  empty.features.resize(2, 0);
  AngleScanOptions options;
  options.c_grid = {0.5};
  try {
    angle_condition_scan(train, empty, options);
    FAIL("no throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InsufficientData);
  }
  options.c_grid = {kHalfPi};
  try {
    angle_condition_scan(train, train, options);
    FAIL("no throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidArgument);
  }
}
