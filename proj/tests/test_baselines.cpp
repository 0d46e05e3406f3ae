#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "sparserep/baselines.hpp"
#include "sparserep/error.hpp"

using namespace sparserep;

namespace {

DenseMatrix gaussian(Index rows, Index cols, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> normal(0.0, scale);
  DenseMatrix out(rows, cols);
  for (Index i = 0; i < out.size(); ++i) out.data()[i] = normal(rng);
  return out;
}

double reconstruction_error(const Projection& p, const DenseMatrix& data) {
  const DenseMatrix coords = p.project(data);
  const DenseMatrix back = (p.basis * coords).colwise() + p.center;
  return (back - data).norm();
}

}  // namespace

TEST_CASE("pca of points on a line") {
  Vector dir(3);
  dir << 1, 2, -2;
  dir /= 3.0;
  DenseMatrix data(3, 6);
  for (Index j = 0; j < 6; ++j) data.col(j) = (j - 2.5) * dir;
  const auto p = fit_pca(data, 1);
  CHECK(reconstruction_error(p, data) < 1e-12);
  CHECK(std::abs(std::abs(p.basis.col(0).dot(dir)) - 1.0) < 1e-12);
  // Sign convention: largest-magnitude entry positive.
  Index arg = 0;
  p.basis.col(0).cwiseAbs().maxCoeff(&arg);
  CHECK(p.basis(arg, 0) > 0);
}

TEST_CASE("pca at full rank preserves distances") {
  std::mt19937_64 rng(3);
  const DenseMatrix data = gaussian(5, 8, rng);
  const auto p = fit_pca(data, 5);
  const DenseMatrix coords = p.project(data);
  CHECK((p.basis.transpose() * p.basis - DenseMatrix::Identity(5, 5)).cwiseAbs().maxCoeff() < 1e-8);
  for (Index i = 0; i < 8; ++i) {
    for (Index j = 0; j < 8; ++j) {
      CHECK(std::abs((coords.col(i) - coords.col(j)).norm() - (data.col(i) - data.col(j)).norm()) < 1e-8);
    }
  }
}

TEST_CASE("pca reconstruction error does not grow with d") {
  std::mt19937_64 rng(5);
  const DenseMatrix data = gaussian(9, 14, rng);
  const auto full = fit_pca(data, 9);
  double previous = INFINITY;
  for (Index d = 1; d <= 9; ++d) {
    const double err = reconstruction_error(full.truncated(d), data);
    CHECK(err <= previous + 1e-12);
    previous = err;
  }
  try {
    fit_pca(data, 10);
    FAIL("no throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DimensionTooLarge);
  }
}

TEST_CASE("spectral embedding reproduces a PSD matrix") {
  std::mt19937_64 rng(7);
  const DenseMatrix q = Eigen::HouseholderQR<DenseMatrix>(gaussian(4, 4, rng)).householderQ();
  Vector spectrum(4);
  spectrum << 4.0, 2.5, 1.0, 0.25;
  const DenseMatrix s = q * spectrum.asDiagonal() * q.transpose();
  const auto p = fit_spectral(s, 4);
  CHECK((p.coordinates.transpose() * p.coordinates - s).cwiseAbs().maxCoeff() < 1e-8);
  CHECK((p.spectrum - spectrum).cwiseAbs().maxCoeff() < 1e-10);

  try {
    fit_spectral(DenseMatrix::Zero(3, 4), 2);
    FAIL("no throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotSquare);
  }
  try {
    fit_spectral(s, 5);
    FAIL("no throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DimensionTooLarge);
  }
  CHECK(fit_projection(s, ProjectionKind::SpectralEmbedding, 2).coordinates.rows() == 2);
}

TEST_CASE("knn basics") {
  CHECK(kDefaultNeighbors == 9);
  DenseMatrix train(1, 9);
  train << 0, 1, 2, 3, 4, 10, 11, 12, 13;
  const Labels labels{1, 1, 1, 1, 1, 2, 2, 2, 2};
  Vector x(1);
  x << 3.0;
  CHECK(knn_classify(train, labels, x, 1) == 1);
  x << 11.0;
  CHECK(knn_classify(train, labels, x, 1) == 2);
  // Nine neighbours: votes 5 to 4.
  CHECK(knn_classify(train, labels, x, 9) == 1);
  // Vote tie between classes goes to the lower one.
  DenseMatrix pair(1, 2);
  pair << -1, 1;
  x << 0.0;
  CHECK(knn_classify(pair, Labels{2, 1}, x, 2) == 1);
  try {
    knn_classify(DenseMatrix(1, 0), Labels{}, x, 1);
    FAIL("no throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::EmptyTrainingSet);
  }
}

TEST_CASE("knn with k = 1 on its own training set") {
  std::mt19937_64 rng(11);
  const DenseMatrix train = gaussian(4, 30, rng);
  Labels labels(30);
  for (std::size_t i = 0; i < 30; ++i) labels[i] = 1 + static_cast<int>(i % 3);
  for (Index j = 0; j < 30; ++j) CHECK(knn_classify(train, labels, train.col(j), 1) == labels[static_cast<std::size_t>(j)]);
}

TEST_CASE("lda on well separated blobs") {
  std::mt19937_64 rng(13);
  DenseMatrix train = gaussian(2, 200, rng);
  Labels labels(200);
  for (Index j = 0; j < 200; ++j) {
    labels[static_cast<std::size_t>(j)] = j < 100 ? 1 : 2;
    if (j >= 100) train(0, j) += 10.0;
  }
  DenseMatrix test = gaussian(2, 200, rng);
  int wrong = 0;
  const LdaModel model(train, labels);
  for (Index j = 0; j < 200; ++j) {
    const int y = j < 100 ? 1 : 2;
    if (y == 2) test(0, j) += 10.0;
    wrong += model.classify(test.col(j)) != y;
    CHECK(lda_classify(train, labels, test.col(j)) == model.classify(test.col(j)));
  }
  CHECK(wrong == 0);
}

TEST_CASE("lda on indistinguishable classes is near chance") {
  std::mt19937_64 rng(17);
  const DenseMatrix train = gaussian(3, 400, rng);
  Labels labels(400);
  for (std::size_t i = 0; i < 400; ++i) labels[i] = 1 + static_cast<int>(i % 2);
  const LdaModel model(train, labels);
  const DenseMatrix test = gaussian(3, 1000, rng);
  std::bernoulli_distribution coin(0.5);
  int correct = 0;
  for (Index j = 0; j < 1000; ++j) correct += model.classify(test.col(j)) == (coin(rng) ? 1 : 2);
  CHECK(std::abs(correct / 1000.0 - 0.5) < 0.1);
}

TEST_CASE("lda with degenerate covariance") {
  const DenseMatrix same = DenseMatrix::Ones(2, 6);
  const Labels labels{1, 2, 1, 2, 1, 2};
  CHECK(lda_classify(same, labels, Vector::Ones(2), 1e-6) == 1);
  try {
    LdaModel(same, labels, 0.0);
    FAIL("no throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::SingularCovariance);
  }
}

TEST_CASE("lda decisions survive an affine change of coordinates") {
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 20; ++trial) {
    DenseMatrix train = gaussian(3, 60, rng);
    Labels labels(60);
    for (Index j = 0; j < 60; ++j) {
      labels[static_cast<std::size_t>(j)] = 1 + static_cast<int>(j % 3);
      train(labels[static_cast<std::size_t>(j)] - 1, j) += 1.5;
    }
    const DenseMatrix test = gaussian(3, 40, rng);
    DenseMatrix A = gaussian(3, 3, rng);
    A += 3.0 * DenseMatrix::Identity(3, 3);
    const Vector shift = gaussian(3, 1, rng);
    const DenseMatrix train2 = (A * train).colwise() + shift;
    const DenseMatrix test2 = (A * test).colwise() + shift;
    // Without a ridge the discriminant is exactly affine equivariant.
    const LdaModel a(train, labels, 0.0), b(train2, labels, 0.0);
    for (Index j = 0; j < 40; ++j) {
      const Vector da = a.discriminants(test.col(j));
      Vector sorted = da;
      std::sort(sorted.data(), sorted.data() + sorted.size());
      if (sorted(sorted.size() - 1) - sorted(sorted.size() - 2) < 1e-8) continue;
      CHECK(a.classify(test.col(j)) == b.classify(test2.col(j)));
    }
  }
}
