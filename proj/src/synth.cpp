#include "sparserep/synth.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "sparserep/error.hpp"
#include "sparserep/random.hpp"

namespace sparserep {

namespace {

DenseMatrix gaussian_matrix(Index rows, Index cols, Rng& rng) {
  std::normal_distribution<double> normal;
  DenseMatrix out(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) out(i, j) = normal(rng);
  }
  return out;
}

// m x k matrix with orthonormal columns, Haar distributed.
DenseMatrix random_orthonormal(Index m, Index k, Rng& rng) {
  const DenseMatrix g = gaussian_matrix(m, k, rng);
  Eigen::HouseholderQR<DenseMatrix> qr(g);
  DenseMatrix q = qr.householderQ() * DenseMatrix::Identity(m, k);
  // Fix column signs against diag(R) so the distribution is uniform.
  for (Index j = 0; j < k; ++j) {
    if (qr.matrixQR()(j, j) < 0) q.col(j) = -q.col(j);
  }
  return q;
}

double angle_between(const Vector& a, const Vector& b) {
  return std::acos(std::clamp(std::abs(a.dot(b)) / (a.norm() * b.norm()), 0.0, 1.0));
}

// Uniform draw from the spherical cap of angular radius `radius` around the
// unit vector `center`: polar angle by rejection against sin^{m-2}, azimuth
// from a Gaussian projected onto the tangent space.
Vector sample_cap(const Vector& center, double radius, Rng& rng) {
  if (radius == 0.0) return center;
  const Index m = center.size();
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double theta = 0.0;
  const double top = std::sin(std::min(radius, std::numbers::pi / 2));
  while (true) {
    theta = radius * unit(rng);
    const double accept = m > 2 ? std::pow(std::sin(theta) / top, static_cast<double>(m - 2)) : 1.0;
    if (unit(rng) < accept) break;
  }
  std::normal_distribution<double> normal;
  Vector tangent(m);
  double norm = 0.0;
  do {
    for (Index i = 0; i < m; ++i) tangent(i) = normal(rng);
    tangent -= tangent.dot(center) * center;
    norm = tangent.norm();
  } while (norm < 1e-12);
  tangent /= norm;
  Vector out = std::cos(theta) * center + std::sin(theta) * tangent;
  return out / out.norm();
}

}  // namespace

LabeledDataset subspace_model(const SubspaceModelParams& p) {
  if (p.num_classes < 1 || p.dimension < 1 || p.subspace_dim < 1 || p.per_class < 1 || p.noise_sigma < 0) {
    throw Error(ErrorKind::InvalidArgument, "subspace model parameters must be positive");
  }
  if (p.num_classes * p.subspace_dim > p.dimension) {
    throw Error(ErrorKind::DimensionTooSmall, "K * subspace_dim exceeds the ambient dimension");
  }
  Rng rng(p.seed);
  const DenseMatrix bases = random_orthonormal(p.dimension, p.num_classes * p.subspace_dim, rng);
  std::normal_distribution<double> normal;

  LabeledDataset out;
  out.features.resize(p.dimension, p.num_classes * p.per_class);
  out.num_classes = p.num_classes;
  Index col = 0;
  for (int k = 0; k < p.num_classes; ++k) {
    const auto basis = bases.middleCols(k * p.subspace_dim, p.subspace_dim);
    for (Index i = 0; i < p.per_class; ++i) {
      Vector coeff(p.subspace_dim);
      for (Index j = 0; j < coeff.size(); ++j) coeff(j) = normal(rng);
      Vector v = basis * coeff;
      if (p.noise_sigma > 0) {
        for (Index r = 0; r < v.size(); ++r) v(r) += p.noise_sigma * normal(rng);
      }
      const double norm = v.norm();
      if (!(norm > kZeroColumnNorm)) throw Error(ErrorKind::ZeroColumn, "degenerate draw", col);
      out.features.col(col++) = v / norm;
      out.labels.push_back(k + 1);
    }
  }
  out.normalized = true;
  out.name = "subspace";
  std::ostringstream prov;
  prov << "subspace_model K=" << p.num_classes << " m=" << p.dimension << " dim=" << p.subspace_dim
       << " n_per_class=" << p.per_class << " sigma=" << p.noise_sigma << " seed=" << p.seed
       << " coefficients=N(0,I) noise=isotropic-gaussian";
  out.provenance = prov.str();
  return out;
}

namespace {

void check_cone(const ConeModelParams& p) {
  if (p.num_classes < 1 || p.dimension < 1 || p.per_class < 1) {
    throw Error(ErrorKind::InvalidArgument, "cone model counts must be positive");
  }
  if (p.num_classes > p.dimension) throw Error(ErrorKind::DimensionTooSmall, "more classes than dimensions");
  if (!(p.within_angle >= 0 && p.within_angle < p.between_angle && p.between_angle <= std::numbers::pi / 2)) {
    throw Error(ErrorKind::InvalidArgument, "need 0 <= within < between <= pi/2");
  }
  if (p.between_angle - 2 * p.within_angle <= 2 * p.within_angle) {
    throw Error(ErrorKind::InfeasibleGeometry, "between-class margin does not exceed within-class spread");
  }
}

}  // namespace

DenseMatrix cone_centers(const ConeModelParams& p) {
  check_cone(p);
  if (p.nonnegative) return DenseMatrix::Identity(p.dimension, p.num_classes);
  Rng rng(p.seed);
  return random_orthonormal(p.dimension, p.num_classes, rng);
}

LabeledDataset cone_model(const ConeModelParams& p) {
  check_cone(p);
  Rng rng(p.seed);
  const DenseMatrix centers =
      p.nonnegative ? DenseMatrix(DenseMatrix::Identity(p.dimension, p.num_classes))
                    : random_orthonormal(p.dimension, p.num_classes, rng);

  LabeledDataset out;
  out.features.resize(p.dimension, p.num_classes * p.per_class);
  out.num_classes = p.num_classes;
  const double within_bound = 2 * p.within_angle + 1e-12;
  const double between_bound = p.between_angle - 2 * p.within_angle - 1e-12;
  Index col = 0;
  for (int k = 0; k < p.num_classes; ++k) {
    const Vector center = centers.col(k);
    for (Index i = 0; i < p.per_class; ++i) {
      Vector v;
      for (int attempt = 0;; ++attempt) {
        if (attempt > 1000) throw Error(ErrorKind::InfeasibleGeometry, "could not place observation", col);
        v = sample_cap(center, p.within_angle, rng);
        if (p.nonnegative) v = v.cwiseAbs();
        if (angle_between(v, center) > p.within_angle + 1e-12) continue;
        // Reflection can pull points of different classes together; such
        // draws are rejected so the pairwise guarantees hold exactly.
        bool ok = true;
        for (Index j = 0; j < col && ok; ++j) {
          const double a = angle_between(v, out.features.col(j));
          ok = out.labels[static_cast<std::size_t>(j)] == k + 1 ? a <= within_bound : a >= between_bound;
        }
        if (ok) break;
      }
      out.features.col(col++) = v;
      out.labels.push_back(k + 1);
    }
  }
  out.normalized = true;
  out.name = "cone";
  std::ostringstream prov;
  prov << "cone_model K=" << p.num_classes << " m=" << p.dimension << " within=" << p.within_angle
       << " between=" << p.between_angle << " n_per_class=" << p.per_class << " seed=" << p.seed
       << " nonnegative=" << (p.nonnegative ? 1 : 0) << " centers=" << (p.nonnegative ? "axes" : "haar-orthonormal")
       << " cap=uniform";
  out.provenance = prov.str();
  return out;
}

}  // namespace sparserep
