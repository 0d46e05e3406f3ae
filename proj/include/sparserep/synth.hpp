#pragma once

#include <cstdint>

#include "sparserep/dataset.hpp"

namespace sparserep {

struct SubspaceModelParams {
  int num_classes = 2;
  Index dimension = 10;  // m
  Index subspace_dim = 2;
  Index per_class = 10;
  double noise_sigma = 0.0;  // per-coordinate standard deviation
  std::uint64_t seed = 0;
};

// Mutually orthogonal class subspaces (requires K * subspace_dim <= m).
// Observation = B_k c + noise with c ~ N(0, I), then scaled to unit norm.
LabeledDataset subspace_model(const SubspaceModelParams& params);

struct ConeModelParams {
  int num_classes = 2;
  Index dimension = 10;         // m
  double within_angle = 0.0;    // cap radius around each class center, radians
  double between_angle = 1.57;  // minimum angle between class centers, radians
  Index per_class = 10;
  std::uint64_t seed = 0;
  bool nonnegative = false;  // reflect into the positive orthant
};

// Observations drawn uniformly from a spherical cap of radius within_angle
// around orthogonal class centers. Signed data is rotated by a random
// orthogonal matrix; the nonnegative variant uses coordinate axes as centers
// and takes absolute values, which keeps every point inside its cap.
LabeledDataset cone_model(const ConeModelParams& params);

// Class centers used by cone_model for the given parameters (m x K).
DenseMatrix cone_centers(const ConeModelParams& params);

}  // namespace sparserep
