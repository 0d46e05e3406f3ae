#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "sparserep/baselines.hpp"
#include "sparserep/diagnostics.hpp"
#include "sparserep/io.hpp"
#include "sparserep/solvers.hpp"

namespace sparserep {

struct BenchConfig {
  std::vector<SolverKind> solvers{SolverKind::Omp, SolverKind::Homotopy, SolverKind::Marginal};
  Index sparsity_max = 100;
  Index baseline_dims = 100;
  Index knn_k = kDefaultNeighbors;
  Index monte_carlo = 100;
  double split_fraction = 0.5;
  std::uint64_t master_seed = 0;
  // A file path, or "synth:cone:K=5,m=50,..." / "synth:subspace:K=5,..." for
  // generated data.
  std::string dataset;
  DatasetFormat format = DatasetFormat::FeatureCsv;
  bool similarity_input = false;
  bool run_baselines = true;
  double lda_ridge = 1e-6;
  unsigned threads = 1;

  void validate() const;
};

// Applies one "key = value" setting; keys mirror the field names above.
void apply_config_entry(BenchConfig& config, const std::string& key, const std::string& value);
// Reads a flat "key = value" file ('#' comments allowed) over the defaults.
BenchConfig read_config_file(const std::filesystem::path& path);

// Resolves a dataset descriptor: a file path or a synth: specification.
LoadedDataset resolve_dataset(const BenchConfig& config);

struct Split {
  std::vector<Index> train;  // ascending column indices
  std::vector<Index> test;
};

// Uniform (unstratified) split: floor(n * fraction) columns train, the rest
// test. Requires at least two observations per class.
Split holdout_split(const LabeledDataset& data, double fraction, std::uint64_t seed);

struct SolverCurve {
  SolverKind kind = SolverKind::Omp;
  // Replicate means at s = 1..sparsity_max.
  std::vector<double> L, one_minus_PD, P1, P2;
  // Fraction of test paths (pooled over replicates) whose last step was held
  // to reach s.
  std::vector<double> held_fraction;
  // Counts summed over replicates; the decomposition identity holds on these.
  std::vector<ErrorCounts> pooled;
  Index failures = 0;
};

struct BaselineCurve {
  std::string name;  // "knn-pca", "lda-spectral", ...
  std::vector<double> error;  // replicate means at d = 1..baseline_dims
  Index valid_dims = 0;       // entries past this repeat the last computed value
};

struct ReplicateRecord {
  std::uint64_t seed = 0;
  Index n_train = 0;
  Index n_test = 0;
  std::vector<Index> train_class_counts;
  std::vector<Index> test_class_counts;
  std::vector<std::vector<ErrorCounts>> solver_counts;  // [solver][s - 1]
  std::vector<std::vector<Index>> solver_held;  // [solver][s - 1], paths held to reach s
  std::vector<Index> solver_failures;
  std::vector<std::vector<double>> baseline_errors;  // [baseline][d - 1]
};

struct PhaseTimings {
  double split_seconds = 0.0;
  double solver_seconds = 0.0;
  double baseline_seconds = 0.0;
};

struct BenchmarkReport {
  static constexpr int kSchemaVersion = 1;

  BenchConfig config;
  std::string dataset_name;
  std::string provenance;
  std::vector<SolverCurve> solvers;
  std::vector<BaselineCurve> baselines;
  std::vector<std::uint64_t> replicate_seeds;
  std::vector<ReplicateRecord> replicates;
  PhaseTimings timings;
};

BenchmarkReport run_benchmark(const BenchConfig& config);
BenchmarkReport run_benchmark(const BenchConfig& config, const LoadedDataset& dataset);

// Per-test outcome at every sparsity level for one solver on one split.
struct SparsitySweep {
  std::vector<std::vector<DominanceRecord>> records;  // [s - 1][test]
  std::vector<std::vector<char>> held;                // [s - 1][test]
  std::vector<char> failed;                           // [test]
};

SparsitySweep sweep_solver(SolverKind kind, const LabeledDataset& train, const LabeledDataset& test,
                           Index sparsity_max, unsigned threads = 1);

}  // namespace sparserep
