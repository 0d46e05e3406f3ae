#include "sparserep/benchmark.hpp"

#include <algorithm>
#include <chrono>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numbers>
#include <numeric>
#include <optional>

#include "sparserep/error.hpp"
#include "sparserep/parallel.hpp"
#include "sparserep/random.hpp"
#include "sparserep/synth.hpp"

namespace sparserep {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_list(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto pos = text.find(sep, start);
    const auto item = trim(text.substr(start, pos == std::string::npos ? std::string::npos : pos - start));
    if (!item.empty()) out.push_back(item);
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
  T out{};
  const auto* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end) {
    throw Error(ErrorKind::InvalidArgument, "bad value '" + value + "' for " + key);
  }
  return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
  if (value == "false" || value == "0" || value == "no" || value == "off") return false;
  throw Error(ErrorKind::InvalidArgument, "bad boolean '" + value + "' for " + key);
}

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// "K=5,m=50,..." into a key/value map.
std::map<std::string, std::string> parse_synth_args(const std::string& text) {
  std::map<std::string, std::string> out;
  for (const auto& item : split_list(text, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw Error(ErrorKind::InvalidArgument, "synth argument '" + item + "' lacks '='");
    out[trim(item.substr(0, eq))] = trim(item.substr(eq + 1));
  }
  return out;
}

class SynthArgs {
 public:
  explicit SynthArgs(std::map<std::string, std::string> args) : args_(std::move(args)) {}

  template <typename T>
  T get(const std::string& key, T fallback) {
    const auto it = args_.find(key);
    if (it == args_.end()) return fallback;
    const std::string value = it->second;
    args_.erase(it);
    return parse_number<T>(key, value);
  }

  void finish() const {
    if (!args_.empty()) throw Error(ErrorKind::InvalidArgument, "unknown synth argument '" + args_.begin()->first + "'");
  }

 private:
  std::map<std::string, std::string> args_;
};

LoadedDataset synth_dataset(const std::string& descriptor) {
  const auto rest = descriptor.substr(6);
  const auto colon = rest.find(':');
  const std::string model = rest.substr(0, colon);
  SynthArgs args(parse_synth_args(colon == std::string::npos ? std::string() : rest.substr(colon + 1)));
  LoadedDataset out;
  if (model == "cone") {
    ConeModelParams p;
    p.num_classes = args.get<int>("K", 5);
    p.dimension = args.get<Index>("m", 50);
    p.within_angle = args.get<double>("within", 5.0) * std::numbers::pi / 180.0;
    p.between_angle = args.get<double>("between", 90.0) * std::numbers::pi / 180.0;
    p.per_class = args.get<Index>("n", 50);
    p.seed = args.get<std::uint64_t>("seed", 0);
    p.nonnegative = args.get<int>("nonneg", 0) != 0;
    args.finish();
    out.data = cone_model(p);
  } else if (model == "subspace") {
    SubspaceModelParams p;
    p.num_classes = args.get<int>("K", 5);
    p.dimension = args.get<Index>("m", 60);
    p.subspace_dim = args.get<Index>("dim", 4);
    p.per_class = args.get<Index>("n", 50);
    p.noise_sigma = args.get<double>("sigma", 0.01);
    p.seed = args.get<std::uint64_t>("seed", 0);
    args.finish();
    out.data = subspace_model(p);
  } else {
    throw Error(ErrorKind::InvalidArgument, "unknown synth model '" + model + "'");
  }
  out.data.validate();
  return out;
}

// Mean over the entries of `values` flagged in `use`; 0 when none are.
double mean_of(const std::vector<double>& values, const std::vector<char>& use) {
  double sum = 0.0;
  Index n = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (use[i]) {
      sum += values[i];
      ++n;
    }
  }
  return n > 0 ? sum / static_cast<double>(n) : 0.0;
}

struct BaselinePlan {
  std::string name;
  ProjectionKind projection;
  bool lda;
};

}  // namespace

void BenchConfig::validate() const {
  if (solvers.empty()) throw Error(ErrorKind::InvalidArgument, "no solvers selected");
  if (sparsity_max < 1) throw Error(ErrorKind::InvalidArgument, "sparsity_max must be >= 1");
  if (baseline_dims < 1) throw Error(ErrorKind::InvalidArgument, "baseline_dims must be >= 1");
  if (knn_k < 1) throw Error(ErrorKind::InvalidArgument, "knn_k must be >= 1");
  if (monte_carlo < 1) throw Error(ErrorKind::InvalidArgument, "monte_carlo must be >= 1");
  if (!(split_fraction > 0.0 && split_fraction < 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "split_fraction must lie in (0, 1)");
  }
  if (!(lda_ridge >= 0.0)) throw Error(ErrorKind::InvalidArgument, "lda_ridge must be >= 0");
  if (threads < 1) throw Error(ErrorKind::InvalidArgument, "threads must be >= 1");
}

void apply_config_entry(BenchConfig& config, const std::string& raw_key, const std::string& raw_value) {
  const std::string key = trim(raw_key);
  const std::string value = trim(raw_value);
  if (key == "solvers") {
    config.solvers.clear();
    for (const auto& name : split_list(value, ',')) {
      const auto kind = parse_solver_kind(name);
      if (std::find(config.solvers.begin(), config.solvers.end(), kind) == config.solvers.end()) {
        config.solvers.push_back(kind);
      }
    }
  } else if (key == "sparsity_max") {
    config.sparsity_max = parse_number<Index>(key, value);
  } else if (key == "baseline_dims") {
    config.baseline_dims = parse_number<Index>(key, value);
  } else if (key == "knn_k") {
    config.knn_k = parse_number<Index>(key, value);
  } else if (key == "monte_carlo") {
    config.monte_carlo = parse_number<Index>(key, value);
  } else if (key == "split_fraction") {
    config.split_fraction = parse_number<double>(key, value);
  } else if (key == "master_seed") {
    config.master_seed = parse_number<std::uint64_t>(key, value);
  } else if (key == "dataset") {
    config.dataset = value;
  } else if (key == "format") {
    config.format = parse_dataset_format(value);
    config.similarity_input = config.format == DatasetFormat::SimilarityCsv;
  } else if (key == "similarity_input") {
    config.similarity_input = parse_bool(key, value);
    config.format = config.similarity_input ? DatasetFormat::SimilarityCsv : DatasetFormat::FeatureCsv;
  } else if (key == "run_baselines") {
    config.run_baselines = parse_bool(key, value);
  } else if (key == "lda_ridge") {
    config.lda_ridge = parse_number<double>(key, value);
  } else if (key == "threads") {
    config.threads = parse_number<unsigned>(key, value);
  } else {
    throw Error(ErrorKind::InvalidArgument, "unknown config key '" + key + "'");
  }
}

BenchConfig read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot open config " + path.string());
  BenchConfig config;
  std::string line;
  for (std::int64_t number = 1; std::getline(in, line); ++number) {
    const auto text = trim(line.substr(0, line.find('#')));
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorKind::InvalidArgument, path.string() + ":" + std::to_string(number) + ": expected key = value",
                  number);
    }
    apply_config_entry(config, text.substr(0, eq), text.substr(eq + 1));
  }
  return config;
}

LoadedDataset resolve_dataset(const BenchConfig& config) {
  if (config.dataset.empty()) throw Error(ErrorKind::InvalidArgument, "no dataset given");
  if (config.dataset.rfind("synth:", 0) == 0) return synth_dataset(config.dataset);
  const auto format = config.similarity_input ? DatasetFormat::SimilarityCsv : config.format;
  return load_dataset(config.dataset, format, true);
}

Split holdout_split(const LabeledDataset& data, double fraction, std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction < 1.0)) throw Error(ErrorKind::InvalidArgument, "split fraction must lie in (0, 1)");
  const auto counts = data.class_counts();
  for (std::size_t k = 0; k < counts.size(); ++k) {
    if (counts[k] < 2) {
      throw Error(ErrorKind::ClassTooSmall, "class " + std::to_string(k + 1) + " has fewer than two observations",
                  static_cast<std::int64_t>(k + 1));
    }
  }
  const Index n = data.size();
  const auto n_train = static_cast<Index>(std::floor(static_cast<double>(n) * fraction));
  if (n_train < 1 || n_train >= n) throw Error(ErrorKind::InsufficientData, "split leaves an empty side");

  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  Rng rng(seed);
  // Fisher-Yates with an explicit bounded draw, so the permutation depends
  // only on the engine output.
  for (Index i = n - 1; i > 0; --i) {
    const auto bound = static_cast<std::uint64_t>(i) + 1;
    const std::uint64_t limit = Rng::max() - (Rng::max() % bound);
    std::uint64_t draw = rng();
    while (draw >= limit) draw = rng();
    std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(draw % bound)]);
  }
  Split out;
  out.train.assign(order.begin(), order.begin() + n_train);
  out.test.assign(order.begin() + n_train, order.end());
  std::sort(out.train.begin(), out.train.end());
  std::sort(out.test.begin(), out.test.end());
  return out;
}

SparsitySweep sweep_solver(SolverKind kind, const LabeledDataset& train, const LabeledDataset& test,
                           Index sparsity_max, unsigned threads) {
  if (train.size() == 0) throw Error(ErrorKind::EmptyTrainingSet, "training set is empty");
  if (train.dimension() != test.dimension()) throw Error(ErrorKind::DimensionMismatch, "train/test dimensions differ");
  if (sparsity_max < 1) throw Error(ErrorKind::InvalidArgument, "sparsity_max must be >= 1");
  const auto S = static_cast<std::size_t>(sparsity_max);
  const auto n_test = static_cast<std::size_t>(test.size());
  const int K = std::max(train.num_classes, test.num_classes);
  const DenseMatrix& X = train.features;

  SparsitySweep out;
  out.records.assign(S, std::vector<DominanceRecord>(n_test));
  out.held.assign(S, std::vector<char>(n_test, 0));
  out.failed.assign(n_test, 0);

  std::optional<FullRegression> full;
  if (kind == SolverKind::Full) full.emplace(X);
  const StopCriteria stop{sparsity_max, 1e-8, 1e-8};

  parallel_for(n_test, threads, [&](std::size_t j) {
    const Vector x = test.features.col(static_cast<Index>(j));
    const int y = test.labels[j];
    const auto record = [&](const SparseCoefficients& beta) {
      const auto decision = src_classify(X, beta, train.labels, x, K);
      const auto dom = dominance_report(X, beta, train.labels, y, x, K);
      return DominanceRecord{dom.dominates, decision.label == y};
    };
    try {
      if (full) {
        const auto rec = record(SparseCoefficients::from_dense(full->solve(x).coefficients));
        for (std::size_t s = 0; s < S; ++s) out.records[s][j] = rec;
        return;
      }
      const SolverPath path = solve_path(kind, X, x, stop);
      if (path.steps.empty()) throw Error(ErrorKind::NumericalBreakdown, "solver produced no steps");
      for (std::size_t s = 0; s < S; ++s) {
        const auto sparsity = static_cast<Index>(s + 1);
        if (sparsity > path.max_sparsity()) {
          // Held steps repeat the last decision.
          out.records[s][j] = out.records[s - 1][j];
          out.held[s][j] = 1;
          continue;
        }
        const auto& step = path.at_sparsity(sparsity);
        out.records[s][j] = record(SparseCoefficients{step.selected, step.coefficients});
      }
    } catch (const Error& e) {
      // Excluded from the counts, reported as a failure.
      if (e.kind() != ErrorKind::OrthogonalInput && e.kind() != ErrorKind::NumericalBreakdown &&
          e.kind() != ErrorKind::ZeroColumn) {
        throw;
      }
      out.failed[j] = 1;
    }
  });
  return out;
}

BenchmarkReport run_benchmark(const BenchConfig& config) {
  config.validate();
  return run_benchmark(config, resolve_dataset(config));
}

BenchmarkReport run_benchmark(const BenchConfig& config, const LoadedDataset& dataset) {
  config.validate();
  dataset.data.validate();
  const LabeledDataset& data = dataset.data;
  const Index S = config.sparsity_max;
  const auto R = static_cast<std::size_t>(config.monte_carlo);
  const std::size_t n_solvers = config.solvers.size();

  BenchmarkReport report;
  report.config = config;
  report.dataset_name = data.name;
  report.provenance = data.provenance;

  std::vector<BaselinePlan> plans;
  std::optional<Projection> spectral;
  if (config.run_baselines) {
    if (dataset.square) {
      plans = {{"knn-spectral", ProjectionKind::SpectralEmbedding, false},
               {"lda-spectral", ProjectionKind::SpectralEmbedding, true}};
      const auto t0 = Clock::now();
      const Index d = std::min(config.baseline_dims, dataset.square->rows());
      spectral = fit_spectral(*dataset.square, d);
      report.timings.baseline_seconds += seconds_since(t0);
    } else {
      plans = {{"knn-pca", ProjectionKind::Pca, false}, {"lda-pca", ProjectionKind::Pca, true}};
    }
  }

  for (std::size_t r = 0; r < R; ++r) {
    ReplicateRecord rep;
    rep.seed = config.master_seed + r;
    report.replicate_seeds.push_back(rep.seed);

    auto t0 = Clock::now();
    const Split split = holdout_split(data, config.split_fraction, rep.seed);
    LabeledDataset train = data.subset(split.train);
    LabeledDataset test = data.subset(split.test);
    if (!train.normalized) {
      train.features = normalize_columns(train.features);
      test.features = normalize_columns(test.features);
      train.normalized = test.normalized = true;
    }
    rep.n_train = train.size();
    rep.n_test = test.size();
    rep.train_class_counts = train.class_counts();
    rep.test_class_counts = test.class_counts();
    report.timings.split_seconds += seconds_since(t0);

    t0 = Clock::now();
    rep.solver_counts.resize(n_solvers);
    rep.solver_held.resize(n_solvers);
    rep.solver_failures.assign(n_solvers, 0);
    for (std::size_t k = 0; k < n_solvers; ++k) {
      const auto sweep = sweep_solver(config.solvers[k], train, test, S, config.threads);
      auto& counts = rep.solver_counts[k];
      counts.assign(static_cast<std::size_t>(S), ErrorCounts{});
      rep.solver_held[k].assign(static_cast<std::size_t>(S), 0);
      for (std::size_t j = 0; j < sweep.failed.size(); ++j) rep.solver_failures[k] += sweep.failed[j];
      for (std::size_t s = 0; s < counts.size(); ++s) {
        for (std::size_t j = 0; j < sweep.failed.size(); ++j) {
          if (sweep.failed[j]) continue;
          const auto& rec = sweep.records[s][j];
          rep.solver_held[k][s] += sweep.held[s][j];
          auto& c = counts[s];
          ++c.n_test;
          if (rec.dominates) {
            ++c.n_dominant;
            if (!rec.correct) ++c.n_dominant_wrong;
          } else if (!rec.correct) {
            ++c.n_nondominant_wrong;
          }
        }
      }
    }
    report.timings.solver_seconds += seconds_since(t0);

    t0 = Clock::now();
    for (const auto& plan : plans) {
      std::vector<double> errors;
      Projection projection;
      DenseMatrix train_coords, test_coords;
      Index d_max = 0;
      if (plan.projection == ProjectionKind::Pca) {
        d_max = std::min({config.baseline_dims, train.dimension(), train.size()});
        projection = fit_pca(train.features, d_max);
        train_coords = projection.project(train.features);
        test_coords = projection.project(test.features);
      } else {
        d_max = spectral->dimension;
        train_coords = gather_columns(spectral->coordinates, split.train);
        test_coords = gather_columns(spectral->coordinates, split.test);
      }
      // Small training sets cap the neighbour count.
      const Index k = std::min(config.knn_k, train.size());
      for (Index d = 1; d <= d_max; ++d) {
        const DenseMatrix tr = train_coords.topRows(d);
        const DenseMatrix te = test_coords.topRows(d);
        Index wrong = 0;
        try {
          if (plan.lda) {
            const LdaModel model(tr, train.labels, config.lda_ridge);
            for (Index j = 0; j < te.cols(); ++j) wrong += model.classify(te.col(j)) != test.labels[static_cast<std::size_t>(j)];
          } else {
            for (Index j = 0; j < te.cols(); ++j) {
              wrong += knn_classify(tr, train.labels, te.col(j), k) != test.labels[static_cast<std::size_t>(j)];
            }
          }
        } catch (const Error& e) {
          if (e.kind() != ErrorKind::SingularCovariance) throw;
          break;  // later dimensions are not computed for this replicate
        }
        errors.push_back(static_cast<double>(wrong) / static_cast<double>(te.cols()));
      }
      rep.baseline_errors.push_back(std::move(errors));
    }
    report.timings.baseline_seconds += seconds_since(t0);
    report.replicates.push_back(std::move(rep));
  }

  // Solver curves: per-replicate rates averaged over replicates that kept at
  // least one test observation; pooled counts summed over all replicates.
  for (std::size_t k = 0; k < n_solvers; ++k) {
    SolverCurve curve;
    curve.kind = config.solvers[k];
    curve.pooled.assign(static_cast<std::size_t>(S), ErrorCounts{});
    for (const auto& rep : report.replicates) curve.failures += rep.solver_failures[k];
    for (std::size_t s = 0; s < static_cast<std::size_t>(S); ++s) {
      std::vector<double> L, D, P1, P2;
      std::vector<char> use;
      Index held = 0;
      for (const auto& rep : report.replicates) {
        const auto& c = rep.solver_counts[k][s];
        curve.pooled[s] += c;
        held += rep.solver_held[k][s];
        use.push_back(c.n_test > 0);
        const auto dec = c.n_test > 0 ? decompose_counts(c) : ErrorDecomposition{};
        L.push_back(dec.L);
        D.push_back(1.0 - dec.P_D);
        P1.push_back(dec.P1);
        P2.push_back(dec.P2);
      }
      curve.L.push_back(mean_of(L, use));
      curve.one_minus_PD.push_back(mean_of(D, use));
      curve.P1.push_back(mean_of(P1, use));
      curve.P2.push_back(mean_of(P2, use));
      const auto pooled_n = curve.pooled[s].n_test;
      curve.held_fraction.push_back(pooled_n > 0 ? static_cast<double>(held) / static_cast<double>(pooled_n) : 0.0);
    }
    report.solvers.push_back(std::move(curve));
  }

  // Baseline curves: dimensions past the smallest per-replicate reach repeat
  // the last computed mean.
  for (std::size_t b = 0; b < plans.size(); ++b) {
    BaselineCurve curve;
    curve.name = plans[b].name;
    std::size_t valid = std::numeric_limits<std::size_t>::max();
    for (const auto& rep : report.replicates) valid = std::min(valid, rep.baseline_errors[b].size());
    if (valid == 0) continue;
    curve.valid_dims = static_cast<Index>(valid);
    for (Index d = 0; d < config.baseline_dims; ++d) {
      const auto use = std::min(static_cast<std::size_t>(d), valid - 1);
      double sum = 0.0;
      for (const auto& rep : report.replicates) sum += rep.baseline_errors[b][use];
      curve.error.push_back(sum / static_cast<double>(report.replicates.size()));
    }
    report.baselines.push_back(std::move(curve));
  }
  return report;
}

}  // namespace sparserep
