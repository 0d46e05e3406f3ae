// Command line front end: bench, classify, diagnose and synth.

#include <CLI11.hpp>

#include <cmath>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "sparserep/benchmark.hpp"
#include "sparserep/diagnostics.hpp"
#include "sparserep/error.hpp"
#include "sparserep/io.hpp"
#include "sparserep/report.hpp"
#include "sparserep/solvers.hpp"

namespace {

using namespace sparserep;

struct DataOptions {
  std::string dataset;
  std::string format = "feature";
  bool similarity = false;
};

void add_data_options(CLI::App* cmd, DataOptions& opts, bool required) {
  auto* d = cmd->add_option("--dataset", opts.dataset, "CSV path or synth:cone:K=..,m=.. / synth:subspace:..");
  if (required) d->required();
  cmd->add_option("--format", opts.format, "feature | similarity")->check(CLI::IsMember({"feature", "similarity"}));
  cmd->add_flag("--similarity", opts.similarity, "input is a square similarity matrix");
}

BenchConfig data_config(const DataOptions& opts) {
  BenchConfig config;
  config.dataset = opts.dataset;
  config.format = opts.similarity ? DatasetFormat::SimilarityCsv : parse_dataset_format(opts.format);
  config.similarity_input = config.format == DatasetFormat::SimilarityCsv;
  return config;
}

int run_bench(const std::string& config_path, const DataOptions& data, const std::optional<std::string>& solvers,
              const std::optional<Index>& sparsity_max, const std::optional<Index>& replicates,
              const std::optional<std::uint64_t>& seed, const std::optional<unsigned>& threads, bool no_baselines,
              const std::string& out_dir, const std::string& emit) {
  BenchConfig config = config_path.empty() ? BenchConfig{} : read_config_file(config_path);
  if (!data.dataset.empty()) config.dataset = data.dataset;
  if (data.similarity || data.format != "feature") {
    apply_config_entry(config, "format", data.similarity ? "similarity" : data.format);
  }
  if (solvers) apply_config_entry(config, "solvers", *solvers);
  if (sparsity_max) config.sparsity_max = *sparsity_max;
  if (replicates) config.monte_carlo = *replicates;
  if (seed) config.master_seed = *seed;
  if (threads) config.threads = *threads;
  if (no_baselines) config.run_baselines = false;
  const auto sinks = parse_report_sinks(emit);

  const auto report = run_benchmark(config);
  for (const auto sink : sinks) std::cout << emit_report(report, sink, out_dir).string() << '\n';
  for (const auto& curve : report.solvers) {
    const auto best = std::min_element(curve.L.begin(), curve.L.end());
    std::cout << to_string(curve.kind) << ": best mean error " << *best << " at s = " << (best - curve.L.begin() + 1)
              << ", failures " << curve.failures << '\n';
  }
  return 0;
}

int run_classify(const DataOptions& data, const std::string& solver, Index sparsity, std::uint64_t seed,
                 double fraction) {
  const auto loaded = resolve_dataset(data_config(data));
  const auto split = holdout_split(loaded.data, fraction, seed);
  const auto train = loaded.data.subset(split.train);
  const auto test = loaded.data.subset(split.test);
  const auto kind = parse_solver_kind(solver);
  const int K = loaded.data.num_classes;

  std::optional<FullRegression> full;
  if (kind == SolverKind::Full) full.emplace(train.features);
  const StopCriteria stop{sparsity, 1e-8, 1e-8};

  std::cout << "observation,true,predicted,sparsity,dominates\n";
  Index wrong = 0, failed = 0;
  for (Index j = 0; j < test.size(); ++j) {
    const Vector x = test.features.col(j);
    const int y = test.labels[static_cast<std::size_t>(j)];
    SparseCoefficients beta;
    try {
      if (full) {
        beta = SparseCoefficients::from_dense(full->solve(x).coefficients);
      } else {
        const auto path = solve_path(kind, train.features, x, stop);
        const auto& step = path.at_sparsity(sparsity);
        beta = {step.selected, step.coefficients};
      }
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::OrthogonalInput && e.kind() != ErrorKind::NumericalBreakdown) throw;
      std::cout << split.test[static_cast<std::size_t>(j)] << ',' << y << ",failed," << 0 << ",\n";
      ++failed;
      continue;
    }
    const auto decision = src_classify(train.features, beta, train.labels, x, K);
    const auto dom = dominance_report(train.features, beta, train.labels, y, x, K);
    wrong += decision.label != y;
    std::cout << split.test[static_cast<std::size_t>(j)] << ',' << y << ',' << decision.label << ','
              << beta.indices.size() << ',' << (dom.dominates ? 1 : 0) << '\n';
  }
  const Index scored = test.size() - failed;
  std::cerr << "error " << (scored > 0 ? static_cast<double>(wrong) / static_cast<double>(scored) : 0.0) << " over "
            << scored << " observations, " << failed << " failed\n";
  return 0;
}

int run_diagnose(const DataOptions& data, const std::vector<double>& c_degrees, Index sparsity, Index samples,
                 std::uint64_t seed, double fraction, const std::string& mode) {
  const auto loaded = resolve_dataset(data_config(data));
  const auto split = holdout_split(loaded.data, fraction, seed);
  AngleScanOptions options;
  for (const double c : c_degrees) options.c_grid.push_back(c * std::numbers::pi / 180.0);
  options.sparsity = sparsity;
  options.samples = samples;
  options.seed = seed;
  options.mode = mode == "strict" ? AngleScanMode::Strict
                 : mode == "extended" ? AngleScanMode::Extended
                                      : AngleScanMode::Nearest;
  const auto result = angle_condition_scan(loaded.data.subset(split.train), loaded.data.subset(split.test), options);

  std::cout << "c_degrees,fraction_holding\n";
  for (std::size_t i = 0; i < c_degrees.size(); ++i) {
    Index hold = 0;
    for (const auto& p : result.points) hold += p.holds[i];
    std::cout << c_degrees[i] << ',' << static_cast<double>(hold) / static_cast<double>(result.points.size()) << '\n';
  }
  std::cout << "q_hat," << result.q_hat << '\n';
  return 0;
}

int run_synth(const std::string& descriptor, const std::string& out) {
  BenchConfig config;
  config.dataset = descriptor.rfind("synth:", 0) == 0 ? descriptor : "synth:" + descriptor;
  const auto loaded = resolve_dataset(config);
  write_feature_csv(loaded.data, out);
  std::cerr << loaded.data.provenance << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse representation classification benchmarks"};
  app.require_subcommand(1);

  DataOptions bench_data;
  std::string config_path, out_dir = ".", emit = "json,csv,svg";
  std::optional<std::string> bench_solvers;
  std::optional<Index> bench_sparsity, replicates;
  std::optional<std::uint64_t> bench_seed;
  std::optional<unsigned> threads;
  bool no_baselines = false;
  auto* bench = app.add_subcommand("bench", "run the Monte Carlo hold-out benchmark");
  bench->add_option("--config", config_path, "key = value config file");
  add_data_options(bench, bench_data, false);
  bench->add_option("--solver", bench_solvers, "comma list of omp, homotopy, marginal, full");
  bench->add_option("--sparsity-max", bench_sparsity)->check(CLI::PositiveNumber);
  bench->add_option("--replicates", replicates)->check(CLI::PositiveNumber);
  bench->add_option("--seed", bench_seed);
  bench->add_option("--threads", threads)->check(CLI::PositiveNumber);
  bench->add_flag("--no-baselines", no_baselines);
  bench->add_option("--out-dir", out_dir);
  bench->add_option("--emit", emit, "comma list of json, csv, svg");

  DataOptions classify_data;
  std::string classify_solver = "omp";
  Index classify_sparsity = 10;
  std::uint64_t classify_seed = 0;
  double classify_fraction = 0.5;
  auto* classify = app.add_subcommand("classify", "classify a hold-out split and print decisions");
  add_data_options(classify, classify_data, true);
  classify->add_option("--solver", classify_solver);
  classify->add_option("--sparsity-max", classify_sparsity, "sparsity level s")->check(CLI::PositiveNumber);
  classify->add_option("--seed", classify_seed);
  classify->add_option("--split-fraction", classify_fraction);

  DataOptions diagnose_data;
  std::vector<double> c_grid{10, 20, 30, 40, 50, 60, 70, 80};
  Index diagnose_sparsity = 1, samples = 200;
  std::uint64_t diagnose_seed = 0;
  double diagnose_fraction = 0.5;
  std::string mode = "nearest";
  auto* diagnose = app.add_subcommand("diagnose", "scan the principal angle condition");
  add_data_options(diagnose, diagnose_data, true);
  diagnose->add_option("--c", c_grid, "thresholds in degrees")->delimiter(',');
  diagnose->add_option("--sparsity-max", diagnose_sparsity, "subset size s")->check(CLI::PositiveNumber);
  diagnose->add_option("--samples", samples)->check(CLI::PositiveNumber);
  diagnose->add_option("--seed", diagnose_seed);
  diagnose->add_option("--split-fraction", diagnose_fraction);
  diagnose->add_option("--mode", mode)->check(CLI::IsMember({"nearest", "strict", "extended"}));

  std::string synth_descriptor, synth_out;
  auto* synth = app.add_subcommand("synth", "write generated data as FeatureCsv");
  synth->add_option("--dataset", synth_descriptor, "cone:K=..,m=..,within=..,between=..,n=..,seed=.. or subspace:..")
      ->required();
  synth->add_option("--out", synth_out)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*bench) {
      return run_bench(config_path, bench_data, bench_solvers, bench_sparsity, replicates, bench_seed, threads,
                       no_baselines, out_dir, emit);
    }
    if (*classify) return run_classify(classify_data, classify_solver, classify_sparsity, classify_seed, classify_fraction);
    if (*diagnose) {
      return run_diagnose(diagnose_data, c_grid, diagnose_sparsity, samples, diagnose_seed, diagnose_fraction, mode);
    }
    if (*synth) return run_synth(synth_descriptor, synth_out);
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
