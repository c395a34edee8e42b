#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bpsim/param_function.hpp"
#include "bpsim/samplers.hpp"
#include "json.hpp"

namespace bpsim {

std::vector<double> default_grid();  // 0.1, 0.2, ..., 1.0

struct BenchConfig {
  Algorithm algorithm = Algorithm::new_vague;
  BetaProcessParams params = BetaProcessParams::reference_experiment();
  SamplerSettings settings;
  std::size_t replications = 3000;
  std::vector<double> grid = default_grid();
  std::uint64_t seed = 1;
  std::size_t workers = 1;

  /// Throws ConfigError on R < 2, workers < 1, or a grid that is empty,
  /// unsorted or outside [0, t0].
  void validate() const;
};

struct BenchResult {
  Algorithm algorithm;
  std::string parameters;  // e.g. "n=200"
  SamplerSettings settings;
  double max_mean_error;
  double max_sd_error;
  double wall_time_seconds;
  std::uint64_t seed;
  std::size_t replications;

  std::vector<double> grid;
  std::vector<double> mean;
  std::vector<double> sd;
  std::vector<double> exact_mean;
  std::vector<double> exact_sd;
};

/// E[A(t)] = A0(t).
double exact_mean(const BetaProcessParams& p, double t);

/// sqrt(int_0^t dA0 / (c + 1)).
double hjort_sd(const BetaProcessParams& p, double t);

/// The s.d. baseline of the benchmark: sqrt(t / 3) for the reference
/// experiment, hjort_sd otherwise.
double exact_sd(const BetaProcessParams& p, double t);

/// Replication r draws from RngStream(seed, r). Values are reduced in
/// replication order, so the statistics do not depend on `workers`.
/// A failing replication aborts the run with a SamplerError carrying r.
BenchResult run_benchmark(const BenchConfig& cfg);

enum class TableFormat { csv, markdown };
TableFormat table_format_from_name(std::string_view name);

/// CSV columns: algorithm,parameters,max_mean_error,max_sd_error,
/// time_seconds,replications,seed. Markdown columns: Algorithm | Parameters |
/// max. mean error | max. s.d. error | Time.
std::string emit_table(std::span<const BenchResult> results, TableFormat format);

/// Long format: algorithm,parameters,t,mean,sd,exact_mean,exact_sd.
std::string emit_curves(std::span<const BenchResult> results);

SamplerSettings sampler_settings_from_json(const nlohmann::json& j);

/// One object with optional keys algorithm, params, settings, replications,
/// grid, seed, workers. Missing keys keep their defaults.
BenchConfig bench_config_from_json(const nlohmann::json& j);

/// Expands a document into run configs. A top-level "runs" array lists
/// per-run objects merged over the remaining top-level keys; an
/// "algorithms" array expands to one run per name.
std::vector<BenchConfig> bench_configs_from_json(const nlohmann::json& j);

}  // namespace bpsim
