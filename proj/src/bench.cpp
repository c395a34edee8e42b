#include "bpsim/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include "bpsim/error.hpp"
#include "bpsim/format.hpp"

namespace bpsim {

namespace {

// Neumaier summation.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

void check_grid_point(const BetaProcessParams& p, double t) {
  if (!(t >= 0.0 && t <= p.t0())) {
    throw DomainError("grid point " + format_double(t) + " outside [0, t0]");
  }
}

}  // namespace

std::vector<double> default_grid() {
  std::vector<double> grid;
  for (int i = 1; i <= 10; ++i) grid.push_back(i / 10.0);
  return grid;
}

void BenchConfig::validate() const {
  settings.validate();
  if (replications < 2) {
    throw ConfigError("replications must be >= 2 (sample s.d. uses divisor R-1)");
  }
  if (workers < 1) throw ConfigError("workers must be >= 1");
  if (grid.empty()) throw ConfigError("grid must not be empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] >= 0.0 && grid[i] <= params.t0())) {
      throw ConfigError("grid point " + format_double(grid[i]) + " outside [0, t0]");
    }
    if (i > 0 && !(grid[i] > grid[i - 1])) {
      throw ConfigError("grid must be strictly increasing");
    }
  }
}

double exact_mean(const BetaProcessParams& p, double t) {
  check_grid_point(p, t);
  return p.hazard(t);
}

double hjort_sd(const BetaProcessParams& p, double t) {
  check_grid_point(p, t);
  if (t == 0.0) return 0.0;
  const double var =
      p.integrate_hazard([&p](double z) { return 1.0 / (p.concentration(z) + 1.0); },
                         0.0, t);
  return std::sqrt(std::max(var, 0.0));
}

double exact_sd(const BetaProcessParams& p, double t) {
  check_grid_point(p, t);
  if (p.is_reference_experiment()) return std::sqrt(t / 3.0);
  return hjort_sd(p, t);
}

BenchResult run_benchmark(const BenchConfig& cfg) {
  cfg.validate();
  const Sampler sampler(cfg.algorithm, cfg.params, cfg.settings);
  const std::size_t R = cfg.replications;
  const std::size_t G = cfg.grid.size();
  std::vector<double> values(R * G);

  std::mutex failure_mutex;
  std::size_t failed_rep = R;
  std::string failure_message;

  auto worker = [&](std::size_t first, std::size_t stride) {
    for (std::size_t r = first; r < R; r += stride) {
      try {
        RngStream rng(cfg.seed, r);
        const auto path = sampler(rng);
        const auto row = path.distribution_on(cfg.grid);
        std::copy(row.begin(), row.end(), values.begin() + static_cast<std::ptrdiff_t>(r * G));
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (r < failed_rep) {
          failed_rep = r;
          failure_message = e.what();
        }
        return;
      }
    }
  };

  const auto start = std::chrono::steady_clock::now();
  const std::size_t W = std::min(cfg.workers, R);
  if (W == 1) {
    worker(0, 1);
  } else {
    std::vector<std::thread> threads;
    threads.reserve(W);
    for (std::size_t w = 0; w < W; ++w) threads.emplace_back(worker, w, W);
    for (auto& t : threads) t.join();
  }
  const auto stop = std::chrono::steady_clock::now();

  if (failed_rep < R) {
    throw SamplerError(std::string(algorithm_name(cfg.algorithm)) +
                           " failed in replication: " + failure_message,
                       failed_rep);
  }

  BenchResult res{cfg.algorithm,
                  sampler.parameter_label(),
                  cfg.settings,
                  0.0,
                  0.0,
                  std::chrono::duration<double>(stop - start).count(),
                  cfg.seed,
                  R,
                  cfg.grid,
                  std::vector<double>(G),
                  std::vector<double>(G),
                  std::vector<double>(G),
                  std::vector<double>(G)};

  for (std::size_t g = 0; g < G; ++g) {
    CompensatedSum sum;
    for (std::size_t r = 0; r < R; ++r) sum.add(values[r * G + g]);
    const double mean = sum.value() / static_cast<double>(R);
    CompensatedSum sq;
    for (std::size_t r = 0; r < R; ++r) {
      const double d = values[r * G + g] - mean;
      sq.add(d * d);
    }
    const double sd = std::sqrt(sq.value() / static_cast<double>(R - 1));
    res.mean[g] = mean;
    res.sd[g] = sd;
    res.exact_mean[g] = exact_mean(cfg.params, cfg.grid[g]);
    res.exact_sd[g] = exact_sd(cfg.params, cfg.grid[g]);
    res.max_mean_error = std::max(res.max_mean_error, std::abs(mean - res.exact_mean[g]));
    res.max_sd_error = std::max(res.max_sd_error, std::abs(sd - res.exact_sd[g]));
  }
  return res;
}

TableFormat table_format_from_name(std::string_view name) {
  if (name == "csv") return TableFormat::csv;
  if (name == "markdown" || name == "md") return TableFormat::markdown;
  throw ConfigError("unknown format '" + std::string(name) + "' (expected csv or markdown)");
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::string fixed(double v, int digits) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(digits);
  os << v;
  return os.str();
}

}  // namespace

std::string emit_table(std::span<const BenchResult> results, TableFormat format) {
  if (results.empty()) throw ConfigError("emit_table: no results");
  std::ostringstream os;
  if (format == TableFormat::csv) {
    os << "algorithm,parameters,max_mean_error,max_sd_error,time_seconds,replications,seed\n";
    for (const auto& r : results) {
      os << algorithm_label(r.algorithm) << ',' << csv_field(r.parameters) << ','
         << format_double(r.max_mean_error) << ',' << format_double(r.max_sd_error) << ','
         << format_double(r.wall_time_seconds) << ',' << r.replications << ',' << r.seed
         << '\n';
    }
  } else {
    os << "| Algorithm | Parameters | max. mean error | max. s.d. error | Time |\n";
    os << "|---|---|---|---|---|\n";
    for (const auto& r : results) {
      os << "| " << algorithm_label(r.algorithm) << " | " << r.parameters << " | "
         << fixed(r.max_mean_error, 4) << " | " << fixed(r.max_sd_error, 4) << " | "
         << fixed(r.wall_time_seconds, 3) << " s |\n";
    }
  }
  return os.str();
}

std::string emit_curves(std::span<const BenchResult> results) {
  std::ostringstream os;
  os << "algorithm,parameters,t,mean,sd,exact_mean,exact_sd\n";
  for (const auto& r : results) {
    for (std::size_t g = 0; g < r.grid.size(); ++g) {
      os << algorithm_label(r.algorithm) << ',' << csv_field(r.parameters) << ','
         << format_double(r.grid[g]) << ',' << format_double(r.mean[g]) << ','
         << format_double(r.sd[g]) << ',' << format_double(r.exact_mean[g]) << ','
         << format_double(r.exact_sd[g]) << '\n';
    }
  }
  return os.str();
}

SamplerSettings sampler_settings_from_json(const nlohmann::json& j) {
  SamplerSettings s;
  if (j.is_null()) return s;
  if (!j.is_object()) throw ConfigError("settings must be an object");
  try {
    if (j.contains("n")) s.n = j.at("n").get<std::size_t>();
    if (j.contains("m")) s.m = j.at("m").get<std::size_t>();
    if (j.contains("epsilon")) s.epsilon = j.at("epsilon").get<double>();
    if (j.contains("dirichlet_gammas")) {
      for (const auto& g : j.at("dirichlet_gammas")) {
        s.dirichlet_gammas.push_back(param_function_from_json(g));
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("settings: ") + e.what());
  }
  s.validate();
  return s;
}

BenchConfig bench_config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("bench config must be a JSON object");
  BenchConfig cfg;
  try {
    if (j.contains("algorithm")) {
      cfg.algorithm = algorithm_from_name(j.at("algorithm").get<std::string>());
    }
    if (j.contains("params")) cfg.params = beta_process_params_from_json(j.at("params"));
    if (j.contains("settings")) cfg.settings = sampler_settings_from_json(j.at("settings"));
    if (j.contains("replications")) {
      cfg.replications = j.at("replications").get<std::size_t>();
    }
    if (j.contains("grid")) cfg.grid = j.at("grid").get<std::vector<double>>();
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("workers")) cfg.workers = j.at("workers").get<std::size_t>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bench config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

std::vector<BenchConfig> bench_configs_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("bench config must be a JSON object");
  nlohmann::json base = j;
  base.erase("runs");
  base.erase("algorithms");

  std::vector<nlohmann::json> docs;
  if (j.contains("runs")) {
    if (!j.at("runs").is_array() || j.at("runs").empty()) {
      throw ConfigError("runs must be a nonempty array");
    }
    for (const auto& run : j.at("runs")) {
      nlohmann::json merged = base;
      merged.merge_patch(run);
      docs.push_back(std::move(merged));
    }
  } else if (j.contains("algorithms")) {
    if (!j.at("algorithms").is_array() || j.at("algorithms").empty()) {
      throw ConfigError("algorithms must be a nonempty array");
    }
    for (const auto& name : j.at("algorithms")) {
      nlohmann::json merged = base;
      merged["algorithm"] = name;
      docs.push_back(std::move(merged));
    }
  } else {
    docs.push_back(base);
  }

  std::vector<BenchConfig> out;
  out.reserve(docs.size());
  for (const auto& d : docs) out.push_back(bench_config_from_json(d));
  return out;
}

}  // namespace bpsim
