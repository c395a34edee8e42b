#include "bpsim/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "bpsim/bench.hpp"
#include "bpsim/error.hpp"
#include "bpsim/format.hpp"
#include "bpsim/metrics.hpp"
#include "bpsim/samplers.hpp"

namespace bpsim {

void apply_override(nlohmann::json& doc, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw ConfigError("--set expects KEY=VALUE, got '" + std::string(assignment) + "'");
  }
  const std::string key(assignment.substr(0, eq));
  const std::string raw(assignment.substr(eq + 1));

  nlohmann::json value = nlohmann::json::parse(raw, nullptr, false);
  if (value.is_discarded()) value = raw;

  nlohmann::json* node = &doc;
  std::size_t start = 0;
  while (true) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot == std::string::npos ? dot : dot - start);
    if (part.empty()) throw ConfigError("--set: empty path component in '" + key + "'");
    if (node->is_null()) *node = nlohmann::json::object();
    if (!node->is_object()) {
      throw ConfigError("--set: '" + key + "' descends into a non-object");
    }
    if (dot == std::string::npos) {
      (*node)[part] = std::move(value);
      return;
    }
    node = &(*node)[part];
    start = dot + 1;
  }
}

namespace {

struct Invocation {
  std::string config_path;
  std::string out_path = "-";
  std::string curves_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> workers;
  std::vector<std::string> overrides;
  std::string format = "csv";
};

nlohmann::json load_document(const Invocation& inv) {
  nlohmann::json doc = nlohmann::json::object();
  if (!inv.config_path.empty()) {
    std::ifstream in(inv.config_path);
    if (!in) throw ConfigError("cannot open config file '" + inv.config_path + "'");
    doc = nlohmann::json::parse(in, nullptr, false);
    if (doc.is_discarded()) {
      throw ConfigError("config file '" + inv.config_path + "' is not valid JSON");
    }
    if (!doc.is_object()) throw ConfigError("config file must hold a JSON object");
  }
  if (inv.seed) doc["seed"] = *inv.seed;
  if (inv.workers) doc["workers"] = *inv.workers;
  for (const auto& o : inv.overrides) apply_override(doc, o);
  return doc;
}

template <typename T>
T get_or(const nlohmann::json& doc, const char* key, T fallback) {
  if (!doc.contains(key)) return fallback;
  try {
    return doc.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string(key) + ": " + e.what());
  }
}

void write_output(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write output file '" + path + "'");
  f << text;
}

void append_path(std::ostringstream& os, std::size_t path_id,
                 std::optional<std::size_t> coordinate, const AtomicMeasure& m) {
  double cumulative = 0.0;
  for (const auto& a : m.atoms()) {
    cumulative += a.weight;
    os << path_id << ',';
    if (coordinate) os << *coordinate << ',';
    os << format_double(a.location) << ',' << format_double(a.weight) << ','
       << format_double(cumulative) << '\n';
  }
}

// Configuration problems surface as exit 2 before any sampling starts.
int cmd_sample(const Invocation& inv, std::ostream& out) {
  const auto doc = load_document(inv);
  const Algorithm algorithm = algorithm_from_name(get_or<std::string>(doc, "algorithm", "new"));
  const BetaProcessParams params = doc.contains("params")
                                       ? beta_process_params_from_json(doc.at("params"))
                                       : BetaProcessParams::reference_experiment();
  const SamplerSettings settings =
      sampler_settings_from_json(doc.contains("settings") ? doc.at("settings") : nlohmann::json());
  const auto paths = get_or<std::size_t>(doc, "paths", 1);
  const auto seed = get_or<std::uint64_t>(doc, "seed", 1);
  if (paths < 1) throw ConfigError("paths must be >= 1");
  const bool dirichlet = !settings.dirichlet_gammas.empty();
  if (dirichlet && algorithm != Algorithm::new_vague) {
    throw ConfigError("settings.dirichlet_gammas requires algorithm 'new'");
  }
  const Sampler sampler(algorithm, params, settings);

  std::ostringstream os;
  os << (dirichlet ? "path_id,coordinate,location,weight,cumulative\n"
                   : "path_id,location,weight,cumulative\n");
  for (std::size_t path = 0; path < paths; ++path) {
    RngStream rng(seed, path);
    if (dirichlet) {
      const auto parts =
          sample_beta_dirichlet(params, settings.dirichlet_gammas, settings.n, rng);
      for (std::size_t j = 0; j < parts.size(); ++j) append_path(os, path, j + 1, parts[j]);
    } else {
      append_path(os, path, std::nullopt, sampler(rng));
    }
  }
  write_output(inv.out_path, os.str(), out);
  return exit_ok;
}

int cmd_bench(const Invocation& inv, std::ostream& out, std::ostream& err) {
  const auto doc = load_document(inv);
  const auto format = table_format_from_name(inv.format);
  const auto configs = bench_configs_from_json(doc);
  std::vector<BenchResult> results;
  for (const auto& cfg : configs) {
    results.push_back(run_benchmark(cfg));
    err << algorithm_label(cfg.algorithm) << " (" << results.back().parameters
        << "): " << format_double(results.back().wall_time_seconds) << " s\n";
  }
  write_output(inv.out_path, emit_table(results, format), out);
  if (!inv.curves_path.empty()) write_output(inv.curves_path, emit_curves(results), out);
  return exit_ok;
}

int cmd_diagnose(const Invocation& inv, std::ostream& out) {
  const auto doc = load_document(inv);
  const BetaProcessParams params = doc.contains("params")
                                       ? beta_process_params_from_json(doc.at("params"))
                                       : BetaProcessParams::reference_experiment();
  const auto n_values =
      get_or<std::vector<std::size_t>>(doc, "n_values", {10, 100, 1000});
  const auto K = get_or<std::size_t>(doc, "K", 5);
  const auto seed = get_or<std::uint64_t>(doc, "seed", 1);
  if (n_values.empty()) throw ConfigError("n_values must not be empty");
  for (std::size_t n : n_values) {
    if (n < 2) throw ConfigError("every entry of n_values must be >= 2");
  }
  if (K < 1) throw ConfigError("K must be >= 1");
  const std::size_t largest = *std::max_element(n_values.begin(), n_values.end());
  const auto reference_n = get_or<std::size_t>(doc, "reference_n", 10 * largest);
  if (reference_n < 1) throw ConfigError("reference_n must be >= 1");

  const auto exp = coupled_experiment(params, n_values, reference_n, K, seed);
  const auto rows = convergence_diagnostic(exp.approximations, exp.reference, exp.ladder, K);
  write_output(inv.out_path, diagnostic_csv(rows), out);
  return exit_ok;
}

std::string help_footer() {
  std::string s = "Algorithms:";
  for (auto a : all_algorithms()) s += " " + std::string(algorithm_name(a));
  s += "\nParameter families:";
  for (const auto& f : family_names()) s += " " + f;
  s += "\nExit codes: 0 ok, 2 config/usage error, 3 numeric failure.\n";
  return s;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Beta process sampling, benchmarking and convergence diagnostics", "bpsim"};
  app.footer(help_footer());
  app.require_subcommand(1);
  app.fallthrough();

  Invocation inv;
  app.add_option("--config", inv.config_path, "JSON config file");
  app.add_option("--out", inv.out_path, "Output file (default: stdout)");
  app.add_option("--seed", inv.seed, "Master seed");
  app.add_option("--set", inv.overrides, "Override KEY=VALUE on a dotted path (repeatable)");
  app.add_option("--format", inv.format, "Table format for bench")
      ->check(CLI::IsMember({"csv", "markdown"}));
  app.add_option("--workers", inv.workers, "Worker threads for bench")
      ->check(CLI::PositiveNumber);

  auto* sample = app.add_subcommand("sample", "Write sample paths as CSV");
  auto* bench = app.add_subcommand("bench", "Run the Monte Carlo benchmark");
  bench->add_option("--curves", inv.curves_path, "Also write mean/s.d. curves CSV");
  auto* diagnose = app.add_subcommand("diagnose", "Coupled convergence diagnostic");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? exit_ok : exit_config;
  }

  try {
    if (sample->parsed()) return cmd_sample(inv, out);
    if (bench->parsed()) return cmd_bench(inv, out, err);
    if (diagnose->parsed()) return cmd_diagnose(inv, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return exit_config;
  } catch (const SamplerError& e) {
    err << "sampler error: " << e.what() << '\n';
    return exit_numeric;
  } catch (const std::domain_error& e) {
    err << "invalid parameters: " << e.what() << '\n';
    return exit_config;
  } catch (const std::exception& e) {
    err << "numeric failure: " << e.what() << '\n';
    return exit_numeric;
  }
  return exit_config;
}

}  // namespace bpsim
