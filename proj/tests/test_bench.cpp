#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <charconv>
#include <cmath>
#include <sstream>

#include "bpsim/bench.hpp"
#include "bpsim/error.hpp"
#include "test_support.hpp"

using namespace bpsim;

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  bool quoted = false;
  for (char ch : line) {
    if (ch == '"') {
      quoted = !quoted;
    } else if (ch == ',' && !quoted) {
      out.push_back(field);
      field.clear();
    } else {
      field += ch;
    }
  }
  out.push_back(field);
  return out;
}

double parse_double(const std::string& s) {
  double v = 0.0;
  std::from_chars(s.data(), s.data() + s.size(), v);
  return v;
}

BenchConfig small_config(Algorithm alg, std::size_t reps = 40) {
  BenchConfig cfg;
  cfg.algorithm = alg;
  cfg.settings.n = 50;
  cfg.settings.m = 20;
  cfg.settings.epsilon = 0.05;
  cfg.replications = reps;
  cfg.seed = 5;
  return cfg;
}

}  // namespace

TEST_CASE("exact mean") {
  const auto p = testing::table1_params();
  CHECK(exact_mean(p, 0.4) == 0.4);
  CHECK(exact_mean(p, 0.0) == 0.0);
  const BetaProcessParams sq(ParamFunction::constant(1.0), ParamFunction::power(1.0, 2.0), 1.0);
  CHECK(exact_mean(sq, 0.5) == doctest::Approx(0.25));
  CHECK_THROWS_AS(exact_mean(p, 1.5), DomainError);
}

TEST_CASE("exact s.d.") {
  const auto p = testing::table1_params();
  CHECK(exact_sd(p, 0.3) == doctest::Approx(std::sqrt(0.1)).epsilon(1e-15));
  CHECK(exact_sd(p, 0.0) == 0.0);
  const auto two = testing::constant_c_params(2.0);
  CHECK(exact_sd(two, 0.9) == doctest::Approx(std::sqrt(0.3)).epsilon(1e-12));
  CHECK(exact_sd(two, 0.9) == doctest::Approx(0.547722).epsilon(1e-6));
  // General form for the reference experiment: int_0^t dz / (2 e^{-z} + 1)
  // = t + ln((2 + e^{t}) ... ) closed form ln((e^t + 2) / 3).
  CHECK(hjort_sd(p, 1.0) == doctest::Approx(std::sqrt(std::log((std::exp(1.0) + 2.0) / 3.0))).epsilon(1e-10));
}

TEST_CASE("benchmark rejects fewer than two replications and bad grids") {
  auto cfg = small_config(Algorithm::new_vague, 1);
  CHECK_THROWS_AS(run_benchmark(cfg), ConfigError);
  cfg.replications = 10;
  cfg.grid = {0.5, 0.2};
  CHECK_THROWS_AS(run_benchmark(cfg), ConfigError);
  cfg.grid = {0.5, 1.2};
  CHECK_THROWS_AS(run_benchmark(cfg), ConfigError);
  cfg.grid = {};
  CHECK_THROWS_AS(run_benchmark(cfg), ConfigError);
}

TEST_CASE("statistics do not depend on the worker count") {
  for (auto alg : all_algorithms()) {
    auto cfg = small_config(alg, 24);
    cfg.workers = 1;
    const auto one = run_benchmark(cfg);
    cfg.workers = 3;
    const auto three = run_benchmark(cfg);
    CAPTURE(algorithm_name(alg));
    CHECK(one.max_mean_error == three.max_mean_error);
    CHECK(one.max_sd_error == three.max_sd_error);
    CHECK(one.mean == three.mean);
    CHECK(one.sd == three.sd);
  }
}

TEST_CASE("a failing replication aborts with its index") {
  BenchConfig cfg;
  cfg.algorithm = Algorithm::damien_laud_smith;
  cfg.params = testing::constant_c_params(1e15);
  cfg.settings.n = 10;
  cfg.settings.m = 4;
  cfg.replications = 5;
  cfg.workers = 2;
  try {
    run_benchmark(cfg);
    FAIL("expected a sampler error");
  } catch (const SamplerError& e) {
    CHECK(e.index() == 0);
  }
}

TEST_CASE("new sampler mean curve lies within 4 standard errors") {
  BenchConfig cfg;
  cfg.algorithm = Algorithm::new_vague;
  cfg.replications = 3000;
  cfg.seed = 11;
  const auto r = run_benchmark(cfg);
  for (std::size_t g = 0; g < r.grid.size(); ++g) {
    const double se = r.sd[g] / std::sqrt(3000.0);
    CAPTURE(r.grid[g]);
    CHECK(std::abs(r.mean[g] - r.grid[g]) <= 4.0 * se);
  }
}

TEST_CASE("new sampler error trend from n = 50 to n = 1000") {
  double small = 0.0, large = 0.0;
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    BenchConfig cfg;
    cfg.algorithm = Algorithm::new_vague;
    cfg.replications = 1000;
    cfg.seed = seed;
    cfg.settings.n = 50;
    small += run_benchmark(cfg).max_mean_error;
    cfg.settings.n = 1000;
    large += run_benchmark(cfg).max_mean_error;
  }
  CHECK(large <= small);
}

TEST_CASE("emit_table") {
  const auto r = run_benchmark(small_config(Algorithm::new_vague, 10));
  const std::vector<BenchResult> one{r};
  const auto csv = emit_table(one, TableFormat::csv);
  std::istringstream in(csv);
  std::string header, row, extra;
  std::getline(in, header);
  std::getline(in, row);
  CHECK(header == "algorithm,parameters,max_mean_error,max_sd_error,time_seconds,replications,seed");
  CHECK_FALSE(std::getline(in, extra));
  const auto fields = split(row);
  REQUIRE(fields.size() == 7);
  CHECK(fields[0] == "New");
  CHECK(fields[1] == "n=50");
  CHECK(parse_double(fields[2]) == r.max_mean_error);
  CHECK(parse_double(fields[3]) == r.max_sd_error);
  CHECK(parse_double(fields[4]) == r.wall_time_seconds);

  std::vector<BenchResult> six;
  for (auto alg : all_algorithms()) six.push_back(run_benchmark(small_config(alg, 4)));
  const auto md = emit_table(six, TableFormat::markdown);
  CHECK(md.rfind("| Algorithm | Parameters | max. mean error | max. s.d. error | Time |", 0) == 0);
  CHECK(std::count(md.begin(), md.end(), '\n') == 8);
  for (const char* label : {"New", "FK", "DLS", "WI", "LK", "Lee"}) {
    CHECK(md.find(std::string("| ") + label + " |") != std::string::npos);
  }
  const auto lee = emit_table(std::span(six).subspan(5, 1), TableFormat::csv);
  CHECK(lee.find("\"n=50, ε=0.05\"") != std::string::npos);

  CHECK_THROWS_AS(emit_table({}, TableFormat::csv), ConfigError);
  CHECK(table_format_from_name("markdown") == TableFormat::markdown);
  CHECK_THROWS_AS(table_format_from_name("xml"), ConfigError);

  const auto curves = emit_curves(one);
  CHECK(std::count(curves.begin(), curves.end(), '\n') == 11);
}

TEST_CASE("bench configs from JSON") {
  const auto j = nlohmann::json::parse(R"({
    "params": {"c": {"family": "exp_decay", "params": [2, 1]},
               "A0": {"family": "linear", "params": [1]}, "t0": 1},
    "settings": {"n": 200},
    "replications": 10,
    "seed": 4,
    "runs": [{"algorithm": "new"},
             {"algorithm": "lee", "settings": {"epsilon": 0.05}}]
  })");
  const auto cfgs = bench_configs_from_json(j);
  REQUIRE(cfgs.size() == 2);
  CHECK(cfgs[0].params.is_reference_experiment());
  CHECK(cfgs[1].algorithm == Algorithm::lee);
  CHECK(cfgs[1].settings.n == 200);
  CHECK(cfgs[1].settings.epsilon == 0.05);
  CHECK(cfgs[1].replications == 10);
  CHECK(cfgs[1].grid == default_grid());

  const auto all = bench_configs_from_json(nlohmann::json::parse(R"({"algorithms": ["fk", "wi"]})"));
  REQUIRE(all.size() == 2);
  CHECK(all[1].algorithm == Algorithm::wolpert_ickstadt);

  CHECK_THROWS_AS(bench_configs_from_json(nlohmann::json::parse(R"({"algorithm": "nope"})")), ConfigError);
  CHECK_THROWS_AS(bench_configs_from_json(nlohmann::json::parse(R"({"replications": "many"})")), ConfigError);
  CHECK_THROWS_AS(bench_configs_from_json(nlohmann::json::parse(R"({"settings": {"epsilon": 2}})")), ConfigError);
}
