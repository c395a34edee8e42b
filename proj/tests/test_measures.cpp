#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "bpsim/error.hpp"
#include "bpsim/measure.hpp"
#include "bpsim/param_function.hpp"
#include "test_support.hpp"

using namespace bpsim;

TEST_CASE("distribution_function examples") {
  const AtomicMeasure single({{0.5, 1.0}});
  CHECK(distribution_function(single, 0.4) == 0.0);
  CHECK(distribution_function(single, 0.5) == 1.0);
  const AtomicMeasure two({{0.2, 0.3}, {0.7, 0.4}});
  CHECK(distribution_function(two, 1.0) == doctest::Approx(0.7).epsilon(1e-15));
  CHECK(two.left_limit(0.7) == doctest::Approx(0.3));
  CHECK(distribution_function(AtomicMeasure{}, 0.3) == 0.0);
}

TEST_CASE("atoms are stably sorted and ties kept distinct") {
  const AtomicMeasure m({{0.7, 0.1}, {0.2, 0.2}, {0.7, 0.3}, {0.1, 0.4}});
  REQUIRE(m.size() == 4);
  CHECK(m.atoms()[0] == Atom{0.1, 0.4});
  CHECK(m.atoms()[1] == Atom{0.2, 0.2});
  CHECK(m.atoms()[2] == Atom{0.7, 0.1});
  CHECK(m.atoms()[3] == Atom{0.7, 0.3});
  CHECK(m.total_mass() == doctest::Approx(1.0));
}

TEST_CASE("invalid atoms are rejected") {
  CHECK_THROWS_AS(AtomicMeasure({{0.1, -0.5}}), DomainError);
  CHECK_THROWS_AS(AtomicMeasure({{NAN, 0.5}}), DomainError);
  CHECK_THROWS_AS(AtomicMeasure({{0.1, INFINITY}}), DomainError);
}

TEST_CASE("distribution function is nondecreasing and right-continuous") {
  RngStream rng(17, 0);
  for (int rep = 0; rep < 200; ++rep) {
    std::vector<Atom> atoms(1 + rep % 15);
    for (auto& a : atoms) a = {rng.uniform(), rng.uniform()};
    const AtomicMeasure m(atoms);
    double prev = 0.0;
    for (int g = 0; g <= 200; ++g) {
      const double t = g / 200.0;
      const double v = m.distribution(t);
      REQUIRE(v >= prev);
      prev = v;
    }
    for (const auto& a : m.atoms()) {
      CHECK(m.distribution(a.location) == m.distribution(std::nextafter(a.location, 2.0)));
    }
    const std::vector<double> grid{0.1, 0.5, 0.9};
    const auto on = m.distribution_on(grid);
    for (std::size_t i = 0; i < grid.size(); ++i) CHECK(on[i] == m.distribution(grid[i]));
  }
}

TEST_CASE("base locations: analytic inverse for A0 = t^2") {
  const BetaProcessParams p(ParamFunction::constant(1.0), ParamFunction::power(1.0, 2.0), 1.0);
  for (double u : {0.01, 0.25, 0.5, 0.81}) {
    CHECK(base_location_from_uniform(p, u) == doctest::Approx(std::sqrt(u)).epsilon(1e-14));
  }
}

TEST_CASE("base locations: numeric inverse for A0 = 1 - exp(-t), t0 = 2") {
  const BetaProcessParams p(ParamFunction::constant(1.0), ParamFunction::exp_cdf(1.0, 1.0), 2.0);
  const double total = 1.0 - std::exp(-2.0);
  const double oracle =
      testing::bisect([&](double x) { return (1.0 - std::exp(-x)) / total - 0.5; }, 0.0, 2.0);
  CHECK(oracle == doctest::Approx(0.5662).epsilon(1e-4));
  CHECK(std::abs(base_location_from_uniform(p, 0.5) - oracle) < 1e-11);
}

TEST_CASE("base locations: numeric inverse through piecewise-linear A0") {
  const BetaProcessParams p(ParamFunction::constant(1.0),
                            ParamFunction(Family::piecewise_linear, {0.0, 0.0, 0.5, 0.1, 1.0, 1.0}),
                            1.0);
  // 10% of the mass on [0, 0.5], 90% on [0.5, 1].
  CHECK(base_location_from_uniform(p, 0.05) == doctest::Approx(0.25).epsilon(1e-10));
  CHECK(base_location_from_uniform(p, 0.55) == doctest::Approx(0.75).epsilon(1e-10));
}

TEST_CASE("sample_base_locations with A0 = t is uniform (KS at 0.001)") {
  const auto p = testing::table1_params();
  RngStream rng(2024, 0);
  const auto xs = sample_base_locations(p, 10000, rng);
  for (double x : xs) {
    REQUIRE(x >= 0.0);
    REQUIRE(x <= 1.0);
  }
  CHECK(testing::ks_statistic(xs, [](double x) { return x; }) < testing::ks_critical_001(xs.size()));
  CHECK_THROWS_AS(sample_base_locations(p, 0, rng), DomainError);
}

TEST_CASE("gamma arrivals") {
  const std::vector<double> e{1.0, 1.0, 1.0};
  const auto g = arrivals_from_exponentials(e);
  CHECK(g == std::vector<double>{1.0, 2.0, 3.0});

  RngStream rng(5, 0);
  const auto arrivals = gamma_arrivals(10000, rng);
  std::vector<double> increments(arrivals.size());
  for (std::size_t i = 0; i < arrivals.size(); ++i) {
    if (i > 0) REQUIRE(arrivals[i] > arrivals[i - 1]);
    increments[i] = arrivals[i] - (i == 0 ? 0.0 : arrivals[i - 1]);
  }
  CHECK(arrivals[0] > 0.0);
  CHECK(testing::ks_statistic(increments, [](double x) { return 1.0 - std::exp(-x); }) <
        testing::ks_critical_001(increments.size()));
}

TEST_CASE("Gamma_n / n concentrates at 1") {
  double s = 0.0;
  const int reps = 10000;
  for (int r = 0; r < reps; ++r) {
    RngStream rng(77, static_cast<std::uint64_t>(r));
    s += gamma_arrivals(100, rng).back() / 100.0;
  }
  CHECK(std::abs(s / reps - 1.0) < 0.01);
}

TEST_CASE("parameter functions and their JSON form") {
  const auto c = ParamFunction::exp_decay(2.0, 1.0);
  CHECK(c(1.0) == doctest::Approx(2.0 * std::exp(-1.0)));
  nlohmann::json j = c;
  CHECK(j["family"] == "exp_decay");
  CHECK(param_function_from_json(j) == c);
  CHECK_THROWS_AS(family_from_name("cubic"), ConfigError);
  CHECK_THROWS_AS(param_function_from_json(nlohmann::json{{"family", "linear"}, {"params", {1, 2}}}),
                  ConfigError);

  const auto p = testing::table1_params();
  CHECK(p.is_reference_experiment());
  CHECK(p.A0_total() == 1.0);
  nlohmann::json pj = p;
  const auto back = beta_process_params_from_json(pj);
  CHECK(back.is_reference_experiment());
}

TEST_CASE("beta process parameter validation") {
  CHECK_THROWS_AS(BetaProcessParams(ParamFunction::constant(-1.0), ParamFunction::linear(1.0), 1.0),
                  DomainError);
  CHECK_THROWS_AS(BetaProcessParams(ParamFunction::constant(1.0), ParamFunction::linear(-1.0), 1.0),
                  DomainError);
  CHECK_THROWS_AS(BetaProcessParams(ParamFunction::constant(1.0), ParamFunction::linear(1.0), 0.0),
                  DomainError);
  CHECK_THROWS_AS(BetaProcessParams(ParamFunction::constant(1.0), ParamFunction::constant(1.0), 1.0),
                  DomainError);
  CHECK_THROWS_AS(beta_process_params_from_json(nlohmann::json{{"t0", 1.0}}), ConfigError);
}

TEST_CASE("integrate_hazard splits at kinks") {
  const BetaProcessParams p(ParamFunction::constant(1.0),
                            ParamFunction(Family::piecewise_linear, {0.0, 0.0, 0.5, 0.1, 1.0, 1.0}),
                            1.0);
  CHECK(p.integrate_hazard([](double) { return 1.0; }, 0.0, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(p.integrate_hazard([](double z) { return z; }, 0.0, 1.0) ==
        doctest::Approx(0.2 * 0.125 + 1.8 * 0.375).epsilon(1e-10));
}
