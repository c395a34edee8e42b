#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "bpsim/error.hpp"
#include "bpsim/metrics.hpp"
#include "bpsim/rng.hpp"
#include "test_support.hpp"

using namespace bpsim;

namespace {

AtomicMeasure random_measure(RngStream& rng, int max_atoms = 6) {
  const int k = 1 + static_cast<int>(rng.uniform() * max_atoms);
  std::vector<Atom> atoms(k);
  for (auto& a : atoms) a = {rng.uniform(), rng.uniform()};
  return AtomicMeasure(atoms);
}

}  // namespace

TEST_CASE("levy distance examples") {
  const StepFunction unit_at_zero({{0.0, 1.0}});
  const StepFunction zero;
  CHECK(levy_distance(unit_at_zero, unit_at_zero) == 0.0);
  CHECK(levy_distance(unit_at_zero, zero) == doctest::Approx(1.0).epsilon(1e-9));
  for (double a : {0.05, 0.3, 0.77}) {
    const StepFunction shifted({{a, 1.0}});
    CHECK(levy_distance(unit_at_zero, shifted) == doctest::Approx(a).epsilon(1e-8));
    CHECK(std::abs(testing::brute_force_levy(unit_at_zero, shifted) - a) <= 1e-6);
  }
}

TEST_CASE("levy distance matches the brute-force h grid on two-atom cases") {
  RngStream rng(71, 0);
  for (int i = 0; i < 100; ++i) {
    const StepFunction f1 = StepFunction::from_measure(
        AtomicMeasure({{rng.uniform(), rng.uniform()}, {rng.uniform(), rng.uniform()}}));
    const StepFunction f2 = StepFunction::from_measure(
        AtomicMeasure({{rng.uniform(), rng.uniform()}, {rng.uniform(), rng.uniform()}}));
    CHECK(std::abs(levy_distance(f1, f2) - testing::brute_force_levy(f1, f2)) <= 1e-6);
  }
}

TEST_CASE("levy distance is a metric on random step functions") {
  RngStream rng(72, 0);
  for (int i = 0; i < 1000; ++i) {
    const auto a = StepFunction::from_measure(random_measure(rng));
    const auto b = StepFunction::from_measure(random_measure(rng));
    const auto c = StepFunction::from_measure(random_measure(rng));
    const double ab = levy_distance(a, b), ba = levy_distance(b, a);
    const double bc = levy_distance(b, c), ac = levy_distance(a, c);
    CHECK(levy_distance(a, a) == 0.0);
    CHECK(ab > 0.0);
    CHECK(std::abs(ab - ba) <= 1e-9);
    CHECK(ab + bc - ac >= -1e-8);
  }
}

TEST_CASE("step function construction") {
  CHECK_THROWS_AS(StepFunction({{0.5, 1.0}, {0.2, 2.0}}), DomainError);
  CHECK_THROWS_AS(StepFunction({{0.2, 1.0}, {0.5, 0.5}}), DomainError);
  const std::vector<Atom> jumps{{0.1, 0.2}, {0.1, 0.3}, {0.4, 0.0}, {0.6, 0.5}};
  const auto f = StepFunction::from_jumps(jumps);
  REQUIRE(f.breakpoints().size() == 2);
  CHECK(f(0.1) == doctest::Approx(0.5));
  CHECK(f(0.09) == 0.0);
  CHECK(f.total() == doctest::Approx(1.0));
}

TEST_CASE("truncation ramp") {
  const TruncationLadder ladder({0.2, 0.4, 0.8});
  CHECK(truncation_ramp(ladder, 2, 0.1) == 1.0);
  CHECK(truncation_ramp(ladder, 2, 0.4) == 0.0);
  CHECK(truncation_ramp(ladder, 2, 0.9) == 0.0);
  CHECK(truncation_ramp(ladder, 2, 0.3) == doctest::Approx(0.5));
  CHECK(truncation_ramp(ladder, 3, 0.6) == doctest::Approx(0.5));
  CHECK(truncation_ramp(ladder, 1, 0.1) == doctest::Approx(0.5));
  CHECK(truncation_ramp(ladder, 1, 0.0) == 1.0);
  CHECK_THROWS_AS(truncation_ramp(ladder, 0, 0.1), DomainError);
  CHECK_THROWS_AS(truncation_ramp(ladder, 4, 0.1), DomainError);
  CHECK_THROWS_AS(TruncationLadder({0.2, 0.2, 0.5}), DomainError);
  const TruncationLadder bad_edge({0.2, 0.5}, 0.2);
  CHECK_THROWS_AS(truncation_ramp(bad_edge, 1, 0.1), DomainError);
}

TEST_CASE("truncate_measure") {
  const TruncationLadder ladder({0.2, 0.4, 0.8});
  const AtomicMeasure below({{0.05, 0.3}, {0.15, 0.2}});
  const auto t3 = truncate_measure(below, ladder, 3);
  const auto full = StepFunction::from_measure(below);
  for (double x : {0.0, 0.05, 0.1, 0.15, 1.0}) CHECK(t3(x) == full(x));

  CHECK(truncate_measure(AtomicMeasure({{0.4, 0.7}}), ladder, 2).total() == 0.0);
  CHECK(truncate_measure(AtomicMeasure({{0.3, 0.6}}), ladder, 2).total() == doctest::Approx(0.3));

  RngStream rng(73, 0);
  const auto m = random_measure(rng, 10);
  for (std::size_t k = 1; k <= 3; ++k) {
    const auto tk = truncate_measure(m, ladder, k);
    CHECK(tk(ladder.theta(k)) == tk(2.0));
    CHECK(integrate_test_function(m, [&](double x) { return truncation_ramp(ladder, k, x); }) ==
          doctest::Approx(tk.total()).epsilon(1e-14));
  }
}

TEST_CASE("integrate_test_function") {
  const AtomicMeasure m({{0.3, 0.25}});
  CHECK(integrate_test_function(m, [](double) { return 0.0; }) == 0.0);
  CHECK(integrate_test_function(m, [](double x) { return std::max(0.0, 1.0 - std::abs(x - 0.3) / 0.1); }) ==
        doctest::Approx(0.25));
}

TEST_CASE("metric d examples") {
  const TruncationLadder ladder({0.2, 0.4, 0.6, 0.8});
  RngStream rng(74, 0);
  const auto a = random_measure(rng);
  const auto b = random_measure(rng);

  const auto same = metric_d(a, a, ladder, 4);
  CHECK(same.value == 0.0);
  CHECK(same.tail_bound == 0.0625);

  const auto ab = metric_d(a, b, ladder, 4);
  CHECK(ab.value < 1.0);
  REQUIRE(ab.levy_terms.size() == 4);
  for (std::size_t k = 1; k <= 4; ++k) {
    CHECK(ab.levy_terms[k - 1] / (std::ldexp(1.0, static_cast<int>(k)) * (1 + ab.levy_terms[k - 1])) <=
          std::ldexp(1.0, -static_cast<int>(k)));
  }

  const auto one = metric_d(a, b, ladder, 1);
  const double dl = levy_distance(truncate_measure(a, ladder, 1), truncate_measure(b, ladder, 1));
  CHECK(one.value == doctest::Approx(dl / (2.0 * (1.0 + dl))).epsilon(1e-15));
  CHECK(one.value + one.tail_bound >= ab.value);

  std::vector<Atom> base{{0.1, 0.4}, {0.3, 0.2}};
  std::vector<Atom> extra = base;
  extra.push_back({0.9, 0.7});
  const auto far = metric_d(AtomicMeasure(base), AtomicMeasure(extra), ladder, 4);
  CHECK(far.value == 0.0);
  CHECK(far.tail_bound == 0.0625);

  CHECK_THROWS_AS(metric_d(a, b, ladder, 0), DomainError);
  CHECK_THROWS_AS(metric_d(a, b, ladder, 5), DomainError);
}

TEST_CASE("metric d satisfies the metric axioms") {
  const TruncationLadder ladder({0.15, 0.35, 0.5, 0.7, 0.9});
  RngStream rng(75, 0);
  for (int i = 0; i < 1000; ++i) {
    const auto a = random_measure(rng);
    const auto b = random_measure(rng);
    const auto c = random_measure(rng);
    const double ab = metric_d(a, b, ladder, 5).value;
    CHECK(metric_d(a, a, ladder, 5).value == 0.0);
    CHECK(std::abs(ab - metric_d(b, a, ladder, 5).value) <= 1e-9);
    CHECK(ab + metric_d(b, c, ladder, 5).value - metric_d(a, c, ladder, 5).value >= -1e-8);
  }
}

TEST_CASE("ladder from a base draw is sorted") {
  RngStream rng(76, 1);
  const auto ladder = TruncationLadder::from_base_draw(testing::table1_params(), 8, rng);
  REQUIRE(ladder.size() == 8);
  for (std::size_t k = 2; k <= 8; ++k) CHECK(ladder.theta(k) > ladder.theta(k - 1));
}

TEST_CASE("convergence diagnostic") {
  const auto p = testing::table1_params();
  const std::vector<std::size_t> ns{10, 100, 1000};
  const auto exp = coupled_experiment(p, ns, 10000, 5, 3);
  REQUIRE(exp.approximations.size() == 3);
  const auto rows = convergence_diagnostic(exp.approximations, exp.reference, exp.ladder, 5);
  REQUIRE(rows.size() == 3);
  CHECK(rows[2].metric < rows[0].metric);

  std::vector<IndexedMeasure> with_ref{{7, exp.reference}};
  const auto zero = convergence_diagnostic(with_ref, exp.reference, exp.ladder, 5);
  REQUIRE(zero.size() == 1);
  CHECK(zero[0].metric == 0.0);
  for (double v : zero[0].levy) CHECK(v == 0.0);

  const auto csv = diagnostic_csv(rows);
  CHECK(csv.rfind("n,k,d_L,d,tail_bound\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 15);

  // Coupled runs are reproducible.
  const auto again = coupled_experiment(p, ns, 10000, 5, 3);
  CHECK(again.reference == exp.reference);
  CHECK(again.ladder.thetas() == exp.ladder.thetas());
}
