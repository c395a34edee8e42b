#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "bpsim/measure.hpp"
#include "bpsim/param_function.hpp"

namespace bpsim {

struct Breakpoint {
  double location;
  double value;  // cumulative value from this location on
};

/// Right-continuous nondecreasing step function, zero below the first
/// breakpoint.
class StepFunction {
 public:
  StepFunction() = default;
  /// Breakpoints must have strictly increasing locations and nondecreasing,
  /// nonnegative values; throws DomainError otherwise.
  explicit StepFunction(std::vector<Breakpoint> breakpoints);

  static StepFunction from_measure(const AtomicMeasure& m);
  /// Step function from sorted (location, jump) pairs; equal locations are
  /// merged and zero jumps skipped.
  static StepFunction from_jumps(std::span<const Atom> jumps);

  const std::vector<Breakpoint>& breakpoints() const noexcept { return points_; }
  double operator()(double x) const;
  double total() const noexcept { return points_.empty() ? 0.0 : points_.back().value; }

 private:
  std::vector<Breakpoint> points_;
};

/// Levy distance inf{h >= 0 : F1(x-h) - h <= F2(x) <= F1(x+h) + h for all x},
/// by bisection on h down to `tol`.
double levy_distance(const StepFunction& f1, const StepFunction& f2,
                     double tol = 1e-10);

/// Whether h satisfies the Levy band condition, checked exactly at the
/// breakpoints where each one-sided gap is largest.
bool levy_band_holds(const StepFunction& f1, const StepFunction& f2, double h);

/// Sorted, strictly increasing theta_(1) < ... < theta_(K). The first ramp
/// starts at `left_edge`.
class TruncationLadder {
 public:
  TruncationLadder(std::vector<double> thetas, double left_edge = 0.0);

  /// Order statistics of K fresh draws from Pi.
  static TruncationLadder from_base_draw(const BetaProcessParams& p, std::size_t K,
                                         RngStream& rng);

  std::size_t size() const noexcept { return thetas_.size(); }
  const std::vector<double>& thetas() const noexcept { return thetas_; }
  double left_edge() const noexcept { return left_edge_; }
  /// theta_(k), 1-based.
  double theta(std::size_t k) const { return thetas_.at(k - 1); }

 private:
  std::vector<double> thetas_;
  double left_edge_;
};

/// f_k(t): 1 below theta_(k-1), linear down to 0 at theta_(k), 0 beyond.
/// The linear piece is normalized to keep f_k continuous.
double truncation_ramp(const TruncationLadder& ladder, std::size_t k, double t);

/// mu^(k)(t) = int_{-inf}^t f_k(x) mu(dx).
StepFunction truncate_measure(const AtomicMeasure& m, const TruncationLadder& ladder,
                              std::size_t k);

struct MetricValue {
  double value;
  double tail_bound;              // 2^-K bounds the omitted terms
  std::vector<double> levy_terms; // d_L(mu1^(k), mu2^(k)), k = 1..K
};

/// Partial sum over k = 1..K of d_L^(k) / (2^k (1 + d_L^(k))).
MetricValue metric_d(const AtomicMeasure& m1, const AtomicMeasure& m2,
                     const TruncationLadder& ladder, std::size_t K);

/// sum_i w_i f(x_i).
double integrate_test_function(const AtomicMeasure& m,
                               const std::function<double(double)>& f);

struct DiagnosticRow {
  std::size_t n;
  std::vector<double> levy;  // d_L(mu_n^(k), mu^(k)), k = 1..K
  double metric;             // d(mu_n, mu) truncated at K
  double tail_bound;         // 2^-K
};

struct IndexedMeasure {
  std::size_t n;
  AtomicMeasure measure;
};

/// One row per n.
std::vector<DiagnosticRow> convergence_diagnostic(
    std::span<const IndexedMeasure> measures, const AtomicMeasure& reference,
    const TruncationLadder& ladder, std::size_t K);

/// Coupled construction: one shared draw of (theta_i, Gamma_i); the new
/// approximation A_n uses the first n of them, the reference is the series
/// A = sum M^{-1}_{theta_i}(Gamma_i) delta_{theta_i} truncated at
/// `reference_n` terms. The ladder is a separate draw from Pi.
struct CoupledExperiment {
  std::vector<IndexedMeasure> approximations;
  AtomicMeasure reference;
  TruncationLadder ladder;
};

CoupledExperiment coupled_experiment(const BetaProcessParams& p,
                                     std::span<const std::size_t> n_values,
                                     std::size_t reference_n, std::size_t K,
                                     std::uint64_t seed);

/// CSV with header n,k,d_L,d,tail_bound; one line per (n, k).
std::string diagnostic_csv(std::span<const DiagnosticRow> rows);

}  // namespace bpsim
