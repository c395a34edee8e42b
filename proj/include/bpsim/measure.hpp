#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "bpsim/param_function.hpp"
#include "bpsim/rng.hpp"

namespace bpsim {

struct Atom {
  double location;
  double weight;
  bool operator==(const Atom&) const = default;
};

/// Finite atomic measure sum_i w_i delta_{x_i}. Atoms are kept sorted by
/// location; ties keep insertion order and are never merged.
class AtomicMeasure {
 public:
  AtomicMeasure() = default;
  /// Throws DomainError for a negative or non-finite weight or a non-finite
  /// location.
  explicit AtomicMeasure(std::vector<Atom> atoms);

  const std::vector<Atom>& atoms() const noexcept { return atoms_; }
  std::size_t size() const noexcept { return atoms_.size(); }
  bool empty() const noexcept { return atoms_.empty(); }
  double total_mass() const noexcept {
    return cumulative_.empty() ? 0.0 : cumulative_.back();
  }

  /// mu((-inf, t]).
  double distribution(double t) const;
  /// mu((-inf, t)).
  double left_limit(double t) const;

  /// Values of mu((-inf, t]) for a sorted grid, in one sweep.
  std::vector<double> distribution_on(std::span<const double> sorted_grid) const;

  bool operator==(const AtomicMeasure& other) const {
    return atoms_ == other.atoms_;
  }

 private:
  std::vector<Atom> atoms_;
  std::vector<double> cumulative_;
};

double distribution_function(const AtomicMeasure& m, double t);

/// Location with A0(x) = u * A0(t0): the inverse CDF of the normalized
/// hazard measure. Analytic where the family allows, bisection otherwise.
double base_location_from_uniform(const BetaProcessParams& p, double u);

/// n i.i.d. draws from Pi(dz) = dA0(z) / A0(t0).
std::vector<double> sample_base_locations(const BetaProcessParams& p,
                                          std::size_t n, RngStream& rng);

/// Partial sums of the given unit-exponential increments.
std::vector<double> arrivals_from_exponentials(std::span<const double> e);

/// Gamma_1 < ... < Gamma_n, arrival times of a unit-rate Poisson process.
std::vector<double> gamma_arrivals(std::size_t n, RngStream& rng);

}  // namespace bpsim
