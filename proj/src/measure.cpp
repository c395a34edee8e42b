#include "bpsim/measure.hpp"

#include <algorithm>
#include <cmath>

#include "bpsim/error.hpp"
#include "bpsim/special.hpp"

namespace bpsim {

AtomicMeasure::AtomicMeasure(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
  for (const auto& a : atoms_) {
    if (!std::isfinite(a.location)) throw DomainError("atom location must be finite");
    if (!(a.weight >= 0.0) || !std::isfinite(a.weight)) {
      throw DomainError("atom weight must be finite and nonnegative");
    }
  }
  std::stable_sort(atoms_.begin(), atoms_.end(),
                   [](const Atom& x, const Atom& y) { return x.location < y.location; });
  cumulative_.reserve(atoms_.size());
  double running = 0.0;
  for (const auto& a : atoms_) {
    running += a.weight;
    cumulative_.push_back(running);
  }
}

double AtomicMeasure::distribution(double t) const {
  auto it = std::upper_bound(atoms_.begin(), atoms_.end(), t,
                             [](double v, const Atom& a) { return v < a.location; });
  if (it == atoms_.begin()) return 0.0;
  return cumulative_[static_cast<std::size_t>(it - atoms_.begin()) - 1];
}

double AtomicMeasure::left_limit(double t) const {
  auto it = std::lower_bound(atoms_.begin(), atoms_.end(), t,
                             [](const Atom& a, double v) { return a.location < v; });
  if (it == atoms_.begin()) return 0.0;
  return cumulative_[static_cast<std::size_t>(it - atoms_.begin()) - 1];
}

std::vector<double> AtomicMeasure::distribution_on(
    std::span<const double> sorted_grid) const {
  std::vector<double> out;
  out.reserve(sorted_grid.size());
  std::size_t i = 0;
  for (double t : sorted_grid) {
    while (i < atoms_.size() && atoms_[i].location <= t) ++i;
    out.push_back(i == 0 ? 0.0 : cumulative_[i - 1]);
  }
  return out;
}

double distribution_function(const AtomicMeasure& m, double t) {
  return m.distribution(t);
}

double base_location_from_uniform(const BetaProcessParams& p, double u) {
  if (!(u >= 0.0 && u <= 1.0)) throw DomainError("uniform variate outside [0, 1]");
  const double target = u * p.A0_total();
  if (auto t = p.A0().analytic_inverse(target)) {
    return std::clamp(*t, 0.0, p.t0());
  }
  return find_root([&](double t) { return p.hazard(t) - target; }, 0.0, p.t0(),
                   1e-12);
}

std::vector<double> sample_base_locations(const BetaProcessParams& p,
                                          std::size_t n, RngStream& rng) {
  if (n < 1) throw DomainError("sample_base_locations: n must be >= 1");
  std::vector<double> out(n);
  for (auto& x : out) x = base_location_from_uniform(p, rng.uniform());
  return out;
}

std::vector<double> arrivals_from_exponentials(std::span<const double> e) {
  std::vector<double> out(e.size());
  double running = 0.0;
  for (std::size_t i = 0; i < e.size(); ++i) {
    running += e[i];
    out[i] = running;
  }
  return out;
}

std::vector<double> gamma_arrivals(std::size_t n, RngStream& rng) {
  if (n < 1) throw DomainError("gamma_arrivals: n must be >= 1");
  std::vector<double> e(n);
  for (auto& v : e) v = rng.exponential();
  return arrivals_from_exponentials(e);
}

}  // namespace bpsim
