#include "bpsim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "bpsim/error.hpp"
#include "bpsim/format.hpp"
#include "bpsim/samplers.hpp"

namespace bpsim {

namespace {

// max over breakpoints a of A(a) - B(a + h), floored at 0.
double one_sided_gap(const StepFunction& a, const StepFunction& b, double h) {
  const auto& pa = a.breakpoints();
  const auto& pb = b.breakpoints();
  double worst = 0.0;
  std::size_t j = 0;
  for (const auto& point : pa) {
    const double shifted = point.location + h;
    while (j < pb.size() && pb[j].location <= shifted) ++j;
    const double b_value = (j == 0) ? 0.0 : pb[j - 1].value;
    worst = std::max(worst, point.value - b_value);
  }
  return worst;
}

}  // namespace

StepFunction::StepFunction(std::vector<Breakpoint> breakpoints)
    : points_(std::move(breakpoints)) {
  double previous_value = 0.0;
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const auto& p = points_[i];
    if (!std::isfinite(p.location) || !std::isfinite(p.value)) {
      throw DomainError("step function: non-finite breakpoint");
    }
    if (i > 0 && !(p.location > points_[i - 1].location)) {
      throw DomainError("step function: locations must be strictly increasing");
    }
    if (p.value < previous_value) {
      throw DomainError("step function: values must be nondecreasing and >= 0");
    }
    previous_value = p.value;
  }
}

StepFunction StepFunction::from_jumps(std::span<const Atom> jumps) {
  std::vector<Breakpoint> points;
  double running = 0.0;
  for (const auto& j : jumps) {
    if (j.weight < 0.0) throw DomainError("step function: negative jump");
    if (j.weight == 0.0) continue;
    running += j.weight;
    if (!points.empty() && points.back().location == j.location) {
      points.back().value = running;
    } else {
      points.push_back({j.location, running});
    }
  }
  return StepFunction(std::move(points));
}

StepFunction StepFunction::from_measure(const AtomicMeasure& m) {
  return from_jumps(m.atoms());
}

double StepFunction::operator()(double x) const {
  auto it = std::upper_bound(points_.begin(), points_.end(), x,
                             [](double v, const Breakpoint& p) { return v < p.location; });
  return it == points_.begin() ? 0.0 : std::prev(it)->value;
}

bool levy_band_holds(const StepFunction& f1, const StepFunction& f2, double h) {
  return one_sided_gap(f2, f1, h) <= h && one_sided_gap(f1, f2, h) <= h;
}

double levy_distance(const StepFunction& f1, const StepFunction& f2, double tol) {
  if (!(tol > 0.0)) throw DomainError("levy_distance: tolerance must be positive");
  if (levy_band_holds(f1, f2, 0.0)) return 0.0;
  double lo_loc = 0.0, hi_loc = 0.0;
  bool any = false;
  for (const auto* f : {&f1, &f2}) {
    for (const auto& p : f->breakpoints()) {
      lo_loc = any ? std::min(lo_loc, p.location) : p.location;
      hi_loc = any ? std::max(hi_loc, p.location) : p.location;
      any = true;
    }
  }
  double lo = 0.0;
  double hi = std::max({f1.total(), f2.total(), hi_loc - lo_loc});
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (levy_band_holds(f1, f2, mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

TruncationLadder::TruncationLadder(std::vector<double> thetas, double left_edge)
    : thetas_(std::move(thetas)), left_edge_(left_edge) {
  if (thetas_.empty()) throw DomainError("truncation ladder: no order statistics");
  std::sort(thetas_.begin(), thetas_.end());
  for (std::size_t i = 1; i < thetas_.size(); ++i) {
    if (!(thetas_[i] > thetas_[i - 1])) {
      throw DomainError("truncation ladder: order statistics must be distinct");
    }
  }
  if (!std::isfinite(left_edge_)) throw DomainError("truncation ladder: bad left edge");
}

TruncationLadder TruncationLadder::from_base_draw(const BetaProcessParams& p,
                                                  std::size_t K, RngStream& rng) {
  return TruncationLadder(sample_base_locations(p, K, rng), 0.0);
}

double truncation_ramp(const TruncationLadder& ladder, std::size_t k, double t) {
  if (k < 1 || k > ladder.size()) throw DomainError("truncation_ramp: k out of range");
  const double lower = (k == 1) ? ladder.left_edge() : ladder.theta(k - 1);
  const double upper = ladder.theta(k);
  if (!(upper > lower)) throw DomainError("truncation_ramp: degenerate ladder step");
  if (t < lower) return 1.0;
  if (t >= upper) return 0.0;
  return (upper - t) / (upper - lower);
}

StepFunction truncate_measure(const AtomicMeasure& m, const TruncationLadder& ladder,
                              std::size_t k) {
  std::vector<Atom> jumps;
  jumps.reserve(m.size());
  for (const auto& a : m.atoms()) {
    jumps.push_back({a.location, a.weight * truncation_ramp(ladder, k, a.location)});
  }
  return StepFunction::from_jumps(jumps);
}

MetricValue metric_d(const AtomicMeasure& m1, const AtomicMeasure& m2,
                     const TruncationLadder& ladder, std::size_t K) {
  if (K < 1) throw DomainError("metric_d: K must be >= 1");
  if (K > ladder.size()) throw DomainError("metric_d: K exceeds the ladder length");
  MetricValue out{0.0, std::ldexp(1.0, -static_cast<int>(K)), {}};
  out.levy_terms.reserve(K);
  for (std::size_t k = 1; k <= K; ++k) {
    const double dl =
        levy_distance(truncate_measure(m1, ladder, k), truncate_measure(m2, ladder, k));
    out.levy_terms.push_back(dl);
    out.value += std::ldexp(dl / (1.0 + dl), -static_cast<int>(k));
  }
  return out;
}

double integrate_test_function(const AtomicMeasure& m,
                               const std::function<double(double)>& f) {
  double total = 0.0;
  for (const auto& a : m.atoms()) total += a.weight * f(a.location);
  return total;
}

std::vector<DiagnosticRow> convergence_diagnostic(
    std::span<const IndexedMeasure> measures, const AtomicMeasure& reference,
    const TruncationLadder& ladder, std::size_t K) {
  std::vector<DiagnosticRow> rows;
  for (const auto& entry : measures) {
    auto d = metric_d(entry.measure, reference, ladder, K);
    rows.push_back({entry.n, std::move(d.levy_terms), d.value, d.tail_bound});
  }
  return rows;
}

CoupledExperiment coupled_experiment(const BetaProcessParams& p,
                                     std::span<const std::size_t> n_values,
                                     std::size_t reference_n, std::size_t K,
                                     std::uint64_t seed) {
  if (n_values.empty()) throw DomainError("coupled experiment: no n values");
  if (K < 1) throw DomainError("coupled experiment: K must be >= 1");
  std::size_t total = reference_n;
  for (std::size_t n : n_values) {
    if (n < 2) throw DomainError("coupled experiment: every n must be >= 2");
    total = std::max(total, n);
  }
  if (reference_n < 1) throw DomainError("coupled experiment: reference_n must be >= 1");

  RngStream shared(seed, 0);
  const auto locations = sample_base_locations(p, total, shared);
  const auto arrivals = gamma_arrivals(total, shared);
  RngStream ladder_stream(seed, 1);
  auto ladder = TruncationLadder::from_base_draw(p, K, ladder_stream);

  std::vector<IndexedMeasure> approximations;
  for (std::size_t n : n_values) {
    std::span<const double> loc(locations.data(), n);
    std::span<const double> arr(arrivals.data(), n);
    const auto w = new_vague_weights(p, n, loc, arr);
    std::vector<Atom> atoms(n);
    for (std::size_t i = 0; i < n; ++i) atoms[i] = {loc[i], w[i]};
    approximations.push_back({n, AtomicMeasure(std::move(atoms))});
  }

  std::span<const double> loc(locations.data(), reference_n);
  std::span<const double> arr(arrivals.data(), reference_n);
  const auto w = wolpert_ickstadt_weights(p, loc, arr);
  std::vector<Atom> atoms(reference_n);
  for (std::size_t i = 0; i < reference_n; ++i) atoms[i] = {loc[i], w[i]};

  return {std::move(approximations), AtomicMeasure(std::move(atoms)), std::move(ladder)};
}

std::string diagnostic_csv(std::span<const DiagnosticRow> rows) {
  std::ostringstream os;
  os << "n,k,d_L,d,tail_bound\n";
  for (const auto& r : rows) {
    for (std::size_t k = 1; k <= r.levy.size(); ++k) {
      os << r.n << ',' << k << ',' << format_double(r.levy[k - 1]) << ','
         << format_double(r.metric) << ',' << format_double(r.tail_bound) << '\n';
    }
  }
  return os.str();
}

}  // namespace bpsim
