#include "bpsim/samplers.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <utility>

#include "bpsim/error.hpp"
#include "bpsim/special.hpp"

namespace bpsim {

namespace {

constexpr std::array<std::pair<Algorithm, std::string_view>, 6> kNames = {{
    {Algorithm::new_vague, "new"},
    {Algorithm::ferguson_klass, "fk"},
    {Algorithm::damien_laud_smith, "dls"},
    {Algorithm::wolpert_ickstadt, "wi"},
    {Algorithm::lee_kim, "lk"},
    {Algorithm::lee, "lee"},
}};

// Poisson means above this are treated as a numerical failure.
constexpr double kMaxPoissonRate = 1e12;

void require_same_length(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw DomainError("locations and arrivals must have the same length");
  }
}

std::string format_number(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

AtomicMeasure sample_lee_kim_with_rate(const BetaProcessParams& p, double epsilon,
                                       double total_rate, RngStream& rng) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw DomainError("Lee-Kim: epsilon must lie in (0, 1)");
  }
  const auto count = rng.poisson(total_rate / epsilon);
  auto cumulative = [&p](double z) {
    return p.integrate_hazard([&p](double s) { return p.concentration(s); }, 0.0, z);
  };
  std::vector<double> locations(static_cast<std::size_t>(count));
  for (std::size_t i = 0; i < locations.size(); ++i) {
    const double target = rng.uniform() * total_rate;
    try {
      locations[i] = find_root([&](double z) { return cumulative(z) - target; }, 0.0,
                               p.t0(), 1e-12);
    } catch (const std::exception& e) {
      throw SamplerError(std::string("Lee-Kim location: ") + e.what(), i);
    }
  }
  std::sort(locations.begin(), locations.end());
  std::vector<Atom> atoms;
  atoms.reserve(locations.size());
  for (double theta : locations) {
    atoms.push_back({theta, rng.beta_variate(epsilon, p.concentration(theta))});
  }
  return AtomicMeasure(std::move(atoms));
}

}  // namespace

std::string_view algorithm_name(Algorithm a) {
  for (const auto& [alg, name] : kNames) {
    if (alg == a) return name;
  }
  return "unknown";
}

std::string_view algorithm_label(Algorithm a) {
  switch (a) {
    case Algorithm::new_vague:
      return "New";
    case Algorithm::ferguson_klass:
      return "FK";
    case Algorithm::damien_laud_smith:
      return "DLS";
    case Algorithm::wolpert_ickstadt:
      return "WI";
    case Algorithm::lee_kim:
      return "LK";
    case Algorithm::lee:
      return "Lee";
  }
  return "unknown";
}

Algorithm algorithm_from_name(std::string_view name) {
  for (const auto& [alg, n] : kNames) {
    if (n == name) return alg;
  }
  throw ConfigError("unknown algorithm '" + std::string(name) + "'");
}

std::vector<Algorithm> all_algorithms() {
  std::vector<Algorithm> out;
  for (const auto& entry : kNames) out.push_back(entry.first);
  return out;
}

void SamplerSettings::validate() const {
  if (n < 1) throw ConfigError("settings.n must be >= 1");
  if (m < 1) throw ConfigError("settings.m must be >= 1");
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw ConfigError("settings.epsilon must lie in (0, 1)");
  }
}

std::vector<double> new_vague_weights(const BetaProcessParams& p, std::size_t n,
                                      std::span<const double> locations,
                                      std::span<const double> arrivals) {
  require_same_length(locations, arrivals);
  if (n < 2) throw DomainError("new sampler requires n >= 2");
  const double scale = p.A0_total() * static_cast<double>(n);
  std::vector<double> weights(locations.size());
  for (std::size_t i = 0; i < locations.size(); ++i) {
    try {
      weights[i] = new_vague_weight(p.concentration(locations[i]), n, arrivals[i] / scale);
    } catch (const std::exception& e) {
      throw SamplerError(std::string("new sampler: ") + e.what(), i);
    }
  }
  return weights;
}

AtomicMeasure sample_new_vague(const BetaProcessParams& p, std::size_t n,
                               RngStream& rng) {
  if (n < 2) throw DomainError("new sampler requires n >= 2");
  const auto locations = sample_base_locations(p, n, rng);
  const auto arrivals = gamma_arrivals(n, rng);
  const auto weights = new_vague_weights(p, n, locations, arrivals);
  std::vector<Atom> atoms(n);
  for (std::size_t i = 0; i < n; ++i) atoms[i] = {locations[i], weights[i]};
  return AtomicMeasure(std::move(atoms));
}

std::vector<AtomicMeasure> sample_beta_dirichlet(
    const BetaProcessParams& p, std::span<const ParamFunction> gammas,
    std::size_t n, RngStream& rng) {
  if (gammas.empty()) throw DomainError("beta-Dirichlet: no coordinates");
  const AtomicMeasure base = sample_new_vague(p, n, rng);
  std::vector<std::vector<Atom>> coords(gammas.size());
  std::vector<double> alphas(gammas.size());
  for (std::size_t i = 0; i < base.size(); ++i) {
    const Atom& atom = base.atoms()[i];
    for (std::size_t j = 0; j < gammas.size(); ++j) {
      alphas[j] = gammas[j](atom.location);
      if (!(alphas[j] > 0.0)) {
        throw DomainError("beta-Dirichlet: gamma_" + std::to_string(j + 1) +
                          " must be positive");
      }
    }
    const auto v = rng.dirichlet(alphas);
    for (std::size_t j = 0; j < gammas.size(); ++j) {
      coords[j].push_back({atom.location, v[j] * atom.weight});
    }
  }
  std::vector<AtomicMeasure> out;
  out.reserve(coords.size());
  for (auto& c : coords) out.emplace_back(std::move(c));
  return out;
}

std::vector<double> wolpert_ickstadt_weights(const BetaProcessParams& p,
                                             std::span<const double> locations,
                                             std::span<const double> arrivals) {
  require_same_length(locations, arrivals);
  std::vector<double> weights(locations.size());
  for (std::size_t i = 0; i < locations.size(); ++i) {
    try {
      weights[i] =
          wolpert_ickstadt_jump(p.concentration(locations[i]), p.A0_total(), arrivals[i]);
    } catch (const std::exception& e) {
      throw SamplerError(std::string("Wolpert-Ickstadt: ") + e.what(), i);
    }
  }
  return weights;
}

AtomicMeasure sample_wolpert_ickstadt(const BetaProcessParams& p, std::size_t n,
                                      RngStream& rng) {
  if (n < 1) throw DomainError("Wolpert-Ickstadt requires n >= 1");
  const auto locations = sample_base_locations(p, n, rng);
  const auto arrivals = gamma_arrivals(n, rng);
  const auto weights = wolpert_ickstadt_weights(p, locations, arrivals);
  std::vector<Atom> atoms(n);
  for (std::size_t i = 0; i < n; ++i) atoms[i] = {locations[i], weights[i]};
  return AtomicMeasure(std::move(atoms));
}

AtomicMeasure sample_damien_laud_smith(const BetaProcessParams& p, std::size_t m,
                                       std::size_t n, RngStream& rng) {
  if (m < 1 || n < 1) throw DomainError("Damien-Laud-Smith requires m, n >= 1");
  const double t0 = p.t0();
  const double log_n = std::log(static_cast<double>(n));
  std::vector<Atom> atoms;
  double left = 0.0;
  for (std::size_t i = 1; i <= m; ++i) {
    const double right = (i == m) ? t0 : t0 * static_cast<double>(i) / static_cast<double>(m);
    const double increment = p.hazard(right) - p.hazard(left);
    double sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double z = base_location_from_uniform(p, rng.uniform());
      const double c = p.concentration(z);
      // Beta(1, c) by inversion: x = 1 - U^{1/c}.
      const double x = -std::expm1(std::log(rng.uniform()) / c);
      if (increment <= 0.0) continue;
      const double rate = std::exp(std::log(increment) - log_n - std::log(x));
      if (!(rate <= kMaxPoissonRate)) {
        throw SamplerError("Damien-Laud-Smith: Poisson rate overflow", i - 1);
      }
      const auto y = rng.poisson(rate);
      sum += x * static_cast<double>(y);
    }
    if (sum > 0.0) atoms.push_back({right, sum});
    left = right;
  }
  return AtomicMeasure(std::move(atoms));
}

double lee_kim_rate(const BetaProcessParams& p, double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw DomainError("Lee-Kim: epsilon must lie in (0, 1)");
  }
  return p.integrate_hazard([&p](double z) { return p.concentration(z); }, 0.0, p.t0()) /
         epsilon;
}

AtomicMeasure sample_lee_kim(const BetaProcessParams& p, double epsilon,
                             RngStream& rng) {
  const double rate = lee_kim_rate(p, epsilon);
  return sample_lee_kim_with_rate(p, epsilon, rate * epsilon, rng);
}

double lee_log_rate(double A0_total, double c, double epsilon, std::size_t n,
                    double log_x) {
  return std::log(A0_total) + std::log(c) + log_beta(epsilon, c) - epsilon * log_x -
         std::log(static_cast<double>(n));
}

AtomicMeasure sample_lee(const BetaProcessParams& p, std::size_t n, double epsilon,
                         RngStream& rng) {
  if (n < 1) throw DomainError("Lee requires n >= 1");
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw DomainError("Lee: epsilon must lie in (0, 1)");
  }
  std::vector<Atom> atoms;
  for (std::size_t i = 0; i < n; ++i) {
    const double theta = base_location_from_uniform(p, rng.uniform());
    const double c = p.concentration(theta);
    const double log_x = rng.log_beta_variate(epsilon, c);
    const double rate = std::exp(lee_log_rate(p.A0_total(), c, epsilon, n, log_x));
    if (!(rate <= kMaxPoissonRate)) {
      throw SamplerError("Lee: Poisson rate overflow", i);
    }
    const auto y = rng.poisson(rate);
    if (y > 0) atoms.push_back({theta, std::exp(log_x) * static_cast<double>(y)});
  }
  return AtomicMeasure(std::move(atoms));
}

Sampler::Sampler(Algorithm algorithm, BetaProcessParams params,
                 SamplerSettings settings)
    : algorithm_(algorithm), params_(std::move(params)), settings_(std::move(settings)) {
  settings_.validate();
  switch (algorithm_) {
    case Algorithm::new_vague:
      if (settings_.n < 2) throw ConfigError("new sampler requires settings.n >= 2");
      break;
    case Algorithm::ferguson_klass:
      fk_tail_ = std::make_shared<const FergusonKlassTail>(params_);
      break;
    case Algorithm::lee_kim:
      lk_total_rate_ = lee_kim_rate(params_, settings_.epsilon) * settings_.epsilon;
      break;
    default:
      break;
  }
}

std::string Sampler::parameter_label() const {
  const std::string n = std::to_string(settings_.n);
  const std::string eps = format_number(settings_.epsilon);
  switch (algorithm_) {
    case Algorithm::new_vague:
    case Algorithm::ferguson_klass:
      return "n=" + n;
    case Algorithm::damien_laud_smith:
      if (settings_.m == settings_.n) return "m=n=" + n;
      return "m=" + std::to_string(settings_.m) + ", n=" + n;
    case Algorithm::wolpert_ickstadt:
      return "M=" + n;
    case Algorithm::lee_kim:
      return "ε=" + eps;
    case Algorithm::lee:
      return "n=" + n + ", ε=" + eps;
  }
  return {};
}

AtomicMeasure Sampler::operator()(RngStream& rng) const {
  switch (algorithm_) {
    case Algorithm::new_vague:
      return sample_new_vague(params_, settings_.n, rng);
    case Algorithm::ferguson_klass:
      return sample_ferguson_klass(*fk_tail_, settings_.n, rng);
    case Algorithm::damien_laud_smith:
      return sample_damien_laud_smith(params_, settings_.m, settings_.n, rng);
    case Algorithm::wolpert_ickstadt:
      return sample_wolpert_ickstadt(params_, settings_.n, rng);
    case Algorithm::lee_kim:
      return sample_lee_kim_with_rate(params_, settings_.epsilon, lk_total_rate_, rng);
    case Algorithm::lee:
      return sample_lee(params_, settings_.n, settings_.epsilon, rng);
  }
  return {};
}

}  // namespace bpsim
