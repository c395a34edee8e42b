#include "bpsim/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bpsim/error.hpp"

namespace bpsim {

namespace {

std::seed_seq make_seed_seq(std::uint64_t seed, std::uint64_t stream_id) {
  return std::seed_seq{static_cast<std::uint32_t>(seed),
                       static_cast<std::uint32_t>(seed >> 32),
                       static_cast<std::uint32_t>(stream_id),
                       static_cast<std::uint32_t>(stream_id >> 32),
                       0x62707369u};
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id) {
  auto seq = make_seed_seq(seed, stream_id);
  engine_.seed(seq);
}

double RngStream::uniform() {
  // 53 random bits, shifted half a step off zero.
  const std::uint64_t bits = engine_() >> 11;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

double RngStream::exponential() { return -std::log(uniform()); }

double RngStream::normal() { return normal_(engine_); }

double RngStream::log_gamma_variate(double shape) {
  if (!(shape > 0.0) || !std::isfinite(shape)) {
    throw DomainError("gamma variate: shape must be positive and finite");
  }
  if (shape < 1.0) {
    // G(a) = G(a + 1) * U^(1/a), kept in log space.
    return log_gamma_variate(shape + 1.0) + std::log(uniform()) / shape;
  }
  // Marsaglia & Tsang.
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    const double x = normal();
    double v = 1.0 + c * x;
    if (v <= 0.0) continue;
    v = v * v * v;
    const double u = uniform();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return std::log(d * v);
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) {
      return std::log(d * v);
    }
  }
}

double RngStream::gamma_variate(double shape) {
  return std::exp(log_gamma_variate(shape));
}

double RngStream::log_beta_variate(double a, double b) {
  const double lx = log_gamma_variate(a);
  const double ly = log_gamma_variate(b);
  // log(x / (x + y))
  const double hi = std::max(lx, ly);
  return lx - (hi + std::log(std::exp(lx - hi) + std::exp(ly - hi)));
}

double RngStream::beta_variate(double a, double b) {
  return std::exp(log_beta_variate(a, b));
}

std::int64_t RngStream::poisson(double mean) {
  if (!(mean >= 0.0) || !std::isfinite(mean)) {
    throw DomainError("poisson: mean must be finite and nonnegative");
  }
  if (mean == 0.0) return 0;
  std::poisson_distribution<std::int64_t> dist(mean);
  return dist(engine_);
}

std::vector<double> RngStream::dirichlet(std::span<const double> alphas) {
  if (alphas.empty()) throw DomainError("dirichlet: no coordinates");
  for (double a : alphas) {
    if (!(a > 0.0) || !std::isfinite(a)) {
      throw DomainError("dirichlet: parameters must be positive");
    }
  }
  if (alphas.size() == 1) return {1.0};

  std::vector<double> out(alphas.size());
  double hi = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < alphas.size(); ++j) {
    out[j] = log_gamma_variate(alphas[j]);
    hi = std::max(hi, out[j]);
  }
  double total = 0.0;
  for (double& v : out) {
    v = std::exp(v - hi);
    total += v;
  }
  for (double& v : out) v /= total;
  return out;
}

}  // namespace bpsim
