#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace bpsim {

/// Seedable random stream. Two streams built from the same (seed, stream_id)
/// produce the same draws; streams with different ids are statistically
/// independent (the pair is hashed through std::seed_seq).
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }

  /// Uniform on the open interval (0, 1).
  double uniform();
  /// Unit-mean exponential.
  double exponential();
  double normal();

  /// Log of a Gamma(shape, 1) variate. Stays finite for tiny shapes where
  /// the variate itself underflows.
  double log_gamma_variate(double shape);
  double gamma_variate(double shape);

  /// Log of a Beta(a, b) variate.
  double log_beta_variate(double a, double b);
  double beta_variate(double a, double b);

  std::int64_t poisson(double mean);

  /// Dirichlet(alphas) via normalized gamma draws. Entries sum to one up to
  /// rounding; a single alpha yields {1} without consuming randomness.
  std::vector<double> dirichlet(std::span<const double> alphas);

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace bpsim
