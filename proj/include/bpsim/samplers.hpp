#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bpsim/levy_tails.hpp"
#include "bpsim/measure.hpp"
#include "bpsim/param_function.hpp"
#include "bpsim/rng.hpp"

namespace bpsim {

enum class Algorithm {
  new_vague,          // "new"
  ferguson_klass,     // "fk"
  damien_laud_smith,  // "dls"
  wolpert_ickstadt,   // "wi"
  lee_kim,            // "lk"
  lee,                // "lee"
};

std::string_view algorithm_name(Algorithm a);
/// Row label used in Table-1 style output (New, FK, DLS, WI, LK, Lee).
std::string_view algorithm_label(Algorithm a);
Algorithm algorithm_from_name(std::string_view name);
std::vector<Algorithm> all_algorithms();

struct SamplerSettings {
  std::size_t n = 200;   // series / truncation size
  double epsilon = 0.01; // Lee-Kim and Lee
  std::size_t m = 200;   // Damien-Laud-Smith partition size
  std::vector<ParamFunction> dirichlet_gammas;

  /// Throws ConfigError unless n >= 1, m >= 1 and 0 < epsilon < 1.
  void validate() const;
};

// New finite approximation ------------------------------------------------

/// Weights L^{-1}_{n,theta_i}(Gamma_i / (A0(t0) n)) for given locations and
/// arrivals (the coupled form). Both spans must have the same length.
std::vector<double> new_vague_weights(const BetaProcessParams& p, std::size_t n,
                                      std::span<const double> locations,
                                      std::span<const double> arrivals);

/// n atoms: locations ~ Pi, then arrivals Gamma_1..Gamma_n, from `rng`.
AtomicMeasure sample_new_vague(const BetaProcessParams& p, std::size_t n,
                               RngStream& rng);

/// One measure per Dirichlet coordinate. The jumps of the new sampler are
/// split per atom by V(theta_i) ~ Dirichlet(gamma_1(theta_i), ...).
std::vector<AtomicMeasure> sample_beta_dirichlet(
    const BetaProcessParams& p, std::span<const ParamFunction> gammas,
    std::size_t n, RngStream& rng);

// Series representations ----------------------------------------------------

/// M^{-1}_{theta_i}(Gamma_i) for given locations and arrivals.
std::vector<double> wolpert_ickstadt_weights(const BetaProcessParams& p,
                                             std::span<const double> locations,
                                             std::span<const double> arrivals);

AtomicMeasure sample_wolpert_ickstadt(const BetaProcessParams& p, std::size_t n,
                                      RngStream& rng);

/// L_{t0}^{-1}(Gamma_i); nonincreasing in i.
std::vector<double> ferguson_klass_jumps(const FergusonKlassTail& tail,
                                         std::span<const double> arrivals);

AtomicMeasure sample_ferguson_klass(const FergusonKlassTail& tail, std::size_t n,
                                    RngStream& rng);
AtomicMeasure sample_ferguson_klass(const BetaProcessParams& p, std::size_t n,
                                    RngStream& rng);

// Compound Poisson style approximations -------------------------------------

/// Equal-width partition of [0, t0] into m cells; each cell's increment is
/// sum_j x_ij y_ij and is placed at the cell's right endpoint. Zero
/// increments are dropped.
AtomicMeasure sample_damien_laud_smith(const BetaProcessParams& p, std::size_t m,
                                       std::size_t n, RngStream& rng);

/// lambda_eps = eps^{-1} int_0^{t0} c(z) dA0(z).
double lee_kim_rate(const BetaProcessParams& p, double epsilon);

AtomicMeasure sample_lee_kim(const BetaProcessParams& p, double epsilon,
                             RngStream& rng);

/// ln of A0(t0) b(x:1,c) / (n x b(x:eps,c)), simplified to
/// A0(t0) c B(eps, c) x^{-eps} / n.
double lee_log_rate(double A0_total, double c, double epsilon, std::size_t n,
                    double log_x);

/// Atoms x_i y_i at theta_i; zero products are dropped. Weights may exceed 1.
AtomicMeasure sample_lee(const BetaProcessParams& p, std::size_t n,
                         double epsilon, RngStream& rng);

// Dispatch -----------------------------------------------------------------

/// An algorithm bound to its parameters, with per-run precomputation done
/// once. Calling it is const and thread-safe.
class Sampler {
 public:
  Sampler(Algorithm algorithm, BetaProcessParams params, SamplerSettings settings);

  Algorithm algorithm() const noexcept { return algorithm_; }
  const BetaProcessParams& params() const noexcept { return params_; }
  const SamplerSettings& settings() const noexcept { return settings_; }

  /// "n=200", "m=n=200", "M=200", "ε=0.01", "n=200, ε=0.05".
  std::string parameter_label() const;

  AtomicMeasure operator()(RngStream& rng) const;

 private:
  Algorithm algorithm_;
  BetaProcessParams params_;
  SamplerSettings settings_;
  std::shared_ptr<const FergusonKlassTail> fk_tail_;
  double lk_total_rate_ = 0.0;
};

}  // namespace bpsim
