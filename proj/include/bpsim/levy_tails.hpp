#pragma once

#include <cstddef>
#include <vector>

#include "bpsim/param_function.hpp"

namespace bpsim {

/// T_c(x) = int_x^1 s^{-1} (1 - s)^{c - 1} ds, the jump-size tail of a beta
/// process with concentration c per unit of hazard. Diverges like ln(1/x)
/// as x -> 0, so most queries go through ln(1/x).
class ConcentrationTail {
 public:
  explicit ConcentrationTail(double c);

  double concentration() const noexcept { return c_; }

  /// T_c(x) for x in (0, 1].
  double operator()(double x) const;
  /// T_c(exp(-u)) for u >= 0. Exact for x below the double range.
  double at_log(double u) const;
  /// ln(1/x) of the x solving T_c(x) = y, for y > 0.
  double inverse_log(double y) const;

  /// Regular part int_x^{1/2} (1 - (1-s)^{c-1}) / s ds, x in (0, 1/2].
  static double regular_part(double c, double x);
  /// T_c(x) for x in [1/2, 1) through a bounded integrand.
  static double upper_part(double c, double x);

 private:
  double c_;
  double half_;  // T_c(1/2)
};

/// L_{n,theta}(x) = 1 - I_x(c/n, c(1 - 1/n)) with c = c(theta). n >= 2.
double levy_tail_Ln(const BetaProcessParams& p, std::size_t n, double theta,
                    double x);

/// M_z(x) = A0(t0) c(z) int_x^1 s^{-1}(1-s)^{c(z)-1} ds, x in (0, 1).
double levy_tail_M(const BetaProcessParams& p, double z, double x);

/// Jump size of the finite approximation: L_{n,theta}^{-1}(level), the
/// (1 - level) quantile of Beta(c/n, c(1 - 1/n)); zero once level >= 1.
double new_vague_weight(double c, std::size_t n, double level);

/// M_z^{-1}(gamma) for the concentration c = c(z).
double wolpert_ickstadt_jump(double c, double A0_total, double gamma);

/// Tail of the full Levy measure,
///   L_{t0}(x) = int_x^1 [int_0^{t0} c(z) s^{-1} (1-s)^{c(z)-1} dA0(z)] ds,
/// and the conditional location CDF n_t(s). The inner integral is tabulated
/// once after removing its 1/s singularity, so inversions are cheap.
class FergusonKlassTail {
 public:
  explicit FergusonKlassTail(const BetaProcessParams& p,
                             std::size_t grid_points = 2048);

  const BetaProcessParams& params() const noexcept { return params_; }

  /// L_{t0}(x), x in (0, 1].
  double operator()(double x) const;
  /// L_{t0}(exp(-u)).
  double at_log(double u) const;
  /// J with L_{t0}(J) = gamma.
  double inverse(double gamma) const;

  /// n_t(s) = int_0^t c (1-s)^c dA0 / int_0^{t0} c (1-s)^c dA0.
  double location_cdf(double t, double jump) const;
  /// theta in [0, t0] with n_theta(jump) = u.
  double location_from_uniform(double u, double jump) const;

 private:
  double lower_region(double x, double u) const;
  double upper_region(double x) const;

  BetaProcessParams params_;
  double total_rate_;     // int c dA0
  double half_constant_;  // int c T_c(1/2) dA0
  double step_;
  std::vector<double> regular_;     // g(s_k) = int c h_c(s_k) dA0
  std::vector<double> cumulative_;  // int_{s_k}^{1/2} g
};

}  // namespace bpsim
