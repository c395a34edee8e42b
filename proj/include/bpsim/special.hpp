#pragma once

#include <cstddef>
#include <functional>

namespace bpsim {

struct QuadratureSpec {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  /// Deepest bisection level a subinterval may reach.
  std::size_t max_depth = 60;
};

using ScalarFunction = std::function<double(double)>;

/// ln Gamma(x) for x > 0.
double log_gamma(double x);

/// ln B(a, b).
double log_beta(double a, double b);

/// Regularized incomplete beta I_x(a, b), i.e. the Beta(a, b) CDF.
double reg_inc_beta(double a, double b, double x);

/// 1 - I_x(a, b) without cancellation.
double reg_inc_beta_complement(double a, double b, double x);

/// ln I_x(a, b); finite for x far below the smallest normal double.
double log_reg_inc_beta(double a, double b, double log_x);

/// Beta(a, b) density.
double beta_density(double a, double b, double x);

/// x with I_x(a, b) = p.
double beta_quantile(double a, double b, double p);

/// x with 1 - I_x(a, b) = q. Accurate for q near zero, where passing
/// 1 - q to beta_quantile would lose every significant digit.
double beta_quantile_upper(double a, double b, double q);

/// Root of a monotone f on [lo, hi]. Returns once |f(x)| <= tol or the
/// bracket is narrower than tol. Throws BracketError if f(lo) and f(hi)
/// share a sign and neither is a root.
double find_root(const ScalarFunction& f, double lo, double hi, double tol);

/// Globally adaptive Gauss-Kronrod (7/15) quadrature. Nodes are interior,
/// so integrable endpoint singularities are allowed. Throws QuadratureError
/// if the tolerance max(abs_tol, rel_tol * |I|) is not met.
double integrate(const ScalarFunction& f, double lo, double hi,
                 const QuadratureSpec& spec = {});

}  // namespace bpsim
