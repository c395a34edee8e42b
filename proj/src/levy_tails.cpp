#include "bpsim/levy_tails.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "bpsim/error.hpp"
#include "bpsim/special.hpp"

namespace bpsim {

namespace {

constexpr double kLn2 = std::numbers::ln2;

// (1 - (1-s)^{c-1}) / s, bounded on [0, 1/2] with limit c - 1 at 0.
double regular_integrand(double c, double s) {
  if (s == 0.0) return c - 1.0;
  return -std::expm1((c - 1.0) * std::log1p(-s)) / s;
}

// T_c(1 - y) for y in (0, 1/2], written with a bounded integrand.
double upper_from_complement(double c, double y) {
  if (y <= 0.0) return 0.0;
  if (c >= 1.0) {
    // s = 1 - w
    return integrate([c](double w) { return std::pow(w, c - 1.0) / (1.0 - w); },
                     0.0, y);
  }
  // v = (1 - s)^c removes the (1-s)^{c-1} singularity.
  const double inv_c = 1.0 / c;
  const double top = std::pow(y, c);
  return inv_c * integrate([inv_c](double v) { return 1.0 / (1.0 - std::pow(v, inv_c)); },
                           0.0, top);
}

void check_concentration(double c) {
  if (!(c > 0.0) || !std::isfinite(c)) {
    throw DomainError("concentration c must be positive and finite");
  }
}

// Solves tail(u) = target for u >= 0 where tail is increasing with tail(0) = 0.
template <typename Tail>
double invert_log_tail(const Tail& tail, double target) {
  if (!(target > 0.0) || !std::isfinite(target)) {
    throw DomainError("tail inversion: level must be positive and finite");
  }
  double hi = std::max(1.0, target + 1.0);
  int expansions = 0;
  while (tail(hi) < target) {
    hi *= 2.0;
    if (++expansions > 60) throw BracketError("tail inversion: no upper bracket");
  }
  return find_root([&](double u) { return tail(u) - target; }, 0.0, hi, 1e-13);
}

}  // namespace

ConcentrationTail::ConcentrationTail(double c) : c_(c), half_(0.0) {
  check_concentration(c);
  half_ = upper_from_complement(c_, 0.5);
}

double ConcentrationTail::regular_part(double c, double x) {
  check_concentration(c);
  if (!(x > 0.0 && x <= 0.5)) throw DomainError("regular_part: x outside (0, 1/2]");
  return integrate([c](double s) { return regular_integrand(c, s); }, x, 0.5);
}

double ConcentrationTail::upper_part(double c, double x) {
  check_concentration(c);
  if (!(x >= 0.5 && x <= 1.0)) throw DomainError("upper_part: x outside [1/2, 1]");
  return upper_from_complement(c, 1.0 - x);
}

double ConcentrationTail::at_log(double u) const {
  if (!(u >= 0.0)) throw DomainError("ConcentrationTail: u must be >= 0");
  if (u == 0.0) return 0.0;
  if (u >= kLn2) {
    const double x = std::exp(-u);
    // The regular part is O(x) for tiny x; skip the quadrature there.
    const double regular =
        x == 0.0 ? 0.0
                 : integrate([c = c_](double s) { return regular_integrand(c, s); },
                             x, 0.5);
    return (u - kLn2) - regular + half_;
  }
  return upper_from_complement(c_, -std::expm1(-u));
}

double ConcentrationTail::operator()(double x) const {
  if (!(x > 0.0 && x <= 1.0)) throw DomainError("ConcentrationTail: x outside (0, 1]");
  if (x == 1.0) return 0.0;
  if (x > 0.5) return upper_from_complement(c_, 1.0 - x);
  return at_log(-std::log(x));
}

double ConcentrationTail::inverse_log(double y) const {
  return invert_log_tail([this](double u) { return at_log(u); }, y);
}

double levy_tail_Ln(const BetaProcessParams& p, std::size_t n, double theta,
                    double x) {
  if (n < 2) throw DomainError("levy_tail_Ln: n must be >= 2");
  if (!(x > 0.0 && x <= 1.0)) throw DomainError("levy_tail_Ln: x outside (0, 1]");
  const double c = p.concentration(theta);
  check_concentration(c);
  const double nn = static_cast<double>(n);
  return reg_inc_beta_complement(c / nn, c * (1.0 - 1.0 / nn), x);
}

double levy_tail_M(const BetaProcessParams& p, double z, double x) {
  if (!(x > 0.0 && x < 1.0)) throw DomainError("levy_tail_M: x outside (0, 1)");
  const double c = p.concentration(z);
  return p.A0_total() * c * ConcentrationTail(c)(x);
}

double new_vague_weight(double c, std::size_t n, double level) {
  if (n < 2) throw DomainError("new sampler: n must be >= 2");
  check_concentration(c);
  if (!(level >= 0.0)) throw DomainError("new sampler: negative tail level");
  if (level >= 1.0) return 0.0;
  const double nn = static_cast<double>(n);
  return beta_quantile_upper(c / nn, c * (1.0 - 1.0 / nn), level);
}

double wolpert_ickstadt_jump(double c, double A0_total, double gamma) {
  const ConcentrationTail tail(c);
  return std::exp(-tail.inverse_log(gamma / (A0_total * c)));
}

FergusonKlassTail::FergusonKlassTail(const BetaProcessParams& p,
                                     std::size_t grid_points)
    : params_(p), total_rate_(0.0), half_constant_(0.0), step_(0.0) {
  if (grid_points < 2) throw DomainError("FergusonKlassTail: need >= 2 grid points");
  const double t0 = p.t0();
  total_rate_ = p.integrate_hazard([&p](double z) { return p.concentration(z); }, 0.0, t0);
  half_constant_ = p.integrate_hazard(
      [&p](double z) {
        const double c = p.concentration(z);
        return c * upper_from_complement(c, 0.5);
      },
      0.0, t0);

  auto g = [&p, t0](double s) {
    return p.integrate_hazard(
        [&p, s](double z) {
          const double c = p.concentration(z);
          return c * regular_integrand(c, s);
        },
        0.0, t0);
  };

  step_ = 0.5 / static_cast<double>(grid_points);
  regular_.resize(grid_points + 1);
  for (std::size_t k = 0; k <= grid_points; ++k) regular_[k] = g(step_ * k);
  cumulative_.assign(grid_points + 1, 0.0);
  for (std::size_t k = grid_points; k-- > 0;) {
    const double cell = integrate(g, step_ * k, step_ * (k + 1));
    cumulative_[k] = cumulative_[k + 1] + cell;
  }
}

double FergusonKlassTail::lower_region(double x, double u) const {
  // Cubic Hermite interpolation of F(x) = int_x^{1/2} g, with F' = -g.
  const std::size_t cells = regular_.size() - 1;
  std::size_t k = std::min(static_cast<std::size_t>(x / step_), cells - 1);
  const double t = (x - step_ * k) / step_;
  const double t2 = t * t;
  const double t3 = t2 * t;
  const double h00 = 2 * t3 - 3 * t2 + 1;
  const double h10 = t3 - 2 * t2 + t;
  const double h01 = -2 * t3 + 3 * t2;
  const double h11 = t3 - t2;
  const double F = h00 * cumulative_[k] - h10 * step_ * regular_[k] +
                   h01 * cumulative_[k + 1] - h11 * step_ * regular_[k + 1];
  return total_rate_ * (u - kLn2) - F + half_constant_;
}

double FergusonKlassTail::upper_region(double y) const {
  return params_.integrate_hazard(
      [this, y](double z) {
        const double c = params_.concentration(z);
        return c * upper_from_complement(c, y);
      },
      0.0, params_.t0());
}

double FergusonKlassTail::at_log(double u) const {
  if (!(u >= 0.0)) throw DomainError("FergusonKlassTail: u must be >= 0");
  if (u == 0.0) return 0.0;
  if (u >= kLn2) return lower_region(std::exp(-u), u);
  return upper_region(-std::expm1(-u));
}

double FergusonKlassTail::operator()(double x) const {
  if (!(x > 0.0 && x <= 1.0)) throw DomainError("FergusonKlassTail: x outside (0, 1]");
  if (x == 1.0) return 0.0;
  if (x > 0.5) return upper_region(1.0 - x);
  return lower_region(x, -std::log(x));
}

double FergusonKlassTail::inverse(double gamma) const {
  return std::exp(-invert_log_tail([this](double u) { return at_log(u); }, gamma));
}

double FergusonKlassTail::location_cdf(double t, double jump) const {
  if (!(jump >= 0.0 && jump < 1.0)) throw DomainError("location_cdf: jump outside [0, 1)");
  const double log_keep = std::log1p(-jump);
  auto density = [this, log_keep](double z) {
    const double c = params_.concentration(z);
    return c * std::exp(c * log_keep);
  };
  const double t_clamped = std::clamp(t, 0.0, params_.t0());
  return params_.integrate_hazard(density, 0.0, t_clamped) /
         params_.integrate_hazard(density, 0.0, params_.t0());
}

double FergusonKlassTail::location_from_uniform(double u, double jump) const {
  if (!(u >= 0.0 && u <= 1.0)) throw DomainError("location: uniform outside [0, 1]");
  if (!(jump >= 0.0 && jump < 1.0)) throw DomainError("location: jump outside [0, 1)");
  const double log_keep = std::log1p(-jump);
  auto density = [this, log_keep](double z) {
    const double c = params_.concentration(z);
    return c * std::exp(c * log_keep);
  };
  const double total = params_.integrate_hazard(density, 0.0, params_.t0());
  const double target = u * total;
  return find_root(
      [&](double t) { return params_.integrate_hazard(density, 0.0, t) - target; },
      0.0, params_.t0(), 1e-12);
}

}  // namespace bpsim
