#include "bpsim/special.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <queue>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include "bpsim/error.hpp"

namespace bpsim {

namespace {

constexpr double kTiny = 1e-300;
constexpr double kEps = 1e-16;

void check_shapes(double a, double b, const char* where) {
  if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
    throw DomainError(std::string(where) + ": shapes must be positive");
  }
}

// Continued fraction for I_x(a, b) (modified Lentz). Converges quickly for
// x < (a + 1) / (a + b + 2).
double beta_continued_fraction(double a, double b, double x) {
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= 10000; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) return h;
  }
  return h;
}

bool use_direct_fraction(double a, double b, double x) {
  return x < (a + 1.0) / (a + b + 2.0);
}

// ln[x^a (1-x)^b / B(a, b)] from ln x.
double log_prefactor(double a, double b, double log_x) {
  const double x = std::exp(log_x);
  return a * log_x + b * std::log1p(-x) - log_beta(a, b);
}

// ln I_x(a, b) on the direct branch.
double log_lower_direct(double a, double b, double log_x) {
  const double x = std::exp(log_x);
  return log_prefactor(a, b, log_x) +
         std::log(beta_continued_fraction(a, b, x) / a);
}

// Solves ln I_{e^t}(a, b) = ln p for t <= log_hi, given that the left side
// is >= ln p at log_hi. Safeguarded Newton in t = ln x.
double lower_quantile_log(double a, double b, double p, double log_hi) {
  const double log_p = std::log(p);
  const double lbeta = log_beta(a, b);
  auto g = [&](double t) { return log_reg_inc_beta(a, b, t) - log_p; };

  double hi = log_hi;
  // Small-x asymptote I ~ x^a / (a B(a, b)).
  double t = std::min((log_p + std::log(a) + lbeta) / a, hi);
  double lo = t - 1.0;
  double step = 1.0;
  while (g(lo) >= 0.0) {
    hi = lo;
    step *= 2.0;
    lo -= step;
    if (lo < -1e6) return 0.0;
  }
  if (!(t > lo && t < hi)) t = 0.5 * (lo + hi);

  for (int iter = 0; iter < 300; ++iter) {
    const double gt = g(t);
    if (std::fabs(gt) <= 1e-14) break;
    if (gt < 0.0) {
      lo = t;
    } else {
      hi = t;
    }
    if (hi - lo <= 1e-15 * std::max(1.0, std::fabs(t))) break;
    const double x = std::exp(t);
    const double log_density =
        (a - 1.0) * t + (b - 1.0) * std::log1p(-x) - lbeta;
    const double slope = std::exp(t + log_density - (gt + log_p));
    double next = t - gt / slope;
    if (!std::isfinite(next) || next <= lo || next >= hi) {
      next = 0.5 * (lo + hi);
    }
    t = next;
  }
  return std::exp(t);
}

void check_probability(double p, const char* where) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw DomainError(std::string(where) + ": probability outside [0, 1]");
  }
}

// Gauss-Kronrod 7/15 abscissae and weights on [-1, 1].
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double lo;
  double hi;
  double value;
  double error;
  std::size_t depth;
  bool operator<(const Panel& other) const { return error < other.error; }
};

Panel gauss_kronrod_15(const ScalarFunction& f, double lo, double hi,
                       std::size_t depth) {
  const double center = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  const double fc = f(center);
  double kronrod = fc * kWgk[7];
  double gauss = fc * kWg[3];
  double abs_sum = std::fabs(kronrod);
  std::array<double, 7> f1{};
  std::array<double, 7> f2{};
  for (std::size_t j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    f1[j] = f(center - dx);
    f2[j] = f(center + dx);
    const double pair = f1[j] + f2[j];
    kronrod += kWgk[j] * pair;
    abs_sum += kWgk[j] * (std::fabs(f1[j]) + std::fabs(f2[j]));
    if (j % 2 == 1) gauss += kWg[j / 2] * pair;
  }
  if (!std::isfinite(kronrod)) {
    throw QuadratureError("integrate: integrand is not finite on the interval");
  }
  const double mean = 0.5 * kronrod;
  double asc = kWgk[7] * std::fabs(fc - mean);
  for (std::size_t j = 0; j < 7; ++j) {
    asc += kWgk[j] * (std::fabs(f1[j] - mean) + std::fabs(f2[j] - mean));
  }
  asc *= std::fabs(half);
  double err = std::fabs((kronrod - gauss) * half);
  if (asc != 0.0 && err != 0.0) {
    err = asc * std::min(1.0, std::pow(200.0 * err / asc, 1.5));
  }
  const double resabs = abs_sum * std::fabs(half);
  const double roundoff = 50.0 * std::numeric_limits<double>::epsilon();
  if (resabs > std::numeric_limits<double>::min() / roundoff) {
    err = std::max(roundoff * resabs, err);
  }
  return {lo, hi, kronrod * half, err, depth};
}

}  // namespace

double log_gamma(double x) {
  if (!(x > 0.0) || std::isnan(x)) {
    throw DomainError("log_gamma: argument must be positive");
  }
  if (std::isinf(x)) return x;
  return boost::math::lgamma(x);
}

double log_beta(double a, double b) {
  return log_gamma(a) + log_gamma(b) - log_gamma(a + b);
}

double reg_inc_beta(double a, double b, double x) {
  check_shapes(a, b, "reg_inc_beta");
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("reg_inc_beta: x outside [0, 1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  if (use_direct_fraction(a, b, x)) return std::exp(log_lower_direct(a, b, std::log(x)));
  return 1.0 - reg_inc_beta_complement(a, b, x);
}

double reg_inc_beta_complement(double a, double b, double x) {
  check_shapes(a, b, "reg_inc_beta_complement");
  if (!(x >= 0.0 && x <= 1.0)) {
    throw DomainError("reg_inc_beta_complement: x outside [0, 1]");
  }
  if (x == 0.0) return 1.0;
  if (x == 1.0) return 0.0;
  if (use_direct_fraction(a, b, x)) return 1.0 - reg_inc_beta(a, b, x);
  // 1 - I_x(a, b) = I_{1-x}(b, a)
  const double y = 1.0 - x;
  return std::exp(log_lower_direct(b, a, std::log(y)));
}

double log_reg_inc_beta(double a, double b, double log_x) {
  check_shapes(a, b, "log_reg_inc_beta");
  if (!(log_x <= 0.0)) throw DomainError("log_reg_inc_beta: x outside [0, 1]");
  if (std::isinf(log_x)) return -std::numeric_limits<double>::infinity();
  const double x = std::exp(log_x);
  if (use_direct_fraction(a, b, x)) return log_lower_direct(a, b, log_x);
  return std::log1p(-reg_inc_beta_complement(a, b, x));
}

double beta_density(double a, double b, double x) {
  check_shapes(a, b, "beta_density");
  if (!(x > 0.0 && x < 1.0)) {
    if (x == 0.0 || x == 1.0) {
      const double e = (x == 0.0) ? a : b;
      if (e < 1.0) return std::numeric_limits<double>::infinity();
      if (e > 1.0) return 0.0;
      return std::exp(-log_beta(a, b));
    }
    return 0.0;
  }
  return std::exp((a - 1.0) * std::log(x) + (b - 1.0) * std::log1p(-x) -
                  log_beta(a, b));
}

namespace {

// When the residual is visible, step through adjacent doubles while that
// improves it. Near x = 1 the spacing of doubles is what limits accuracy.
template <typename Residual>
double polish_ulps(double x, Residual residual) {
  double err = std::fabs(residual(x));
  if (err <= 1e-12) return x;
  for (double toward : {0.0, 1.0}) {
    for (int step = 0; step < 64; ++step) {
      const double next = std::nextafter(x, toward);
      if (next == x) break;
      const double e = std::fabs(residual(next));
      if (!(e < err)) break;
      x = next;
      err = e;
    }
  }
  return x;
}

}  // namespace

double beta_quantile(double a, double b, double p) {
  check_shapes(a, b, "beta_quantile");
  check_probability(p, "beta_quantile");
  if (p == 0.0) return 0.0;
  if (p == 1.0) return 1.0;
  const double mean = a / (a + b);
  const double p_mean = reg_inc_beta(a, b, mean);
  double x;
  if (p <= p_mean) {
    x = lower_quantile_log(a, b, p, std::log(mean));
  } else {
    // Upper part: solve for y = 1 - x with I_y(b, a) = 1 - p.
    x = 1.0 - lower_quantile_log(b, a, 1.0 - p, std::log(b / (a + b)));
  }
  return polish_ulps(x, [&](double v) { return reg_inc_beta(a, b, v) - p; });
}

double beta_quantile_upper(double a, double b, double q) {
  check_shapes(a, b, "beta_quantile_upper");
  check_probability(q, "beta_quantile_upper");
  if (q == 0.0) return 1.0;
  if (q == 1.0) return 0.0;
  const double mean = a / (a + b);
  const double q_mean = reg_inc_beta_complement(a, b, mean);
  double x;
  if (q <= q_mean) {
    x = 1.0 - lower_quantile_log(b, a, q, std::log(b / (a + b)));
  } else {
    x = lower_quantile_log(a, b, 1.0 - q, std::log(mean));
  }
  return polish_ulps(x, [&](double v) { return reg_inc_beta_complement(a, b, v) - q; });
}

double find_root(const ScalarFunction& f, double lo, double hi, double tol) {
  if (!(lo <= hi)) throw BracketError("find_root: lo must not exceed hi");
  if (!(tol > 0.0)) throw DomainError("find_root: tolerance must be positive");
  const double flo = f(lo);
  const double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (std::isnan(flo) || std::isnan(fhi) || (flo > 0.0) == (fhi > 0.0)) {
    throw BracketError("find_root: f(lo) and f(hi) do not straddle zero");
  }
  if (hi - lo <= tol) return std::fabs(flo) <= std::fabs(fhi) ? lo : hi;

  std::uintmax_t max_iter = 500;
  auto width_ok = [tol](double a, double b) { return std::fabs(b - a) <= tol; };
  const auto bracket = boost::math::tools::toms748_solve(
      [&f](double x) { return f(x); }, lo, hi, flo, fhi, width_ok, max_iter);
  if (bracket.first == bracket.second) return bracket.first;
  const double mid = 0.5 * (bracket.first + bracket.second);
  return mid;
}

double integrate(const ScalarFunction& f, double lo, double hi,
                 const QuadratureSpec& spec) {
  if (!(spec.rel_tol > 0.0) || !(spec.abs_tol > 0.0)) {
    throw DomainError("integrate: tolerances must be positive");
  }
  if (std::isnan(lo) || std::isnan(hi) || std::isinf(lo) || std::isinf(hi)) {
    throw DomainError("integrate: limits must be finite");
  }
  if (lo == hi) return 0.0;
  if (lo > hi) return -integrate(f, hi, lo, spec);

  auto tolerance = [&spec](double value) {
    return std::max(spec.abs_tol, spec.rel_tol * std::fabs(value));
  };

  Panel first = gauss_kronrod_15(f, lo, hi, 0);
  if (first.error <= tolerance(first.value)) return first.value;

  std::priority_queue<Panel> active;
  std::vector<Panel> settled;
  active.push(first);
  double total = first.value;
  double total_err = first.error;
  constexpr std::size_t kMaxPanels = 200000;
  std::size_t panels = 1;

  while (!active.empty() && total_err > tolerance(total)) {
    Panel worst = active.top();
    active.pop();
    if (worst.depth >= spec.max_depth) {
      settled.push_back(worst);
      continue;
    }
    const double mid = 0.5 * (worst.lo + worst.hi);
    Panel left = gauss_kronrod_15(f, worst.lo, mid, worst.depth + 1);
    Panel right = gauss_kronrod_15(f, mid, worst.hi, worst.depth + 1);
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    active.push(left);
    active.push(right);
    if (++panels > kMaxPanels) break;
  }

  // Re-sum from the panels to avoid drift in the running totals.
  double sum = 0.0;
  double comp = 0.0;
  double err = 0.0;
  auto add = [&](const Panel& p) {
    const double t = sum + p.value;
    comp += (std::fabs(sum) >= std::fabs(p.value)) ? (sum - t) + p.value
                                                    : (p.value - t) + sum;
    sum = t;
    err += p.error;
  };
  for (const auto& p : settled) add(p);
  while (!active.empty()) {
    add(active.top());
    active.pop();
  }
  sum += comp;
  if (err > tolerance(sum)) {
    throw QuadratureError("integrate: tolerance not reached within max_depth");
  }
  return sum;
}

}  // namespace bpsim
