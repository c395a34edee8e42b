#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace bpsim {

/// Named parametric families for the concentration c(t) and the cumulative
/// hazard A0(t). Serialized as {"family": name, "params": [...]}.
enum class Family {
  constant,          // [v]            v
  exp_decay,         // [c0, r]        c0 * exp(-r t)
  linear,            // [a]            a * t
  power,             // [a, b]         a * t^b
  exp_cdf,           // [a, r]         a * (1 - exp(-r t))
  piecewise_linear,  // [t0, v0, t1, v1, ...] knots, flat outside
};

std::string_view family_name(Family f);
Family family_from_name(std::string_view name);
/// Every family name, in declaration order (used by help text).
std::vector<std::string> family_names();

class ParamFunction {
 public:
  ParamFunction(Family family, std::vector<double> params);

  static ParamFunction constant(double v) { return {Family::constant, {v}}; }
  static ParamFunction exp_decay(double c0, double r) {
    return {Family::exp_decay, {c0, r}};
  }
  static ParamFunction linear(double a) { return {Family::linear, {a}}; }
  static ParamFunction power(double a, double b) {
    return {Family::power, {a, b}};
  }
  static ParamFunction exp_cdf(double a, double r) {
    return {Family::exp_cdf, {a, r}};
  }

  Family family() const noexcept { return family_; }
  const std::vector<double>& params() const noexcept { return params_; }

  double operator()(double t) const;
  double derivative(double t) const;

  /// Closed-form solution of f(t) = y when the family has one and f is
  /// strictly increasing; nullopt otherwise.
  std::optional<double> analytic_inverse(double y) const;

  /// Interior points where the derivative may jump.
  std::vector<double> kinks() const;

  bool operator==(const ParamFunction&) const = default;

 private:
  Family family_;
  std::vector<double> params_;
};

void to_json(nlohmann::json& j, const ParamFunction& f);
void from_json(const nlohmann::json& j, ParamFunction& f);
ParamFunction param_function_from_json(const nlohmann::json& j);

/// Beta process BP(c, A0) on [0, t0].
class BetaProcessParams {
 public:
  /// Throws DomainError unless c > 0 on [0, t0], A0(0) = 0, A0 is
  /// nondecreasing and A0(t0) is finite and positive.
  BetaProcessParams(ParamFunction c, ParamFunction A0, double t0);

  const ParamFunction& c() const noexcept { return c_; }
  const ParamFunction& A0() const noexcept { return A0_; }
  double t0() const noexcept { return t0_; }
  double A0_total() const noexcept { return A0_total_; }

  double concentration(double t) const { return c_(t); }
  double hazard(double t) const { return A0_(t); }

  /// Integral of f(z) dA0(z) over [lo, hi], split at the kinks of A0 and c.
  double integrate_hazard(const std::function<double(double)>& f, double lo,
                          double hi) const;

  /// c(t) = 2 exp(-t), A0(t) = t on [0, 1].
  static BetaProcessParams reference_experiment();
  bool is_reference_experiment() const;

 private:
  ParamFunction c_;
  ParamFunction A0_;
  double t0_;
  double A0_total_;
};

void to_json(nlohmann::json& j, const BetaProcessParams& p);
BetaProcessParams beta_process_params_from_json(const nlohmann::json& j);

}  // namespace bpsim
