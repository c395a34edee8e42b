#include "bpsim/param_function.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <utility>

#include "bpsim/error.hpp"
#include "bpsim/special.hpp"

namespace bpsim {

namespace {

constexpr std::array<std::pair<Family, std::string_view>, 6> kFamilies = {{
    {Family::constant, "constant"},
    {Family::exp_decay, "exp_decay"},
    {Family::linear, "linear"},
    {Family::power, "power"},
    {Family::exp_cdf, "exp_cdf"},
    {Family::piecewise_linear, "piecewise_linear"},
}};

std::size_t expected_arity(Family f) {
  switch (f) {
    case Family::constant:
    case Family::linear:
      return 1;
    case Family::exp_decay:
    case Family::power:
    case Family::exp_cdf:
      return 2;
    case Family::piecewise_linear:
      return 0;
  }
  return 0;
}

}  // namespace

std::string_view family_name(Family f) {
  for (const auto& [family, name] : kFamilies) {
    if (family == f) return name;
  }
  return "unknown";
}

Family family_from_name(std::string_view name) {
  for (const auto& [family, n] : kFamilies) {
    if (n == name) return family;
  }
  throw ConfigError("unknown parameter family '" + std::string(name) + "'");
}

std::vector<std::string> family_names() {
  std::vector<std::string> out;
  for (const auto& entry : kFamilies) out.emplace_back(entry.second);
  return out;
}

ParamFunction::ParamFunction(Family family, std::vector<double> params)
    : family_(family), params_(std::move(params)) {
  for (double v : params_) {
    if (!std::isfinite(v)) throw DomainError("parameter values must be finite");
  }
  if (family_ == Family::piecewise_linear) {
    if (params_.size() < 4 || params_.size() % 2 != 0) {
      throw DomainError("piecewise_linear needs at least two (t, value) pairs");
    }
    for (std::size_t i = 2; i < params_.size(); i += 2) {
      if (!(params_[i] > params_[i - 2])) {
        throw DomainError("piecewise_linear knots must be strictly increasing");
      }
    }
  } else if (params_.size() != expected_arity(family_)) {
    throw DomainError(std::string(family_name(family_)) + " expects " +
                      std::to_string(expected_arity(family_)) + " parameters");
  }
}

double ParamFunction::operator()(double t) const {
  const auto& p = params_;
  switch (family_) {
    case Family::constant:
      return p[0];
    case Family::exp_decay:
      return p[0] * std::exp(-p[1] * t);
    case Family::linear:
      return p[0] * t;
    case Family::power:
      return t <= 0.0 ? 0.0 : p[0] * std::pow(t, p[1]);
    case Family::exp_cdf:
      return -p[0] * std::expm1(-p[1] * t);
    case Family::piecewise_linear: {
      const std::size_t knots = p.size() / 2;
      if (t <= p[0]) return p[1];
      if (t >= p[2 * (knots - 1)]) return p[2 * knots - 1];
      std::size_t k = 1;
      while (p[2 * k] < t) ++k;
      const double t0 = p[2 * (k - 1)], v0 = p[2 * (k - 1) + 1];
      const double t1 = p[2 * k], v1 = p[2 * k + 1];
      return v0 + (v1 - v0) * (t - t0) / (t1 - t0);
    }
  }
  return 0.0;
}

double ParamFunction::derivative(double t) const {
  const auto& p = params_;
  switch (family_) {
    case Family::constant:
      return 0.0;
    case Family::exp_decay:
      return -p[0] * p[1] * std::exp(-p[1] * t);
    case Family::linear:
      return p[0];
    case Family::power:
      return t <= 0.0 ? (p[1] == 1.0 ? p[0] : 0.0)
                      : p[0] * p[1] * std::pow(t, p[1] - 1.0);
    case Family::exp_cdf:
      return p[0] * p[1] * std::exp(-p[1] * t);
    case Family::piecewise_linear: {
      const std::size_t knots = p.size() / 2;
      if (t < p[0] || t >= p[2 * (knots - 1)]) return 0.0;
      std::size_t k = 1;
      while (p[2 * k] <= t) ++k;
      return (p[2 * k + 1] - p[2 * (k - 1) + 1]) / (p[2 * k] - p[2 * (k - 1)]);
    }
  }
  return 0.0;
}

std::optional<double> ParamFunction::analytic_inverse(double y) const {
  const auto& p = params_;
  switch (family_) {
    case Family::linear:
      if (p[0] > 0.0) return y / p[0];
      return std::nullopt;
    case Family::power:
      if (p[0] > 0.0 && p[1] > 0.0) {
        return y <= 0.0 ? 0.0 : std::pow(y / p[0], 1.0 / p[1]);
      }
      return std::nullopt;
    case Family::exp_cdf:
      if (p[0] * p[1] > 0.0 && y / p[0] < 1.0) {
        return -std::log1p(-y / p[0]) / p[1];
      }
      return std::nullopt;
    case Family::piecewise_linear: {
      const std::size_t knots = p.size() / 2;
      for (std::size_t k = 1; k < knots; ++k) {
        if (!(p[2 * k + 1] > p[2 * k - 1])) return std::nullopt;
      }
      if (y <= p[1]) return p[0];
      for (std::size_t k = 1; k < knots; ++k) {
        const double v1 = p[2 * k + 1];
        if (y <= v1) {
          const double t0 = p[2 * (k - 1)], v0 = p[2 * (k - 1) + 1];
          return t0 + (y - v0) * (p[2 * k] - t0) / (v1 - v0);
        }
      }
      return p[2 * (knots - 1)];
    }
    case Family::constant:
    case Family::exp_decay:
      return std::nullopt;
  }
  return std::nullopt;
}

std::vector<double> ParamFunction::kinks() const {
  std::vector<double> out;
  if (family_ == Family::piecewise_linear) {
    for (std::size_t i = 0; i < params_.size(); i += 2) out.push_back(params_[i]);
  }
  return out;
}

void to_json(nlohmann::json& j, const ParamFunction& f) {
  j = nlohmann::json{{"family", std::string(family_name(f.family()))},
                     {"params", f.params()}};
}

ParamFunction param_function_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("family") || !j.contains("params")) {
    throw ConfigError("parameter function needs 'family' and 'params'");
  }
  if (!j["family"].is_string() || !j["params"].is_array()) {
    throw ConfigError("parameter function: 'family' must be a string and "
                      "'params' an array");
  }
  std::vector<double> params;
  for (const auto& v : j["params"]) {
    if (!v.is_number()) throw ConfigError("parameter function: non-numeric param");
    params.push_back(v.get<double>());
  }
  try {
    return ParamFunction(family_from_name(j["family"].get<std::string>()),
                         std::move(params));
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
}

void from_json(const nlohmann::json& j, ParamFunction& f) {
  f = param_function_from_json(j);
}

BetaProcessParams::BetaProcessParams(ParamFunction c, ParamFunction A0,
                                     double t0)
    : c_(std::move(c)), A0_(std::move(A0)), t0_(t0), A0_total_(0.0) {
  if (!(t0_ > 0.0) || !std::isfinite(t0_)) {
    throw DomainError("t0 must be positive and finite");
  }
  if (std::fabs(A0_(0.0)) > 1e-12) throw DomainError("A0(0) must be 0");
  A0_total_ = A0_(t0_);
  if (!(A0_total_ > 0.0) || !std::isfinite(A0_total_)) {
    throw DomainError("A0(t0) must be finite and positive");
  }

  // The families are monotone between kinks, so a grid plus the kinks
  // catches every sign change of c and every decrease of A0.
  std::vector<double> points;
  constexpr int kGrid = 256;
  for (int i = 0; i <= kGrid; ++i) points.push_back(t0_ * i / kGrid);
  for (double k : c_.kinks()) {
    if (k > 0.0 && k < t0_) points.push_back(k);
  }
  for (double k : A0_.kinks()) {
    if (k > 0.0 && k < t0_) points.push_back(k);
  }
  std::sort(points.begin(), points.end());
  double previous = A0_(0.0);
  for (double t : points) {
    if (!(c_(t) > 0.0)) throw DomainError("c(t) must be positive on [0, t0]");
    const double a = A0_(t);
    if (a < previous) throw DomainError("A0 must be nondecreasing on [0, t0]");
    previous = a;
  }
}

double BetaProcessParams::integrate_hazard(
    const std::function<double(double)>& f, double lo, double hi) const {
  std::vector<double> cuts{lo, hi};
  for (double k : c_.kinks()) {
    if (k > lo && k < hi) cuts.push_back(k);
  }
  for (double k : A0_.kinks()) {
    if (k > lo && k < hi) cuts.push_back(k);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  auto integrand = [&](double z) { return f(z) * A0_.derivative(z); };
  double total = 0.0;
  for (std::size_t i = 1; i < cuts.size(); ++i) {
    total += integrate(integrand, cuts[i - 1], cuts[i]);
  }
  return total;
}

BetaProcessParams BetaProcessParams::reference_experiment() {
  return {ParamFunction::exp_decay(2.0, 1.0), ParamFunction::linear(1.0), 1.0};
}

bool BetaProcessParams::is_reference_experiment() const {
  return c_ == ParamFunction::exp_decay(2.0, 1.0) &&
         A0_ == ParamFunction::linear(1.0) && t0_ == 1.0;
}

void to_json(nlohmann::json& j, const BetaProcessParams& p) {
  j = nlohmann::json{{"c", p.c()}, {"A0", p.A0()}, {"t0", p.t0()}};
}

BetaProcessParams beta_process_params_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("params must be an object");
  for (const char* key : {"c", "A0", "t0"}) {
    if (!j.contains(key)) {
      throw ConfigError(std::string("params: missing field '") + key + "'");
    }
  }
  if (!j["t0"].is_number()) throw ConfigError("params: 't0' must be a number");
  auto c = param_function_from_json(j["c"]);
  auto A0 = param_function_from_json(j["A0"]);
  try {
    return BetaProcessParams(std::move(c), std::move(A0), j["t0"].get<double>());
  } catch (const DomainError& e) {
    throw ConfigError(std::string("params: ") + e.what());
  }
}

}  // namespace bpsim
