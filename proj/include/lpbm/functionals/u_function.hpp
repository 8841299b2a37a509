#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <string>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/tools/roots.hpp>

#include "lpbm/core/error.hpp"
#include "lpbm/core/rng.hpp"

namespace lpbm {

// Strictly increasing u : [0, inf) -> R for the generalized Wills functional.
//   affine(a, b)     u(t) = a t + b,   a > 0
//   quadratic(a, c)  u(t) = a t^2 + c, a > 0 (a = pi is the classical case)
//   power(k)         u(t) = t^k,       k >= 1
struct UFunction {
  enum class Kind { affine, quadratic, power };
  Kind kind = Kind::quadratic;
  double a = std::numbers::pi;
  double b = 0.0;

  static UFunction affine(double a, double b) { return make(Kind::affine, a, b); }
  static UFunction quadratic(double a = std::numbers::pi, double c = 0.0) { return make(Kind::quadratic, a, c); }
  static UFunction power(double k) { return make(Kind::power, k, 0.0); }

  static std::optional<Kind> kind_from_string(const std::string& s) {
    if (s == "affine") return Kind::affine;
    if (s == "quadratic") return Kind::quadratic;
    if (s == "power") return Kind::power;
    return std::nullopt;
  }

  static UFunction make(Kind k, double a, double b) {
    UFunction u{k, a, b};
    u.validate();
    return u;
  }

  // Integrability of e^{-u(d_E(x,K))} needs at least linear growth, which
  // every family has under its parameter constraints.
  void validate() const {
    if (!std::isfinite(a) || !std::isfinite(b)) throw FunctionalError("u: non-finite parameter");
    switch (kind) {
      case Kind::affine:
        if (!(a > 0.0)) throw FunctionalError("u affine: slope must be positive");
        break;
      case Kind::quadratic:
        if (!(a > 0.0)) throw FunctionalError("u quadratic: leading coefficient must be positive");
        break;
      case Kind::power:
        if (!(a >= 1.0)) throw FunctionalError("u power: exponent must be >= 1");
        break;
    }
  }

  double operator()(double t) const {
    switch (kind) {
      case Kind::affine: return a * t + b;
      case Kind::quadratic: return a * t * t + b;
      case Kind::power: return std::pow(t, a);
    }
    return 0.0;
  }

  double derivative(double t) const {
    switch (kind) {
      case Kind::affine: return a;
      case Kind::quadratic: return 2.0 * a * t;
      case Kind::power: return a * std::pow(t, a - 1.0);
    }
    return 0.0;
  }

  // u^{-1}(s) for s >= u(0), by bracketing root finding.
  double inverse(double s) const {
    const double u0 = (*this)(0.0);
    if (s <= u0) return 0.0;
    double hi = 1.0;
    while ((*this)(hi) < s) hi *= 2.0;
    std::uintmax_t iters = 200;
    const auto r = boost::math::tools::toms748_solve([&](double t) { return (*this)(t) - s; }, 0.0, hi,
                                                     boost::math::tools::eps_tolerance<double>(52), iters);
    return 0.5 * (r.first + r.second);
  }

  std::string describe() const {
    switch (kind) {
      case Kind::affine: return "affine(" + std::to_string(a) + "," + std::to_string(b) + ")";
      case Kind::quadratic: return "quadratic(" + std::to_string(a) + "," + std::to_string(b) + ")";
      case Kind::power: return "power(" + std::to_string(a) + ")";
    }
    return "?";
  }
};

// Random probe of strict monotonicity on [0, t_max].
inline bool probe_strictly_increasing(const UFunction& u, int budget, std::uint64_t seed, double t_max = 10.0) {
  Stream rng(seed, 0x0f);
  for (int k = 0; k < budget; ++k) {
    double s = rng.uniform(0.0, t_max), t = rng.uniform(0.0, t_max);
    if (s == t) continue;
    if (s > t) std::swap(s, t);
    if (!(u(s) < u(t))) return false;
  }
  return true;
}

// omega_i = integral_{u(0)}^inf u^{-1}(s)^i e^{-s} ds (adaptive exp-sinh
// quadrature, inverse by root finding).
inline double wills_weight(const UFunction& u, int i) {
  const double u0 = u(0.0);
  if (i == 0) return std::exp(-u0);
  boost::math::quadrature::exp_sinh<double> integrator;
  // Log form: far out the quadrature asks for s where r^i overflows.
  auto f = [&](double s) {
    if (!std::isfinite(s)) return 0.0;
    const double r = u.inverse(s);
    return r > 0.0 ? std::exp(i * std::log(r) - s) : 0.0;
  };
  return integrator.integrate(f, u0, std::numeric_limits<double>::infinity());
}

// Closed forms of the same weights (test oracles).
inline double wills_weight_closed_form(const UFunction& u, int i) {
  switch (u.kind) {
    case UFunction::Kind::affine: return std::exp(-u.b) * std::tgamma(i + 1.0) / std::pow(u.a, i);
    case UFunction::Kind::quadratic: return std::exp(-u.b) * std::tgamma(0.5 * i + 1.0) / std::pow(u.a, 0.5 * i);
    case UFunction::Kind::power: return std::tgamma(i / u.a + 1.0);
  }
  return 0.0;
}

}  // namespace lpbm
