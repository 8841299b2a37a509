#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "lpbm/core/error.hpp"
#include "lpbm/core/rng.hpp"
#include "lpbm/core/vector.hpp"

namespace lpbm {

// Volume of the unit ball, pi^{n/2} / Gamma(n/2 + 1).
inline double kappa(int n) {
  if (n == 0) return 1.0;
  return std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

inline double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

inline double std_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

// Closed-form density families. Values are unnormalized where noted;
// `mass()` gives the total integral.
//
//   one-dimensional (product axes):
//     gaussian(sigma)           N(0, sigma^2) density
//     laplace(b)                e^{-|x|/b} / (2b)
//     indicator_interval(a, b)  1 on [a, b]
//     indicator_union(a,b,c,d)  1 on [a,b] ∪ [c,d]   (not convex; probe target)
//   n-dimensional (radial):
//     gaussian(sigma)           N(0, sigma^2 I) density
//     exp_norm(s)               e^{-|x|/s}
//     power_cap(beta)           (1 - |x|^2)_+^{1/beta}
//     norm_on_ball()            |x| on the unit ball   (increasing; probe target)
enum class Family { gaussian, laplace, indicator_interval, indicator_union, exp_norm, power_cap, norm_on_ball };

inline std::optional<Family> family_from_string(const std::string& s) {
  if (s == "gaussian") return Family::gaussian;
  if (s == "laplace") return Family::laplace;
  if (s == "indicator_interval") return Family::indicator_interval;
  if (s == "indicator_union") return Family::indicator_union;
  if (s == "exp_norm") return Family::exp_norm;
  if (s == "power_cap") return Family::power_cap;
  if (s == "norm_on_ball") return Family::norm_on_ball;
  return std::nullopt;
}

inline std::string to_string(Family f) {
  switch (f) {
    case Family::gaussian: return "gaussian";
    case Family::laplace: return "laplace";
    case Family::indicator_interval: return "indicator_interval";
    case Family::indicator_union: return "indicator_union";
    case Family::exp_norm: return "exp_norm";
    case Family::power_cap: return "power_cap";
    case Family::norm_on_ball: return "norm_on_ball";
  }
  return "?";
}

struct Density {
  Family family = Family::gaussian;
  int dim = 1;
  std::vector<double> params;

  static Density make(Family f, int dim, std::vector<double> params = {}) {
    Density d{f, dim, std::move(params)};
    d.validate();
    return d;
  }

  double param(std::size_t i, double dflt) const { return i < params.size() ? params[i] : dflt; }

  void validate() const {
    if (dim < 1 || dim > kMaxDim) throw MeasureError("density: unsupported dimension");
    switch (family) {
      case Family::gaussian:
        if (!(param(0, 1.0) > 0.0)) throw MeasureError("density gaussian: sigma must be positive");
        break;
      case Family::laplace:
        if (dim != 1 || !(param(0, 1.0) > 0.0)) throw MeasureError("density laplace: one-dimensional, b > 0");
        break;
      case Family::indicator_interval:
        if (dim != 1 || params.size() != 2 || !(params[1] > params[0])) throw MeasureError("density indicator_interval: needs a < b");
        break;
      case Family::indicator_union:
        if (dim != 1 || params.size() != 4 || !(params[0] < params[1] && params[1] <= params[2] && params[2] < params[3])) {
          throw MeasureError("density indicator_union: needs a < b <= c < d");
        }
        break;
      case Family::exp_norm:
        if (!(param(0, 1.0) > 0.0)) throw MeasureError("density exp_norm: scale must be positive");
        break;
      case Family::power_cap:
        if (!(param(0, 1.0) > 0.0)) throw MeasureError("density power_cap: beta must be positive");
        break;
      case Family::norm_on_ball: break;
    }
  }

  double operator()(const Vector& x) const {
    const double r2 = norm2(x);
    switch (family) {
      case Family::gaussian: {
        const double s = param(0, 1.0);
        return std::exp(-0.5 * r2 / (s * s)) / std::pow(s * std::sqrt(2.0 * std::numbers::pi), dim);
      }
      case Family::laplace: {
        const double b = param(0, 1.0);
        return std::exp(-std::abs(x[0]) / b) / (2.0 * b);
      }
      case Family::indicator_interval: return x[0] >= params[0] && x[0] <= params[1] ? 1.0 : 0.0;
      case Family::indicator_union:
        return (x[0] >= params[0] && x[0] <= params[1]) || (x[0] >= params[2] && x[0] <= params[3]) ? 1.0 : 0.0;
      case Family::exp_norm: return std::exp(-std::sqrt(r2) / param(0, 1.0));
      case Family::power_cap: return r2 < 1.0 ? std::pow(1.0 - r2, 1.0 / param(0, 1.0)) : 0.0;
      case Family::norm_on_ball: return r2 <= 1.0 ? std::sqrt(r2) : 0.0;
    }
    return 0.0;
  }

  double mass() const {
    switch (family) {
      case Family::gaussian:
      case Family::laplace: return 1.0;
      case Family::indicator_interval: return params[1] - params[0];
      case Family::indicator_union: return (params[1] - params[0]) + (params[3] - params[2]);
      case Family::exp_norm: return std::tgamma(dim + 1.0) * kappa(dim) * std::pow(param(0, 1.0), dim);
      case Family::power_cap: {
        const double b = param(0, 1.0);
        return kappa(dim) * std::tgamma(1.0 / b + 1.0) * std::tgamma(0.5 * dim + 1.0) / std::tgamma(1.0 / b + 0.5 * dim + 1.0);
      }
      case Family::norm_on_ball: return dim * kappa(dim) / (dim + 1.0);
    }
    return 0.0;
  }

  // Largest radius of the support (infinite for unbounded families).
  double support_radius() const {
    switch (family) {
      case Family::power_cap:
      case Family::norm_on_ball: return 1.0;
      case Family::indicator_interval: return std::max(std::abs(params[0]), std::abs(params[1]));
      case Family::indicator_union: return std::max(std::abs(params[0]), std::abs(params[3]));
      default: return std::numeric_limits<double>::infinity();
    }
  }

  // Draw from density / mass.
  Vector sample(Stream& rng) const {
    switch (family) {
      case Family::gaussian: return rng.normal_vector(dim) * param(0, 1.0);
      case Family::laplace: {
        const double e = rng.exponential() * param(0, 1.0);
        return Vector{rng.uniform() < 0.5 ? -e : e};
      }
      case Family::indicator_interval: return Vector{rng.uniform(params[0], params[1])};
      case Family::indicator_union: {
        const double l1 = params[1] - params[0];
        const double u = rng.uniform() * mass();
        return Vector{u < l1 ? params[0] + u : params[2] + (u - l1)};
      }
      case Family::exp_norm: {
        // |x| ~ Gamma(n, s), direction uniform.
        const double r = rng.gamma(dim) * param(0, 1.0);
        return rng.unit_vector(dim) * r;
      }
      case Family::power_cap: {
        // |x|^2 ~ Beta(n/2, 1 + 1/beta).
        const double r2 = rng.beta(0.5 * dim, 1.0 + 1.0 / param(0, 1.0));
        return rng.unit_vector(dim) * std::sqrt(r2);
      }
      case Family::norm_on_ball: {
        const double r = std::pow(rng.uniform_pos(), 1.0 / (dim + 1.0));
        return rng.unit_vector(dim) * r;
      }
    }
    return Vector(dim);
  }

  // Integral over [a, b] (one-dimensional families).
  double interval_mass(double a, double b) const {
    if (dim != 1) throw MeasureError("interval_mass: one-dimensional densities only");
    if (b <= a) return 0.0;
    auto clip = [&](double lo, double hi) { return std::max(0.0, std::min(b, hi) - std::max(a, lo)); };
    switch (family) {
      case Family::gaussian: {
        const double s = param(0, 1.0);
        return std_normal_cdf(b / s) - std_normal_cdf(a / s);
      }
      case Family::laplace: {
        const double s = param(0, 1.0);
        auto cdf = [s](double x) { return x < 0 ? 0.5 * std::exp(x / s) : 1.0 - 0.5 * std::exp(-x / s); };
        return cdf(b) - cdf(a);
      }
      case Family::indicator_interval: return clip(params[0], params[1]);
      case Family::indicator_union: return clip(params[0], params[1]) + clip(params[2], params[3]);
      default: break;
    }
    throw MeasureError("interval_mass: unsupported family");
  }

  std::string describe() const {
    std::string s = to_string(family) + "(";
    for (std::size_t i = 0; i < params.size(); ++i) s += (i ? "," : "") + std::to_string(params[i]);
    return s + ")";
  }
};

// A measure on R^n.
struct MeasureSpec {
  enum class Kind { lebesgue, gaussian, product, radial };
  Kind kind = Kind::gaussian;
  int dim = 2;
  std::vector<Density> axes;  // product
  Density radial;             // radial

  static MeasureSpec lebesgue(int n) { return MeasureSpec{Kind::lebesgue, n, {}, {}}; }
  static MeasureSpec gaussian(int n) { return MeasureSpec{Kind::gaussian, n, {}, Density::make(Family::gaussian, n, {1.0})}; }
  static MeasureSpec product(std::vector<Density> axes) {
    const int n = static_cast<int>(axes.size());
    for (const auto& a : axes) {
      if (a.dim != 1) throw MeasureError("product measure: axis densities must be one-dimensional");
    }
    return MeasureSpec{Kind::product, n, std::move(axes), {}};
  }
  static MeasureSpec with_density(Density d) {
    const int n = d.dim;
    return MeasureSpec{Kind::radial, n, {}, std::move(d)};
  }

  double density(const Vector& x) const {
    switch (kind) {
      case Kind::lebesgue: return 1.0;
      case Kind::gaussian:
      case Kind::radial: return radial(x);
      case Kind::product: {
        double f = 1.0;
        for (int a = 0; a < dim; ++a) f *= axes[static_cast<std::size_t>(a)](Vector{x[a]});
        return f;
      }
    }
    return 0.0;
  }

  // Total mass (infinite for Lebesgue).
  double mass() const {
    switch (kind) {
      case Kind::lebesgue: return std::numeric_limits<double>::infinity();
      case Kind::gaussian: return 1.0;
      case Kind::radial: return radial.mass();
      case Kind::product: {
        double m = 1.0;
        for (const auto& a : axes) m *= a.mass();
        return m;
      }
    }
    return 0.0;
  }

  Vector sample(Stream& rng) const {
    switch (kind) {
      case Kind::gaussian: return rng.normal_vector(dim);
      case Kind::radial: return radial.sample(rng);
      case Kind::product: {
        Vector x(dim);
        for (int a = 0; a < dim; ++a) x[a] = axes[static_cast<std::size_t>(a)].sample(rng)[0];
        return x;
      }
      case Kind::lebesgue: break;
    }
    throw MeasureError("MeasureSpec::sample: Lebesgue measure has no sampler");
  }

  std::string describe() const {
    switch (kind) {
      case Kind::lebesgue: return "lebesgue";
      case Kind::gaussian: return "gaussian";
      case Kind::radial: return radial.describe();
      case Kind::product: {
        std::string s = "product[";
        for (std::size_t i = 0; i < axes.size(); ++i) s += (i ? "," : "") + axes[i].describe();
        return s + "]";
      }
    }
    return "?";
  }
};

struct ProbeResult {
  bool holds = true;
  int probes = 0;
  int violations = 0;
  double worst = 0.0;
  std::vector<Vector> witness;  // first violating configuration
};

// f(t x) <= f(x) + eps for t in (1, t_max], |x| up to the support radius.
inline ProbeResult is_radially_decreasing(const Density& f, int budget, std::uint64_t seed, double t_max = 3.0,
                                          double eps = 1e-12) {
  Stream rng(seed, 0x7ad);
  ProbeResult r;
  const double R = std::min(f.support_radius(), 6.0);
  for (int k = 0; k < budget; ++k) {
    // Points off the support count too: f(x) = 0 < f(tx) is a violation.
    Vector x = rng.unit_vector(f.dim) * (R * rng.uniform());
    const double t = 1.0 + (t_max - 1.0) * rng.uniform_pos();
    ++r.probes;
    const double gap = f(x * t) - f(x);
    if (gap > eps) {
      ++r.violations;
      if (gap > r.worst) {
        r.worst = gap;
        r.witness = {x, Vector{t}};
      }
    }
  }
  r.holds = r.violations == 0;
  return r;
}

// beta-concavity (beta = 0 means log-concavity) on random chords.
inline ProbeResult is_beta_concave(const Density& f, double beta, int budget, std::uint64_t seed, double eps = 1e-10) {
  Stream rng(seed, 0xbc0);
  ProbeResult r;
  const double R = std::min(f.support_radius(), 6.0);
  for (int k = 0; k < budget; ++k) {
    const Vector x = rng.unit_vector(f.dim) * (R * std::pow(rng.uniform(), 1.0 / f.dim));
    const Vector y = rng.unit_vector(f.dim) * (R * std::pow(rng.uniform(), 1.0 / f.dim));
    const double fx = f(x), fy = f(y);
    if (!(fx > 0.0 && fy > 0.0)) continue;
    const double l = rng.uniform_pos() * 0.999;
    const double fm = f((1.0 - l) * x + l * y);
    const double bound = beta == 0.0 ? std::pow(fx, 1.0 - l) * std::pow(fy, l)
                                     : std::pow((1.0 - l) * std::pow(fx, beta) + l * std::pow(fy, beta), 1.0 / beta);
    ++r.probes;
    const double gap = bound - fm;
    if (gap > eps * std::max(1.0, bound)) {
      ++r.violations;
      if (gap > r.worst) {
        r.worst = gap;
        r.witness = {x, y, Vector{l}};
      }
    }
  }
  r.holds = r.violations == 0;
  return r;
}

}  // namespace lpbm
