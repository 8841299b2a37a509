#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <numbers>
#include <string>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>

#include "lpbm/core/estimate.hpp"
#include "lpbm/core/rng.hpp"
#include "lpbm/functionals/steiner.hpp"
#include "lpbm/functionals/u_function.hpp"
#include "lpbm/geometry/body.hpp"
#include "lpbm/solver/distance.hpp"

namespace lpbm {

// sum_j V_j(K) from the Steiner fit against the unit ball.
inline Estimate wills_steiner(const Body& K, const SteinerOptions& opt = {}) {
  const int n = K.dim();
  const SteinerFit fit = quermassintegrals_fit(K, Body::ball(Vector(n), 1.0), {}, opt);
  Eigen::VectorXd g(n + 1);
  double w = 0.0;
  for (int i = 0; i <= n; ++i) {
    g(i) = binomial(n, i) / kappa(i);
    w += g(i) * fit.W[static_cast<std::size_t>(i)];
  }
  Estimate e = Estimate::exact(w);
  if (fit.volumes.front().method != Method::exact) {
    e.method = Method::mc;
    e.std_error = std::sqrt(std::max(0.0, double(g.transpose() * fit.cov * g)));
    e.n_samples = fit.volumes.front().n_samples;
  }
  return e;
}

// sum_i binom(n,i) W_i(K;E) omega_i with omega_i the u-weights.
inline Estimate generalized_wills_identity(const Body& K, const Body& E, const UFunction& u, const SteinerOptions& opt = {}) {
  const int n = K.dim();
  const SteinerFit fit = quermassintegrals_fit(K, E, {}, opt);
  Eigen::VectorXd g(n + 1);
  double w = 0.0;
  for (int i = 0; i <= n; ++i) {
    g(i) = binomial(n, i) * wills_weight(u, i);
    w += g(i) * fit.W[static_cast<std::size_t>(i)];
  }
  Estimate e = Estimate::exact(w);
  if (fit.volumes.front().method != Method::exact) {
    e.method = Method::mc;
    e.std_error = std::sqrt(std::max(0.0, double(g.transpose() * fit.cov * g)));
    e.n_samples = fit.volumes.front().n_samples;
  }
  return e;
}

namespace detail {

// x -> d_E(x, K), picking the cheapest exact evaluator for the pair.
inline std::function<double(const Vector&)> gauge_field(const Body& K, const Body& E) {
  if (E.is_ball() && norm2(E.as_ball().center) == 0.0) {
    return [K, r = E.as_ball().radius](const Vector& x) { return euclidean_distance(x, K) / r; };
  }
  if (K.is_polytope() && E.is_polytope() && K.dim() <= 3) {
    auto f = std::make_shared<GaugeDistanceField>(K, E);
    return [f](const Vector& x) { return (*f)(x); };
  }
  return [K, E](const Vector& x) { return gauge_distance(x, K, E); };
}

// Radius of the largest origin-centered ball inside E.
inline double origin_inradius(const Body& E) {
  if (E.is_ball()) return E.as_ball().radius - norm(E.as_ball().center);
  const HullData& h = E.hull();
  if (!h.full_dimensional() || h.facets.empty()) throw FunctionalError("gauge body: needs facets (n <= 3)");
  double r = std::numeric_limits<double>::infinity();
  for (const auto& f : h.facets) r = std::min(r, f.offset);
  return r;
}

struct TailPlan {
  double radius = 0.0;
  double bound = 0.0;
};

// Smallest R on a 0.25 lattice whose exterior tail
//   int_R^inf u'(t) e^{-u(t)} vol(E) (a + t)^n dt
// is below rel * lower; K ⊂ aE after centering.
inline TailPlan tail_radius(const UFunction& u, int n, double a, double vol_e, double lower, double rel = 1e-6) {
  boost::math::quadrature::exp_sinh<double> integrator;
  for (double R = 0.25;; R += 0.25) {
    const double tail = integrator.integrate(
        [&](double t) {
          if (!std::isfinite(t)) return 0.0;
          const double du = u.derivative(t);
          return du > 0.0 ? std::exp(std::log(du) - u(t) + std::log(vol_e) + n * std::log(a + t)) : 0.0;
        },
        R,
        std::numeric_limits<double>::infinity());
    if (tail <= rel * lower) return {R, tail};
    if (R > 1e4) throw FunctionalError("tail radius: u grows too slowly");
  }
}

}  // namespace detail

// MC of int e^{-u(d_E(x,K))} dx over the box around K + R E, with the
// analytic exterior tail reported as bias_bound.
inline Estimate generalized_wills(const Body& K, const Body& E, const UFunction& u, std::uint64_t seed,
                                  std::int64_t n_samples) {
  const int n = K.dim();
  if (E.dim() != n) throw FunctionalError("generalized_wills: dimension mismatch");
  if (E.is_table() || K.is_table()) throw FunctionalError("generalized_wills: support tables are not supported");
  u.validate();
  const double rho = detail::origin_inradius(E);
  if (!(rho > 1e-12)) throw FunctionalError("generalized_wills: origin not interior to E");
  // Translation invariance: center K at its bounding-box center.
  const Body Kc = translate(K, -1.0 * detail::box_center(bounding_box(K)));
  const double a = detail::centered_radius(Kc) / rho;
  const double vol_e = has_exact_volume(E) ? volume_exact(E).value : kappa(n) * std::pow(circumradius(E), n);
  // K + E holds a translate of E, and d_E <= 1 there.
  const double lower = std::exp(-u(1.0)) * kappa(n) * std::pow(rho, n);
  const auto plan = detail::tail_radius(u, n, a, vol_e, lower);
  const Box bk = bounding_box(Kc), be = bounding_box(E);
  const Box box{bk.lo + plan.radius * be.lo, bk.hi + plan.radius * be.hi};
  const auto d = detail::gauge_field(Kc, E);
  Stream rng(seed, 0x3177);
  double s = 0.0, ss = 0.0;
  for (std::int64_t i = 0; i < n_samples; ++i) {
    const double f = std::exp(-u(d(rng.uniform_in_box(box))));
    s += f;
    ss += f * f;
  }
  Estimate e = Estimate::from_sums(s, ss, n_samples).scaled(box.volume());
  e.bias_bound = plan.bound;
  return e;
}

// Hadwiger: W(K) = int e^{-pi d(x,K)^2} dx.
inline Estimate wills_hadwiger(const Body& K, std::uint64_t seed, std::int64_t n_samples) {
  return generalized_wills(K, Body::ball(Vector(K.dim()), 1.0), UFunction::quadratic(), seed, n_samples);
}

struct WeightsIdentityReport {
  Estimate integral;  // MC of W_u(K;E)
  Estimate identity;  // Steiner-weighted sum
  double discrepancy = 0.0;
  double discrepancy_sigma = 0.0;  // in combined-error units
};

inline WeightsIdentityReport weights_identity_check(const Body& K, const Body& E, const UFunction& u, std::uint64_t seed,
                                                    std::int64_t n_samples, const SteinerOptions& opt = {}) {
  WeightsIdentityReport r;
  r.integral = generalized_wills(K, E, u, seed, n_samples);
  r.identity = generalized_wills_identity(K, E, u, opt);
  r.discrepancy = r.integral.value - r.identity.value;
  const double sigma = std::hypot(r.integral.std_error, r.identity.std_error);
  const double band = sigma + r.integral.bias_bound + r.identity.bias_bound;
  r.discrepancy_sigma = band > 0.0 ? std::abs(r.discrepancy) / band : (r.discrepancy == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
  return r;
}

}  // namespace lpbm
