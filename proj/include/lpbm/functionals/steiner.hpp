#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lpbm/core/estimate.hpp"
#include "lpbm/geometry/body.hpp"
#include "lpbm/measures/measure.hpp"
#include "lpbm/solver/distance.hpp"
#include "lpbm/solver/membership.hpp"

namespace lpbm {

enum class VolumeEngine { automatic, exact, monte_carlo };

struct SteinerOptions {
  VolumeEngine engine = VolumeEngine::automatic;
  std::uint64_t seed = 1;
  std::int64_t n_samples = 200000;
  double max_condition = 1e8;
};

// vol(K + tE) = sum_i binom(n,i) W_i(K;E) t^i, fitted from n+1 radii.
struct SteinerFit {
  std::optional<Body> gauge;
  std::vector<double> radii;
  std::vector<Estimate> volumes;
  std::vector<double> W;
  std::vector<double> W_err;
  Eigen::MatrixXd cov;  // covariance of W
  double condition = 0.0;
};

namespace detail {

inline Vector box_center(const Box& b) { return 0.5 * (b.lo + b.hi); }

// Radius of the smallest ball about the bounding-box center holding K.
inline double centered_radius(const Body& K) {
  const Vector c = box_center(bounding_box(K));
  if (K.is_ball()) return K.as_ball().radius;
  double r = 0.0;
  if (K.is_polytope()) {
    for (const auto& v : K.vertices()) r = std::max(r, distance(v, c));
    return r;
  }
  return circumradius(translate(K, -1.0 * c));
}

inline bool exact_parallel_volume_ok(const Body& K, const Body& E) {
  if (K.is_table() || E.is_table()) return false;
  if (K.dim() <= 3) return true;
  return K.is_ball() && E.is_ball();
}

// Hit-or-miss estimate of vol(K + tE).
inline Estimate parallel_volume_mc(const Body& K, const Body& E, double t, std::uint64_t seed, std::int64_t n) {
  const Box bk = bounding_box(K), be = bounding_box(E);
  const Box box{bk.lo + t * be.lo, bk.hi + t * be.hi};
  std::function<bool(const Vector&)> in;
  if (E.is_ball()) {
    const auto& b = E.as_ball();
    in = [&K, c = t * b.center, r = t * b.radius](const Vector& x) { return euclidean_distance(x - c, K) <= r; };
  } else if (K.is_ball()) {
    const auto& b = K.as_ball();
    const Body tE = scale(E, t);
    in = [tE, c = b.center, r = b.radius](const Vector& x) { return euclidean_distance(x - c, tE) <= r; };
  } else {
    in = [ind = BodyIndicator(minkowski_sum(K, scale(E, t)))](const Vector& x) { return ind(x); };
  }
  Stream rng(seed, 0x57e);
  double hits = 0.0;
  for (std::int64_t i = 0; i < n; ++i) hits += in(rng.uniform_in_box(box)) ? 1.0 : 0.0;
  return Estimate::from_sums(hits, hits, n).scaled(box.volume());
}

}  // namespace detail

// {0.25, 0.5, ..., (n+1)/4} in units of R_K / R_E (R = radius about the
// bounding-box center), so all Steiner terms have comparable size.
inline std::vector<double> default_steiner_radii(const Body& K, const Body& E) {
  const int n = K.dim();
  const double rk = detail::centered_radius(K);
  const double re = circumradius(E);
  if (!(re > 0.0)) throw FunctionalError("steiner: gauge body is degenerate");
  const double unit = (rk > 1e-12 ? rk : 1.0) / re;
  std::vector<double> r;
  for (int j = 1; j <= n + 1; ++j) r.push_back(0.25 * j * unit);
  return r;
}

inline SteinerFit quermassintegrals_fit(const Body& K, const Body& E, std::vector<double> radii = {},
                                        const SteinerOptions& opt = {}) {
  const int n = K.dim();
  if (E.dim() != n) throw FunctionalError("steiner: dimension mismatch");
  if (radii.empty()) radii = default_steiner_radii(K, E);
  if (static_cast<int>(radii.size()) != n + 1) throw FunctionalError("steiner: need exactly n+1 radii");
  for (std::size_t j = 0; j < radii.size(); ++j) {
    if (!(radii[j] > 0.0)) throw FunctionalError("steiner: radii must be positive");
    for (std::size_t k = 0; k < j; ++k) {
      if (radii[j] == radii[k]) throw FunctionalError("steiner: radii must be distinct");
    }
  }
  bool exact = opt.engine != VolumeEngine::monte_carlo && detail::exact_parallel_volume_ok(K, E);
  if (opt.engine == VolumeEngine::exact && !exact) throw FunctionalError("steiner: no exact volume engine for this pair");

  // Solve in the scaled variable tau = t / rho to keep the system balanced.
  double rho = 0.0;
  for (double t : radii) rho = std::max(rho, t);
  const int m = n + 1;
  Eigen::MatrixXd A(m, m);
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < m; ++i) A(j, i) = std::pow(radii[static_cast<std::size_t>(j)] / rho, i);
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A);
  const auto& sv = svd.singularValues();
  const double cond = sv(0) / sv(m - 1);
  if (!(cond <= opt.max_condition)) {
    throw FunctionalError("steiner: ill-conditioned radii (condition " + std::to_string(cond) + ")");
  }

  SteinerFit fit;
  fit.gauge = E;
  fit.radii = radii;
  fit.condition = cond;
  Eigen::VectorXd v(m);
  Eigen::VectorXd var = Eigen::VectorXd::Zero(m);
  for (int j = 0; j < m; ++j) {
    const double t = radii[static_cast<std::size_t>(j)];
    const Estimate e = exact ? Estimate::exact(relative_parallel_volume(K, E, t))
                             : detail::parallel_volume_mc(K, E, t, opt.seed + static_cast<std::uint64_t>(j), opt.n_samples);
    fit.volumes.push_back(e);
    v(j) = e.value;
    var(j) = e.std_error * e.std_error;
  }
  const Eigen::MatrixXd Ainv = A.fullPivLu().inverse();
  const Eigen::VectorXd c = Ainv * v;
  // c_i = binom(n,i) W_i rho^i.
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
  for (int i = 0; i < m; ++i) T(i, i) = 1.0 / (binomial(n, i) * std::pow(rho, i));
  const Eigen::MatrixXd G = T * Ainv;
  fit.cov = G * var.asDiagonal() * G.transpose();
  for (int i = 0; i < m; ++i) {
    fit.W.push_back(c(i) * T(i, i));
    fit.W_err.push_back(std::sqrt(std::max(0.0, fit.cov(i, i))));
  }
  return fit;
}

// V_0..V_n via V_{n-i} = binom(n,i) W_i(K;B) / kappa_i.
inline std::vector<Estimate> intrinsic_volumes(const Body& K, const SteinerOptions& opt = {}) {
  const int n = K.dim();
  const SteinerFit fit = quermassintegrals_fit(K, Body::ball(Vector(n), 1.0), {}, opt);
  std::vector<Estimate> V(static_cast<std::size_t>(n + 1));
  const bool mc = fit.volumes.front().method != Method::exact;
  for (int i = 0; i <= n; ++i) {
    const double f = binomial(n, i) / kappa(i);
    Estimate e = Estimate::exact(f * fit.W[static_cast<std::size_t>(i)]);
    if (mc) {
      e.method = Method::mc;
      e.std_error = f * fit.W_err[static_cast<std::size_t>(i)];
      e.n_samples = fit.volumes.front().n_samples;
    }
    V[static_cast<std::size_t>(n - i)] = e;
  }
  const double tol = 1e-6 + 5.0 * V[0].std_error;
  if (std::abs(V[0].value - 1.0) > tol) {
    throw FunctionalError("intrinsic_volumes: V_0 = " + std::to_string(V[0].value) + " deviates from 1");
  }
  return V;
}

}  // namespace lpbm
