#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "lpbm/core/error.hpp"
#include "lpbm/core/rng.hpp"
#include "lpbm/geometry/body.hpp"
#include "lpbm/solver/membership.hpp"

namespace lpbm {

// p >= 1, lambda in (0,1), q the Hölder conjugate (infinite for p = 1).
struct PCombination {
  double p = 1.0;
  double lambda = 0.5;
  double q = std::numeric_limits<double>::infinity();

  static PCombination make(double p, double lambda) {
    if (!(p >= 1.0) || !std::isfinite(p)) throw GeometryError("p-combination: p must be >= 1");
    if (!(lambda > 0.0 && lambda < 1.0)) throw GeometryError("p-combination: lambda must lie in (0,1)");
    PCombination c;
    c.p = p;
    c.lambda = lambda;
    c.q = p == 1.0 ? std::numeric_limits<double>::infinity() : p / (p - 1.0);
    return c;
  }

  bool q_infinite() const { return std::isinf(q); }
  double inv_q() const { return q_infinite() ? 0.0 : 1.0 / q; }
  bool conjugate_ok() const { return std::abs(1.0 / p + inv_q() - 1.0) <= 1e-12; }

  // Coefficients of x and y in the LYZ sum at mu, p-scalar products applied:
  // t = (1-mu)^{1/q} (1-lambda)^{1/p},  s = mu^{1/q} lambda^{1/p}.
  double t(double mu) const {
    if (q_infinite()) return 1.0 - lambda;
    return std::pow(1.0 - mu, inv_q()) * std::pow(1.0 - lambda, 1.0 / p);
  }
  double s(double mu) const {
    if (q_infinite()) return lambda;
    return std::pow(mu, inv_q()) * std::pow(lambda, 1.0 / p);
  }
};

// mu* = lambda F_L^{p alpha} / ((1-lambda) F_K^{p alpha} + lambda F_L^{p alpha}).
inline double mu_star(double lambda, double fk, double fl, double p, double alpha) {
  const double a = (1.0 - lambda) * std::pow(fk, p * alpha);
  const double b = lambda * std::pow(fl, p * alpha);
  return b / (a + b);
}

struct MuGrid {
  std::vector<double> values;

  // m equally spaced points of [0,1] plus any extra values, sorted, unique.
  static MuGrid uniform(int m, const std::vector<double>& extra = {}) {
    if (m < 2) throw GeometryError("mu grid: need at least two points");
    MuGrid g;
    for (int i = 0; i < m; ++i) g.values.push_back(i == m - 1 ? 1.0 : static_cast<double>(i) / (m - 1));
    for (double x : extra) {
      if (x >= 0.0 && x <= 1.0) g.values.push_back(x);
    }
    std::sort(g.values.begin(), g.values.end());
    g.values.erase(std::unique(g.values.begin(), g.values.end()), g.values.end());
    return g;
  }

  bool valid() const {
    if (values.empty() || values.front() != 0.0 || values.back() != 1.0) return false;
    for (std::size_t i = 1; i < values.size(); ++i) {
      if (!(values[i] > values[i - 1])) return false;
    }
    return true;
  }
};

// ((1-l) a^p + l b^p)^{1/p}, scaled for large p.
inline double power_mean(double a, double b, double lambda, double p) {
  if (p == 1.0) return (1.0 - lambda) * a + lambda * b;
  const double m = std::max(a, b);
  if (m == 0.0) return 0.0;
  return m * std::pow((1.0 - lambda) * std::pow(a / m, p) + lambda * std::pow(b / m, p), 1.0 / p);
}

// Firey combination (1-l)·K +_p l·L as a support table on `grid`.
inline Body firey_combination(const Body& K, const Body& L, const PCombination& c, const DirectionGrid& grid) {
  const auto hk = support_on(K, grid);
  const auto hl = support_on(L, grid);
  std::vector<double> h(hk.size());
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (hk[i] < -1e-12 || hl[i] < -1e-12) throw GeometryError("firey_combination: origin is not in both bodies");
    h[i] = power_mean(std::max(0.0, hk[i]), std::max(0.0, hl[i]), c.lambda, c.p);
  }
  return Body::table(grid, std::move(h), true);
}

// The LYZ set over finite point sets: all (1-mu)^{1/q} x + mu^{1/q} y with
// x in (1-l)·X, y in l·Y and mu on the grid (p = 1: coefficients 1).
inline std::vector<Vector> lyz_point_combination(const std::vector<Vector>& X, const std::vector<Vector>& Y,
                                                 const PCombination& c, const MuGrid& mu) {
  if (X.empty() || Y.empty()) throw GeometryError("lyz_point_combination: empty input");
  std::vector<Vector> out;
  const std::vector<double> one{0.0};
  const auto& mus = c.q_infinite() ? one : mu.values;
  out.reserve(X.size() * Y.size() * mus.size());
  for (double m : mus) {
    const double t = c.t(m), s = c.s(m);
    for (const auto& x : X) {
      for (const auto& y : Y) out.push_back(t * x + s * y);
    }
  }
  return out;
}

// Uniform points of a body by rejection from its bounding box.
inline std::vector<Vector> sample_body(const Body& K, int count, Stream& rng) {
  std::vector<Vector> pts;
  if (count <= 0) return pts;
  const Box box = bounding_box(K);
  if (!(box.volume() > 0.0)) {
    // Lower-dimensional: random convex combinations of vertices.
    const auto& V = K.vertices();
    for (int i = 0; i < count; ++i) {
      std::vector<double> w(V.size());
      double sum = 0.0;
      for (auto& x : w) sum += (x = rng.exponential());
      Vector p(K.dim());
      for (std::size_t j = 0; j < V.size(); ++j) p += (w[j] / sum) * V[j];
      pts.push_back(p);
    }
    return pts;
  }
  int guard = 0;
  while (static_cast<int>(pts.size()) < count) {
    const Vector x = rng.uniform_in_box(box);
    if (membership(x, K)) pts.push_back(x);
    if (++guard > 1000 * count) throw GeometryError("sample_body: rejection sampling stalled");
  }
  return pts;
}

// LYZ cloud for bodies: vertices plus `samples` uniform interior points of each.
inline std::vector<Vector> lyz_point_combination(const Body& K, const Body& L, const PCombination& c, const MuGrid& mu,
                                                 int samples, Stream& rng) {
  auto X = K.vertices();
  auto Y = L.vertices();
  const auto xs = sample_body(K, samples, rng);
  const auto ys = sample_body(L, samples, rng);
  X.insert(X.end(), xs.begin(), xs.end());
  Y.insert(Y.end(), ys.begin(), ys.end());
  return lyz_point_combination(X, Y, c, mu);
}

// Polytope stand-in for a body: the body itself, or for a ball the
// inscribed polytope through c + r u over the grid directions.
inline Body inner_polytope(const Body& K, const DirectionGrid& grid) {
  if (K.is_polytope()) return K;
  if (K.is_ball()) {
    std::vector<Vector> pts;
    for (const auto& u : grid.directions()) pts.push_back(K.as_ball().center + K.as_ball().radius * u);
    return Body::polytope(std::move(pts));
  }
  throw GeometryError("inner_polytope: support tables have no inner representation");
}

// Vertex pairs (i, j) with v_i + w_j a vertex of K + L. For t, s > 0 the
// vertices of tK + sL are exactly the points t v_i + s w_j of these pairs.
inline std::vector<std::pair<int, int>> minkowski_vertex_pairs(const Body& K, const Body& L) {
  const auto& VK = K.vertices();
  const auto& VL = L.vertices();
  std::vector<Vector> sums;
  std::vector<std::pair<int, int>> idx;
  for (std::size_t i = 0; i < VK.size(); ++i) {
    for (std::size_t j = 0; j < VL.size(); ++j) {
      sums.push_back(VK[i] + VL[j]);
      idx.emplace_back(static_cast<int>(i), static_cast<int>(j));
    }
  }
  const auto h = compute_hull(sums);
  std::vector<std::pair<int, int>> out;
  for (int s : h->source) out.push_back(idx[static_cast<std::size_t>(s)]);
  return out;
}

// (1-l)K + l L exactly.
inline Body minkowski_combination(const Body& K, const Body& L, double lambda) {
  return minkowski_sum(scale(K, 1.0 - lambda), scale(L, lambda));
}

// Inner polytope of (1-l)·K +_p l·L for bodies containing the origin:
// the hull of the slices tK + sL over the mu grid. Contained in the true
// combination, so measures of it are lower bounds.
inline Body lyz_inner_body(const Body& K, const Body& L, const PCombination& c, const MuGrid& mu) {
  if (c.q_infinite()) return minkowski_combination(K, L, c.lambda);
  const auto& VK = K.vertices();
  const auto& VL = L.vertices();
  const auto pairs = minkowski_vertex_pairs(K, L);
  std::vector<Vector> pts;
  pts.reserve(pairs.size() * mu.values.size());
  for (double m : mu.values) {
    const double t = c.t(m), s = c.s(m);
    if (m == 0.0) {
      for (const auto& v : VK) pts.push_back(t * v);
      continue;
    }
    if (m == 1.0) {
      for (const auto& w : VL) pts.push_back(s * w);
      continue;
    }
    for (const auto& [i, j] : pairs) pts.push_back(t * VK[static_cast<std::size_t>(i)] + s * VL[static_cast<std::size_t>(j)]);
  }
  return Body::polytope(std::move(pts));
}

// Union of the convex slices tK + sL over the mu grid: an inner
// approximation of the (generally non-convex) LYZ set when the origin is
// not in both bodies. Slices share the facet normals of K + L.
class SliceUnion {
 public:
  SliceUnion(const Body& K, const Body& L, const PCombination& c, const MuGrid& mu) : dim_(K.dim()) {
    const Body sum = minkowski_sum(K, L);
    const HullData& h = sum.hull();
    if (!h.full_dimensional() || h.facets.empty()) throw GeometryError("slice union: K + L must be full-dimensional, n <= 3");
    for (const auto& f : h.facets) {
      normals_.push_back(f.normal);
      hk_.push_back(support(K, f.normal));
      hl_.push_back(support(L, f.normal));
    }
    const std::vector<double> one{0.5};
    for (double m : c.q_infinite() ? one : mu.values) {
      ts_.push_back(c.t(m));
      ss_.push_back(c.s(m));
    }
    const Box bk = lpbm::bounding_box(K), bl = lpbm::bounding_box(L);
    box_ = Box{Vector(dim_), Vector(dim_)};
    for (int a = 0; a < dim_; ++a) {
      box_.lo[a] = std::min({0.0, bk.lo[a], bl.lo[a]});
      box_.hi[a] = std::max({0.0, bk.hi[a], bl.hi[a]});
    }
  }

  bool contains(const Vector& z) const {
    thread_local std::vector<double> g;
    g.resize(normals_.size());
    for (std::size_t f = 0; f < normals_.size(); ++f) g[f] = dot(z, normals_[f]);
    for (std::size_t m = 0; m < ts_.size(); ++m) {
      bool in = true;
      for (std::size_t f = 0; f < normals_.size(); ++f) {
        if (g[f] > ts_[m] * hk_[f] + ss_[m] * hl_[f]) {
          in = false;
          break;
        }
      }
      if (in) return true;
    }
    return false;
  }

  // Contains every slice (t + s <= 1 keeps them in conv(K ∪ L ∪ {0})).
  const Box& bounding_box() const { return box_; }

 private:
  int dim_;
  std::vector<Vector> normals_;
  std::vector<double> hk_, hl_, ts_, ss_;
  Box box_;
};

// Support of the LYZ set over the mu grid: max_mu t h_K(u) + s h_L(u).
inline double lyz_support(double hk, double hl, const PCombination& c, const MuGrid& mu) {
  if (c.q_infinite()) return (1.0 - c.lambda) * hk + c.lambda * hl;
  double best = -std::numeric_limits<double>::infinity();
  for (double m : mu.values) best = std::max(best, c.t(m) * hk + c.s(m) * hl);
  return best;
}

struct InclusionReport {
  int samples = 0;
  int violations = 0;
  double max_violation = 0.0;
  // Over grid directions: h_{p-combination}(u) - h_{(1-l)K + lL}(u).
  double min_support_slack = 0.0;
  double max_support_slack = 0.0;
};

// (1-l)K + lL ⊂ (1-l)·K +_p l·L, tested on random points z = (1-l)x + ly
// against the outer support table (Firey when 0 is in both bodies, the
// mu-grid LYZ support otherwise).
inline InclusionReport inclusion_check(const Body& K, const Body& L, const PCombination& c, const DirectionGrid& grid,
                                       const MuGrid& mu, int n_samples, std::uint64_t seed, double tol = 1e-9) {
  const auto hk = support_on(K, grid);
  const auto hl = support_on(L, grid);
  bool origin = true;
  for (std::size_t i = 0; i < hk.size(); ++i) origin = origin && hk[i] >= 0.0 && hl[i] >= 0.0;
  std::vector<double> hc(hk.size());
  InclusionReport r;
  r.min_support_slack = std::numeric_limits<double>::infinity();
  r.max_support_slack = -std::numeric_limits<double>::infinity();
  double scale = 1.0;
  for (std::size_t i = 0; i < hk.size(); ++i) {
    hc[i] = origin ? power_mean(hk[i], hl[i], c.lambda, c.p) : lyz_support(hk[i], hl[i], c, mu);
    const double slack = hc[i] - ((1.0 - c.lambda) * hk[i] + c.lambda * hl[i]);
    r.min_support_slack = std::min(r.min_support_slack, slack);
    r.max_support_slack = std::max(r.max_support_slack, slack);
    scale = std::max(scale, std::abs(hc[i]));
  }
  Stream rng(seed, 0x1c1);
  const auto xs = sample_body(K, n_samples, rng);
  const auto ys = sample_body(L, n_samples, rng);
  for (int k = 0; k < n_samples; ++k) {
    const Vector z = (1.0 - c.lambda) * xs[static_cast<std::size_t>(k)] + c.lambda * ys[static_cast<std::size_t>(k)];
    double worst = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < grid.size(); ++i) worst = std::max(worst, dot(z, grid[i]) - hc[static_cast<std::size_t>(i)]);
    if (worst > tol * scale) {
      ++r.violations;
      r.max_violation = std::max(r.max_violation, worst);
    }
  }
  r.samples = n_samples;
  return r;
}

}  // namespace lpbm
