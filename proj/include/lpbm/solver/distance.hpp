#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "lpbm/geometry/body.hpp"
#include "lpbm/solver/lp.hpp"
#include "lpbm/solver/membership.hpp"

namespace lpbm {

struct FrankWolfeResult {
  double distance = 0.0;
  double gap = 0.0;
  int iterations = 0;
  Vector closest;
};

// Away-step Frank-Wolfe for min |sum l_i v_i - x|^2 over the simplex.
inline FrankWolfeResult frank_wolfe_distance(const Vector& x, const std::vector<Vector>& V, double gap_tol = 1e-9,
                                             int max_iter = 10000) {
  if (V.empty()) throw SolverError("frank_wolfe_distance: empty vertex set");
  const std::size_t m = V.size();
  std::vector<double> lam(m, 0.0);
  std::size_t start = 0;
  for (std::size_t i = 1; i < m; ++i) {
    if (norm2(V[i] - x) < norm2(V[start] - x)) start = i;
  }
  lam[start] = 1.0;
  Vector y = V[start];
  FrankWolfeResult r;
  for (int it = 0; it < max_iter; ++it) {
    r.iterations = it + 1;
    const Vector g = y - x;  // gradient of 0.5 |y - x|^2
    std::size_t s = 0;
    std::size_t a = m;
    double gs = std::numeric_limits<double>::infinity();
    double ga = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m; ++i) {
      const double gi = dot(g, V[i]);
      if (gi < gs) {
        gs = gi;
        s = i;
      }
      if (lam[i] > 0.0 && gi > ga) {
        ga = gi;
        a = i;
      }
    }
    const double gy = dot(g, y);
    const double fw_gap = gy - gs;
    r.gap = fw_gap;
    if (fw_gap <= gap_tol) break;
    Vector d(x.dim());
    double max_step = 1.0;
    const bool toward = fw_gap >= ga - gy || a == m;
    if (toward) {
      d = V[s] - y;
    } else {
      d = y - V[a];
      max_step = lam[a] / (1.0 - lam[a]);
    }
    const double dd = norm2(d);
    if (dd == 0.0) break;
    const double step = std::clamp(-dot(g, d) / dd, 0.0, max_step);
    if (toward) {
      for (auto& l : lam) l *= (1.0 - step);
      lam[s] += step;
    } else {
      for (auto& l : lam) l *= (1.0 + step);
      lam[a] -= step;
      if (lam[a] < 1e-15) lam[a] = 0.0;
    }
    y += step * d;
  }
  r.closest = y;
  r.distance = norm(y - x);
  return r;
}

namespace detail {

inline double point_segment_dist2(const Vector& p, const Vector& a, const Vector& b) {
  const Vector ab = b - a;
  const double L = norm2(ab);
  double t = L > 0.0 ? dot(p - a, ab) / L : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return norm2(p - (a + t * ab));
}

// Closest point on triangle abc to p (Voronoi-region walk).
inline double point_triangle_dist2(const Vector& p, const Vector& a, const Vector& b, const Vector& c) {
  const Vector ab = b - a, ac = c - a, ap = p - a;
  const double d1 = dot(ab, ap), d2 = dot(ac, ap);
  if (d1 <= 0.0 && d2 <= 0.0) return norm2(ap);
  const Vector bp = p - b;
  const double d3 = dot(ab, bp), d4 = dot(ac, bp);
  if (d3 >= 0.0 && d4 <= d3) return norm2(bp);
  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) {
    const double v = d1 / (d1 - d3);
    return norm2(p - (a + v * ab));
  }
  const Vector cp = p - c;
  const double d5 = dot(ab, cp), d6 = dot(ac, cp);
  if (d6 >= 0.0 && d5 <= d6) return norm2(cp);
  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) {
    const double w = d2 / (d2 - d6);
    return norm2(p - (a + w * ac));
  }
  const double va = d3 * d6 - d5 * d4;
  if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0) {
    const double w = (d4 - d3) / ((d4 - d3) + (d5 - d6));
    return norm2(p - (b + w * (c - b)));
  }
  const double denom = 1.0 / (va + vb + vc);
  const double v = vb * denom, w = vc * denom;
  return norm2(p - (a + ab * v + ac * w));
}

// Exact distance to a hull in dimension <= 3 (any affine dimension).
inline double hull_distance(const Vector& x, const HullData& h) {
  if (h.affine_dim == 0) return distance(x, h.vertices.front());
  if (!h.full_dimensional()) {
    const Vector d = x - h.frame_origin;
    Vector y(h.affine_dim);
    Vector perp = d;
    for (int a = 0; a < h.affine_dim; ++a) {
      y[a] = dot(d, h.frame[static_cast<std::size_t>(a)]);
      perp -= y[a] * h.frame[static_cast<std::size_t>(a)];
    }
    const double ds = hull_distance(y, *h.sub);
    return std::sqrt(norm2(perp) + ds * ds);
  }
  bool inside = true;
  for (const auto& f : h.facets) {
    if (dot(x, f.normal) > f.offset) {
      inside = false;
      break;
    }
  }
  if (inside) return 0.0;
  const auto& V = h.vertices;
  if (h.dim == 1) return std::max(V[0][0] - x[0], x[0] - V[1][0]);
  double best = std::numeric_limits<double>::infinity();
  if (h.dim == 2) {
    for (std::size_t i = 0; i < V.size(); ++i) best = std::min(best, point_segment_dist2(x, V[i], V[(i + 1) % V.size()]));
    return std::sqrt(best);
  }
  for (const auto& t : h.triangles) best = std::min(best, point_triangle_dist2(x, V[t[0]], V[t[1]], V[t[2]]));
  return std::sqrt(best);
}

}  // namespace detail

// Euclidean distance from x to K: exact for balls and for polytopes in
// n <= 3; Frank-Wolfe over the vertex simplex otherwise.
inline double euclidean_distance(const Vector& x, const Body& K) {
  if (x.dim() != K.dim()) throw SolverError("euclidean_distance: dimension mismatch");
  if (K.is_ball()) return std::max(0.0, distance(x, K.as_ball().center) - K.as_ball().radius);
  if (!K.is_polytope()) throw SolverError("euclidean_distance: support tables are not supported");
  const HullData& h = K.hull();
  if (h.dim <= 3) return detail::hull_distance(x, h);
  if (membership(x, K)) return 0.0;
  return frank_wolfe_distance(x, h.vertices).distance;
}

namespace detail {

// min sum w_j  s.t.  sum l_i v_i + sum w_j e_j = x,  sum l_i = 1,  l, w >= 0.
inline double gauge_lp(const Vector& x, const std::vector<Vector>& KV, const std::vector<Vector>& EV) {
  const std::size_t nk = KV.size(), ne = EV.size();
  LpProblem lp;
  lp.sense = Sense::minimize;
  lp.objective.assign(nk + ne, 0.0);
  for (std::size_t j = 0; j < ne; ++j) lp.objective[nk + j] = 1.0;
  for (int a = 0; a < x.dim(); ++a) {
    std::vector<double> row(nk + ne);
    for (std::size_t i = 0; i < nk; ++i) row[i] = KV[i][a];
    for (std::size_t j = 0; j < ne; ++j) row[nk + j] = EV[j][a];
    lp.add(std::move(row), Relation::equal, x[a]);
  }
  std::vector<double> sum(nk + ne, 0.0);
  for (std::size_t i = 0; i < nk; ++i) sum[i] = 1.0;
  lp.add(std::move(sum), Relation::equal, 1.0);
  const auto s = solve_lp(lp);
  if (s.status != LpStatus::optimal) throw SolverError("gauge_distance: LP failed (" + to_string(s.status) + ")");
  return std::max(0.0, s.value);
}

// Smallest t >= 0 with g(t) <= 0 for g convex, g(0) >= 0, g -> -inf.
template <class G>
inline double first_root(G g) {
  if (g(0.0) <= 0.0) return 0.0;
  double hi = 1.0;
  while (g(hi) > 0.0) {
    hi *= 2.0;
    if (hi > 1e12) throw SolverError("gauge_distance: no root");
  }
  double lo = 0.0;
  for (int i = 0; i < 200 && hi - lo > 1e-14 * std::max(1.0, hi); ++i) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) > 0.0 ? lo : hi) = mid;
  }
  return hi;
}

}  // namespace detail

// d_E(x, K) = min{t >= 0 : x in K + tE}, 0 in int E.
inline double gauge_distance(const Vector& x, const Body& K, const Body& E) {
  if (x.dim() != K.dim() || K.dim() != E.dim()) throw SolverError("gauge_distance: dimension mismatch");
  if (E.is_table() || K.is_table()) throw SolverError("gauge_distance: support tables are not supported");
  if (E.is_ball()) {
    const auto& b = E.as_ball();
    if (!(norm(b.center) < b.radius)) throw SolverError("gauge_distance: origin not interior to E");
    if (norm2(b.center) == 0.0) return euclidean_distance(x, K) / b.radius;
    return detail::first_root([&](double t) { return euclidean_distance(x - t * b.center, K) - t * b.radius; });
  }
  const HullData& he = E.hull();
  if (!he.full_dimensional()) throw SolverError("gauge_distance: E has empty interior");
  if (he.dim <= 3) {
    for (const auto& f : he.facets) {
      if (!(f.offset > 1e-12)) throw SolverError("gauge_distance: origin not interior to E");
    }
  }
  if (K.is_ball()) {
    const auto& b = K.as_ball();
    const Vector y = x - b.center;
    return detail::first_root([&](double t) {
      if (t == 0.0) return norm(y) - b.radius;
      return euclidean_distance(y, scale(E, t)) - b.radius;
    });
  }
  return detail::gauge_lp(x, K.vertices(), he.vertices);
}


// d_E(x, K) for a fixed polytope pair in n <= 3 without an LP per query.
// K + tE has the facet normals N_f of K + E for every t > 0, so
//   d_E(x, K) = max(0, max_f (<x, N_f> - h_K(N_f)) / h_E(N_f)).
class GaugeDistanceField {
 public:
  GaugeDistanceField(const Body& K, const Body& E) {
    if (!K.is_polytope() || !E.is_polytope() || K.dim() > 3) {
      throw SolverError("GaugeDistanceField: needs polytopes in n <= 3");
    }
    const Body sum = minkowski_sum(K, E);
    const HullData& h = sum.hull();
    if (!h.full_dimensional()) throw SolverError("GaugeDistanceField: E has empty interior");
    for (const auto& f : h.facets) {
      const double he = support(E, f.normal);
      if (!(he > 1e-12)) throw SolverError("gauge_distance: origin not interior to E");
      normals_.push_back(f.normal);
      hk_.push_back(support(K, f.normal));
      he_.push_back(he);
    }
  }

  double operator()(const Vector& x) const {
    double d = 0.0;
    for (std::size_t f = 0; f < normals_.size(); ++f) d = std::max(d, (dot(x, normals_[f]) - hk_[f]) / he_[f]);
    return d;
  }

 private:
  std::vector<Vector> normals_;
  std::vector<double> hk_, he_;
};

}  // namespace lpbm
