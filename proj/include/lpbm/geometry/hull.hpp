#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <memory>
#include <numeric>
#include <span>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "lpbm/core/error.hpp"
#include "lpbm/core/vector.hpp"
#include "lpbm/solver/lp.hpp"

namespace lpbm {

// Supporting halfspace <x, normal> <= offset, normal of unit length.
struct Facet {
  Vector normal;
  double offset = 0.0;
};

struct HullData {
  int dim = 0;
  int affine_dim = 0;
  // Extreme points. n=2: counter-clockwise; otherwise lexicographic.
  std::vector<Vector> vertices;
  // Index of each vertex in the caller's point list.
  std::vector<int> source;
  // Distinct facet hyperplanes (full-dimensional hulls, n <= 3).
  std::vector<Facet> facets;
  // Facets sharing a ridge, per facet.
  std::vector<std::vector<int>> facet_adjacency;
  // n=3: outward triangulation of the boundary and the facet of each triangle.
  std::vector<std::array<int, 3>> triangles;
  std::vector<int> triangle_facet;
  // Mean of the vertices (relative interior point).
  Vector interior;
  // Lower-dimensional hulls: orthonormal frame of the affine hull and the
  // hull of the points written in frame coordinates.
  Vector frame_origin;
  std::vector<Vector> frame;
  std::shared_ptr<const HullData> sub;

  bool full_dimensional() const { return affine_dim == dim; }

  double scale() const {
    double s = 0.0;
    for (const auto& v : vertices) s = std::max(s, max_abs(v));
    return s;
  }
};

namespace detail {

// Representatives of points after merging those within eps (max-norm).
inline std::vector<int> dedup_points(std::span<const Vector> pts, double eps) {
  std::vector<int> order(pts.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (lex_less(pts[a], pts[b])) return true;
    if (lex_less(pts[b], pts[a])) return false;
    return a < b;
  });
  std::vector<int> keep;
  for (int i : order) {
    bool dup = false;
    for (auto it = keep.rbegin(); it != keep.rend(); ++it) {
      if (pts[i][0] - pts[*it][0] > eps) break;
      if (approx_equal(pts[i], pts[*it], eps)) {
        dup = true;
        break;
      }
    }
    if (!dup) keep.push_back(i);
  }
  return keep;
}

inline double cross2(const Vector& o, const Vector& a, const Vector& b) {
  return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

inline Vector cross3(const Vector& a, const Vector& b) {
  return Vector{a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

// Monotone chain; returns indices into pts in counter-clockwise order.
inline std::vector<int> hull2d(std::span<const Vector> pts, std::vector<int> idx) {
  std::sort(idx.begin(), idx.end(), [&](int a, int b) { return lex_less(pts[a], pts[b]); });
  double scale = 1.0;
  for (int i : idx) scale = std::max(scale, max_abs(pts[i]));
  const double tol = 1e-12 * scale * scale;
  std::vector<int> h(2 * idx.size());
  std::size_t k = 0;
  for (int i : idx) {
    while (k >= 2 && cross2(pts[h[k - 2]], pts[h[k - 1]], pts[i]) <= tol) --k;
    h[k++] = i;
  }
  for (std::size_t j = idx.size() - 1, lo = k + 1; j-- > 0;) {
    const int i = idx[j];
    while (k >= lo && cross2(pts[h[k - 2]], pts[h[k - 1]], pts[i]) <= tol) --k;
    h[k++] = i;
  }
  h.resize(k - 1);
  return h;
}

class QuickHull3 {
 public:
  QuickHull3(std::span<const Vector> pts, const std::vector<int>& idx) : pts_(pts), idx_(idx) {
    double scale = 1.0;
    for (int i : idx) scale = std::max(scale, max_abs(pts[i]));
    eps_ = 1e-11 * scale;
  }

  // Boundary triangles (indices into pts), outward counter-clockwise.
  std::vector<std::array<int, 3>> run() {
    init_simplex();
    for (std::size_t f = 0; f < faces_.size(); ++f) {
      if (!faces_[f].alive || faces_[f].outside.empty()) continue;
      add_point(static_cast<int>(f));
    }
    std::vector<std::array<int, 3>> out;
    for (const auto& f : faces_) {
      if (f.alive) out.push_back(f.v);
    }
    return out;
  }

 private:
  struct Face {
    std::array<int, 3> v;
    Vector normal;
    double offset = 0.0;
    std::vector<int> outside;
    bool alive = true;
  };

  static std::uint64_t key(int a, int b) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) | static_cast<std::uint32_t>(b);
  }

  double dist(const Face& f, int p) const { return dot(pts_[p], f.normal) - f.offset; }

  int make_face(int a, int b, int c, const Vector* fallback) {
    Face f;
    f.v = {a, b, c};
    Vector n = cross3(pts_[b] - pts_[a], pts_[c] - pts_[a]);
    const double len = norm(n);
    if (len > 0.0) {
      n /= len;
    } else if (fallback) {
      n = *fallback;
    }
    f.normal = n;
    f.offset = dot(n, pts_[a]);
    const int id = static_cast<int>(faces_.size());
    faces_.push_back(std::move(f));
    edges_[key(a, b)] = id;
    edges_[key(b, c)] = id;
    edges_[key(c, a)] = id;
    return id;
  }

  void init_simplex() {
    const auto& P = pts_;
    int i0 = idx_.front();
    for (int i : idx_) {
      if (lex_less(P[i], P[i0])) i0 = i;
    }
    int i1 = i0;
    double best = -1.0;
    for (int i : idx_) {
      const double d = norm2(P[i] - P[i0]);
      if (d > best) {
        best = d;
        i1 = i;
      }
    }
    const Vector e = normalized(P[i1] - P[i0]);
    int i2 = i0;
    best = -1.0;
    for (int i : idx_) {
      const Vector w = P[i] - P[i0];
      const double d = norm2(w - dot(w, e) * e);
      if (d > best) {
        best = d;
        i2 = i;
      }
    }
    const Vector nrm = normalized(cross3(P[i1] - P[i0], P[i2] - P[i0]));
    int i3 = i0;
    best = -1.0;
    for (int i : idx_) {
      const double d = std::abs(dot(P[i] - P[i0], nrm));
      if (d > best) {
        best = d;
        i3 = i;
      }
    }
    if (best <= eps_) throw GeometryError("convex_hull: degenerate point set in quickhull");
    std::array<int, 4> s{i0, i1, i2, i3};
    const std::array<std::array<int, 4>, 4> tri{{{0, 1, 2, 3}, {0, 3, 1, 2}, {1, 3, 2, 0}, {0, 2, 3, 1}}};
    for (const auto& t : tri) {
      int a = s[t[0]], b = s[t[1]], c = s[t[2]];
      const int d = s[t[3]];
      const Vector n = cross3(P[b] - P[a], P[c] - P[a]);
      if (dot(n, P[d] - P[a]) > 0.0) std::swap(b, c);
      make_face(a, b, c, nullptr);
    }
    std::vector<int> rest;
    for (int i : idx_) {
      if (i != i0 && i != i1 && i != i2 && i != i3) rest.push_back(i);
    }
    assign(rest, 0);
  }

  // Give each point to the face (from `first` on) it is furthest above.
  void assign(const std::vector<int>& points, std::size_t first) {
    for (int p : points) {
      int bestf = -1;
      double bestd = eps_;
      for (std::size_t f = first; f < faces_.size(); ++f) {
        if (!faces_[f].alive) continue;
        const double d = dist(faces_[f], p);
        if (d > bestd) {
          bestd = d;
          bestf = static_cast<int>(f);
        }
      }
      if (bestf >= 0) faces_[static_cast<std::size_t>(bestf)].outside.push_back(p);
    }
  }

  void add_point(int start) {
    Face& f0 = faces_[static_cast<std::size_t>(start)];
    int eye = f0.outside.front();
    double bestd = dist(f0, eye);
    for (int p : f0.outside) {
      const double d = dist(f0, p);
      if (d > bestd) {
        bestd = d;
        eye = p;
      }
    }
    // Visible region by flood fill across shared edges.
    std::vector<int> visible{start};
    std::vector<char> mark(faces_.size(), 0);
    mark[static_cast<std::size_t>(start)] = 1;
    struct HEdge {
      int a, b, face;
    };
    std::vector<HEdge> horizon;
    for (std::size_t k = 0; k < visible.size(); ++k) {
      const Face& f = faces_[static_cast<std::size_t>(visible[k])];
      for (int e = 0; e < 3; ++e) {
        const int a = f.v[static_cast<std::size_t>(e)];
        const int b = f.v[static_cast<std::size_t>((e + 1) % 3)];
        const int nb = edges_.at(key(b, a));
        if (mark[static_cast<std::size_t>(nb)] == 1) continue;
        if (mark[static_cast<std::size_t>(nb)] == 0 && dist(faces_[static_cast<std::size_t>(nb)], eye) > eps_) {
          mark[static_cast<std::size_t>(nb)] = 1;
          visible.push_back(nb);
        } else {
          horizon.push_back({a, b, visible[k]});
        }
      }
    }
    // A face may be marked visible after one of its edges was already
    // recorded as horizon; drop those.
    std::vector<HEdge> h2;
    for (const auto& h : horizon) {
      const int nb = edges_.at(key(h.b, h.a));
      if (mark[static_cast<std::size_t>(nb)] != 1) h2.push_back(h);
    }
    std::vector<int> orphans;
    for (int fid : visible) {
      Face& f = faces_[static_cast<std::size_t>(fid)];
      f.alive = false;
      for (int p : f.outside) {
        if (p != eye) orphans.push_back(p);
      }
      f.outside.clear();
      f.outside.shrink_to_fit();
      for (int e = 0; e < 3; ++e) {
        const auto k = key(f.v[static_cast<std::size_t>(e)], f.v[static_cast<std::size_t>((e + 1) % 3)]);
        auto it = edges_.find(k);
        if (it != edges_.end() && it->second == fid) edges_.erase(it);
      }
    }
    const std::size_t first = faces_.size();
    for (const auto& h : h2) {
      const Vector fallback = faces_[static_cast<std::size_t>(h.face)].normal;
      make_face(h.a, h.b, eye, &fallback);
    }
    assign(orphans, first);
  }

  std::span<const Vector> pts_;
  std::vector<int> idx_;
  double eps_ = 1e-11;
  std::vector<Face> faces_;
  std::unordered_map<std::uint64_t, int> edges_;
};

// True when the unit normals span R^3 (the vertex is a corner).
inline bool normals_span3(const std::vector<Vector>& ns) {
  if (ns.empty()) return false;
  const Vector& n0 = ns.front();
  const Vector* n1 = nullptr;
  for (const auto& n : ns) {
    if (norm(cross3(n0, n)) > 1e-9) {
      n1 = &n;
      break;
    }
  }
  if (!n1) return false;
  const Vector c = normalized(cross3(n0, *n1));
  for (const auto& n : ns) {
    if (std::abs(dot(c, n)) > 1e-9) return true;
  }
  return false;
}

// Merge coplanar triangles into facets, fill adjacency.
inline void build_facets3(HullData& h) {
  const auto& V = h.vertices;
  const std::size_t T = h.triangles.size();
  std::vector<Vector> tn(T);
  std::vector<double> to(T);
  for (std::size_t t = 0; t < T; ++t) {
    const auto& tri = h.triangles[t];
    Vector n = normalized(cross3(V[tri[1]] - V[tri[0]], V[tri[2]] - V[tri[0]]));
    tn[t] = n;
    to[t] = (dot(n, V[tri[0]]) + dot(n, V[tri[1]]) + dot(n, V[tri[2]])) / 3.0;
  }
  std::vector<int> order(T);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (tn[a][0] != tn[b][0]) return tn[a][0] < tn[b][0];
    return a < b;
  });
  h.triangle_facet.assign(T, -1);
  const double tol = 1e-9 * std::max(1.0, h.scale());
  for (std::size_t i = 0; i < T; ++i) {
    const int t = order[i];
    if (h.triangle_facet[static_cast<std::size_t>(t)] >= 0) continue;
    const int fid = static_cast<int>(h.facets.size());
    h.facets.push_back(Facet{tn[static_cast<std::size_t>(t)], to[static_cast<std::size_t>(t)]});
    h.triangle_facet[static_cast<std::size_t>(t)] = fid;
    for (std::size_t j = i + 1; j < T; ++j) {
      const int u = order[j];
      if (tn[u][0] - tn[t][0] > 1e-9) break;
      if (h.triangle_facet[static_cast<std::size_t>(u)] >= 0) continue;
      if (approx_equal(tn[u], tn[t], 1e-9) && std::abs(to[u] - to[t]) <= tol) {
        h.triangle_facet[static_cast<std::size_t>(u)] = fid;
      }
    }
  }
  // Re-number facets in triangle order for determinism independent of sort.
  std::vector<int> renum(h.facets.size(), -1);
  std::vector<Facet> facets;
  for (std::size_t t = 0; t < T; ++t) {
    int& r = renum[static_cast<std::size_t>(h.triangle_facet[t])];
    if (r < 0) {
      r = static_cast<int>(facets.size());
      facets.push_back(h.facets[static_cast<std::size_t>(h.triangle_facet[t])]);
    }
  }
  for (auto& f : h.triangle_facet) f = renum[static_cast<std::size_t>(f)];
  h.facets = std::move(facets);
  std::unordered_map<std::uint64_t, int> owner;
  for (std::size_t t = 0; t < T; ++t) {
    const auto& tri = h.triangles[t];
    for (int e = 0; e < 3; ++e) {
      const auto a = static_cast<std::uint32_t>(tri[static_cast<std::size_t>(e)]);
      const auto b = static_cast<std::uint32_t>(tri[static_cast<std::size_t>((e + 1) % 3)]);
      owner[(static_cast<std::uint64_t>(a) << 32) | b] = static_cast<int>(t);
    }
  }
  h.facet_adjacency.assign(h.facets.size(), {});
  for (std::size_t t = 0; t < T; ++t) {
    const auto& tri = h.triangles[t];
    for (int e = 0; e < 3; ++e) {
      const auto a = static_cast<std::uint32_t>(tri[static_cast<std::size_t>(e)]);
      const auto b = static_cast<std::uint32_t>(tri[static_cast<std::size_t>((e + 1) % 3)]);
      auto it = owner.find((static_cast<std::uint64_t>(b) << 32) | a);
      if (it == owner.end()) continue;
      const int f1 = h.triangle_facet[t];
      const int f2 = h.triangle_facet[static_cast<std::size_t>(it->second)];
      if (f1 == f2) continue;
      auto& adj = h.facet_adjacency[static_cast<std::size_t>(f1)];
      if (std::find(adj.begin(), adj.end(), f2) == adj.end()) adj.push_back(f2);
    }
  }
}

inline bool in_hull_lp(std::span<const Vector> pts, const std::vector<int>& others, const Vector& x) {
  LpProblem lp;
  lp.sense = Sense::minimize;
  lp.objective.assign(others.size(), 0.0);
  const int n = x.dim();
  for (int a = 0; a < n; ++a) {
    std::vector<double> row(others.size());
    for (std::size_t j = 0; j < others.size(); ++j) row[j] = pts[others[j]][a];
    lp.add(std::move(row), Relation::equal, x[a]);
  }
  lp.add(std::vector<double>(others.size(), 1.0), Relation::equal, 1.0);
  return solve_lp(lp).status == LpStatus::optimal;
}

inline std::shared_ptr<const HullData> hull_impl(std::span<const Vector> pts, double eps);

}  // namespace detail

// Convex hull of a finite point set. Exact combinatorics in n <= 3
// (monotone chain / quickhull); in n = 4 the extreme points are filtered by
// LP feasibility and no facet list is produced. Lower-dimensional inputs
// are handled in their affine hull.
inline std::shared_ptr<const HullData> compute_hull(std::span<const Vector> pts, double dedup_eps = 1e-9) {
  if (pts.empty()) throw GeometryError("convex_hull: empty point set");
  const int n = pts.front().dim();
  for (const auto& p : pts) {
    if (p.dim() != n) throw GeometryError("convex_hull: mixed dimensions");
    if (!p.finite()) throw GeometryError("convex_hull: non-finite coordinate");
  }
  return detail::hull_impl(pts, dedup_eps);
}

inline std::shared_ptr<const HullData> detail::hull_impl(std::span<const Vector> pts, double eps) {
  const int n = pts.front().dim();
  auto h = std::make_shared<HullData>();
  h->dim = n;
  std::vector<int> uniq = dedup_points(pts, eps);

  auto finish = [&](std::vector<int> src) {
    h->source = std::move(src);
    h->vertices.clear();
    for (int i : h->source) h->vertices.push_back(pts[i]);
    Vector c(n);
    for (const auto& v : h->vertices) c += v;
    h->interior = c / static_cast<double>(h->vertices.size());
  };

  if (uniq.size() == 1) {
    h->affine_dim = 0;
    finish(uniq);
    h->frame_origin = pts[uniq.front()];
    return h;
  }

  // Affine rank from the principal axes of the point cloud.
  Vector c(n);
  for (int i : uniq) c += pts[i];
  c /= static_cast<double>(uniq.size());
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(n, n);
  double diam = 0.0;
  for (int i : uniq) {
    const Vector d = pts[i] - c;
    diam = std::max(diam, norm(d));
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) cov(a, b) += d[a] * d[b];
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
  std::vector<Vector> axes;
  for (int k = n - 1; k >= 0; --k) {
    Vector e(n);
    for (int a = 0; a < n; ++a) e[a] = es.eigenvectors()(a, k);
    double lo = 0.0, hi = 0.0;
    for (int i : uniq) {
      const double s = dot(pts[i] - c, e);
      lo = std::min(lo, s);
      hi = std::max(hi, s);
    }
    if (hi - lo > 1e-9 * std::max(1.0, diam)) axes.push_back(e);
  }
  const int k = static_cast<int>(axes.size());

  if (k < n) {
    h->affine_dim = k;
    h->frame_origin = c;
    h->frame = axes;
    if (k == 0) {
      finish({uniq.front()});
      return h;
    }
    std::vector<Vector> local;
    local.reserve(uniq.size());
    for (int i : uniq) {
      Vector y(k);
      for (int a = 0; a < k; ++a) y[a] = dot(pts[i] - c, axes[static_cast<std::size_t>(a)]);
      local.push_back(y);
    }
    auto sub = hull_impl(local, 0.0);
    std::vector<int> src;
    for (int s : sub->source) src.push_back(uniq[static_cast<std::size_t>(s)]);
    h->sub = sub;
    finish(std::move(src));
    return h;
  }

  h->affine_dim = n;
  if (n == 1) {
    int lo = uniq.front(), hi = uniq.front();
    for (int i : uniq) {
      if (pts[i][0] < pts[lo][0]) lo = i;
      if (pts[i][0] > pts[hi][0]) hi = i;
    }
    finish({lo, hi});
    h->facets = {Facet{Vector{-1.0}, -pts[lo][0]}, Facet{Vector{1.0}, pts[hi][0]}};
    h->facet_adjacency = {{1}, {0}};
    return h;
  }
  if (n == 2) {
    auto ccw = hull2d(pts, uniq);
    // Start from the lexicographically smallest vertex.
    auto first = std::min_element(ccw.begin(), ccw.end(), [&](int a, int b) { return lex_less(pts[a], pts[b]); });
    std::rotate(ccw.begin(), first, ccw.end());
    finish(ccw);
    const auto& V = h->vertices;
    const std::size_t m = V.size();
    for (std::size_t i = 0; i < m; ++i) {
      const Vector& a = V[i];
      const Vector& b = V[(i + 1) % m];
      Vector nrm{b[1] - a[1], a[0] - b[0]};
      nrm = normalized(nrm);
      h->facets.push_back(Facet{nrm, 0.5 * (dot(nrm, a) + dot(nrm, b))});
    }
    h->facet_adjacency.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
      h->facet_adjacency[i] = {static_cast<int>((i + m - 1) % m), static_cast<int>((i + 1) % m)};
    }
    return h;
  }
  if (n == 3) {
    std::vector<int> cand = uniq;
    std::vector<std::array<int, 3>> tris;
    for (int pass = 0; pass < 8; ++pass) {
      QuickHull3 qh(pts, cand);
      tris = qh.run();
      // Drop points that ended up on a flat face or edge and re-run.
      std::unordered_map<int, std::vector<Vector>> inc;
      for (const auto& t : tris) {
        const Vector nrm = cross3(pts[t[1]] - pts[t[0]], pts[t[2]] - pts[t[0]]);
        const double len = norm(nrm);
        if (len == 0.0) continue;
        for (int v : t) inc[v].push_back(nrm / len);
      }
      std::vector<int> keep;
      bool dropped = false;
      for (int i : cand) {
        auto it = inc.find(i);
        if (it == inc.end()) continue;
        if (normals_span3(it->second)) {
          keep.push_back(i);
        } else {
          dropped = true;
        }
      }
      if (!dropped) break;
      cand = std::move(keep);
    }
    std::vector<int> used;
    for (const auto& t : tris) used.insert(used.end(), t.begin(), t.end());
    std::sort(used.begin(), used.end(), [&](int a, int b) {
      if (lex_less(pts[a], pts[b])) return true;
      if (lex_less(pts[b], pts[a])) return false;
      return a < b;
    });
    used.erase(std::unique(used.begin(), used.end()), used.end());
    std::unordered_map<int, int> local;
    for (std::size_t i = 0; i < used.size(); ++i) local[used[i]] = static_cast<int>(i);
    finish(used);
    for (const auto& t : tris) h->triangles.push_back({local[t[0]], local[t[1]], local[t[2]]});
    build_facets3(*h);
    return h;
  }
  // n = 4: extreme points by LP.
  std::vector<int> ext;
  for (std::size_t j = 0; j < uniq.size(); ++j) {
    std::vector<int> others;
    for (std::size_t i = 0; i < uniq.size(); ++i) {
      if (i != j) others.push_back(uniq[i]);
    }
    if (!in_hull_lp(pts, others, pts[uniq[j]])) ext.push_back(uniq[j]);
  }
  std::sort(ext.begin(), ext.end(), [&](int a, int b) { return lex_less(pts[a], pts[b]); });
  finish(ext);
  return h;
}

}  // namespace lpbm
