#pragma once

#include <cmath>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "lpbm/core/error.hpp"
#include "lpbm/core/vector.hpp"
#include "lpbm/geometry/direction_grid.hpp"
#include "lpbm/geometry/hull.hpp"
#include "lpbm/solver/lp.hpp"

namespace lpbm {

struct VPolytope {
  std::vector<Vector> points;
  std::shared_ptr<const HullData> hull;
};

struct Ball {
  Vector center;
  double radius = 1.0;
};

// Outer polytope  ∩_u {x : <x,u> <= h(u)}  over the grid directions.
struct SupportTable {
  DirectionGrid grid;
  std::shared_ptr<const std::vector<double>> values;
  bool approximate = true;
};

// Immutable convex body. Copies share their underlying data.
class Body {
 public:
  using Rep = std::variant<VPolytope, Ball, SupportTable>;

  static Body polytope(std::vector<Vector> points, double dedup_eps = 1e-9) {
    if (points.empty()) throw GeometryError("vpolytope: empty vertex list");
    auto hull = compute_hull(points, dedup_eps);
    return Body(VPolytope{std::move(points), std::move(hull)});
  }

  static Body ball(const Vector& center, double radius) {
    if (!(radius > 0.0) || !std::isfinite(radius)) throw GeometryError("ball: radius must be positive");
    if (!center.finite()) throw GeometryError("ball: non-finite center");
    return Body(Ball{center, radius});
  }

  static Body table(const DirectionGrid& grid, std::vector<double> values, bool approximate = true) {
    if (static_cast<int>(values.size()) != grid.size()) throw GeometryError("support table: size mismatch with grid");
    for (double v : values) {
      if (!std::isfinite(v)) throw GeometryError("support table: non-finite value");
    }
    return Body(SupportTable{grid, std::make_shared<const std::vector<double>>(std::move(values)), approximate});
  }

  static Body point(const Vector& x) { return polytope({x}); }

  const Rep& rep() const { return rep_; }
  bool is_polytope() const { return std::holds_alternative<VPolytope>(rep_); }
  bool is_ball() const { return std::holds_alternative<Ball>(rep_); }
  bool is_table() const { return std::holds_alternative<SupportTable>(rep_); }
  const VPolytope& as_polytope() const { return std::get<VPolytope>(rep_); }
  const Ball& as_ball() const { return std::get<Ball>(rep_); }
  const SupportTable& as_table() const { return std::get<SupportTable>(rep_); }

  const HullData& hull() const {
    if (!is_polytope()) throw GeometryError("hull: body is not a polytope");
    return *as_polytope().hull;
  }
  const std::vector<Vector>& vertices() const { return hull().vertices; }

  int dim() const {
    return std::visit(
        [](const auto& r) -> int {
          using T = std::decay_t<decltype(r)>;
          if constexpr (std::is_same_v<T, VPolytope>) return r.hull->dim;
          if constexpr (std::is_same_v<T, Ball>) return r.center.dim();
          if constexpr (std::is_same_v<T, SupportTable>) return r.grid.dim();
        },
        rep_);
  }

  std::string kind() const {
    return is_polytope() ? "vpolytope" : is_ball() ? "ball" : "support_table";
  }

 private:
  explicit Body(Rep r) : rep_(std::move(r)) {}
  Rep rep_;
};

inline double support(const Body& K, const Vector& u) {
  if (u.dim() != K.dim()) throw GeometryError("support: dimension mismatch");
  if (norm2(u) == 0.0) throw GeometryError("support: zero direction");
  if (K.is_polytope()) {
    double h = -std::numeric_limits<double>::infinity();
    for (const auto& v : K.vertices()) h = std::max(h, dot(v, u));
    return h;
  }
  if (K.is_ball()) {
    const auto& b = K.as_ball();
    return dot(b.center, u) + b.radius * norm(u);
  }
  const auto& t = K.as_table();
  const int i = t.grid.find(u);
  if (i < 0) throw GeometryError("support: direction is not on the table's grid");
  return (*t.values)[static_cast<std::size_t>(i)];
}

// h(K, grid[i]) for every grid direction.
inline std::vector<double> support_on(const Body& K, const DirectionGrid& grid) {
  if (K.is_table() && K.as_table().grid.same_as(grid)) return *K.as_table().values;
  std::vector<double> h(static_cast<std::size_t>(grid.size()));
  for (int i = 0; i < grid.size(); ++i) h[static_cast<std::size_t>(i)] = support(K, grid[i]);
  return h;
}

inline Body scale(const Body& K, double r) {
  if (r < 0.0 || !std::isfinite(r)) throw GeometryError("scale: factor must be nonnegative");
  if (r == 0.0) return Body::point(Vector::zero(K.dim()));
  if (K.is_polytope()) {
    std::vector<Vector> pts;
    for (const auto& v : K.vertices()) pts.push_back(v * r);
    return Body::polytope(std::move(pts));
  }
  if (K.is_ball()) return Body::ball(K.as_ball().center * r, K.as_ball().radius * r);
  const auto& t = K.as_table();
  std::vector<double> v = *t.values;
  for (auto& x : v) x *= r;
  return Body::table(t.grid, std::move(v), t.approximate);
}

inline Body translate(const Body& K, const Vector& shift) {
  if (K.is_polytope()) {
    std::vector<Vector> pts;
    for (const auto& v : K.vertices()) pts.push_back(v + shift);
    return Body::polytope(std::move(pts));
  }
  if (K.is_ball()) return Body::ball(K.as_ball().center + shift, K.as_ball().radius);
  const auto& t = K.as_table();
  std::vector<double> v = *t.values;
  for (int i = 0; i < t.grid.size(); ++i) v[static_cast<std::size_t>(i)] += dot(shift, t.grid[i]);
  return Body::table(t.grid, std::move(v), t.approximate);
}

inline Body convex_hull(std::vector<Vector> points) { return Body::polytope(std::move(points)); }

// K + L. Polytope + ball is not a polytope; it comes back as a support table
// on `grid`, flagged approximate.
inline Body minkowski_sum(const Body& K, const Body& L, const DirectionGrid* grid = nullptr) {
  if (K.dim() != L.dim()) throw GeometryError("minkowski_sum: dimension mismatch");
  if (K.is_ball() && L.is_ball()) {
    return Body::ball(K.as_ball().center + L.as_ball().center, K.as_ball().radius + L.as_ball().radius);
  }
  if (K.is_polytope() && L.is_polytope()) {
    std::vector<Vector> pts;
    pts.reserve(K.vertices().size() * L.vertices().size());
    for (const auto& a : K.vertices()) {
      for (const auto& b : L.vertices()) pts.push_back(a + b);
    }
    return Body::polytope(std::move(pts));
  }
  const DirectionGrid* g = grid;
  if (K.is_table()) g = &K.as_table().grid;
  if (L.is_table()) g = &L.as_table().grid;
  if (!g) throw GeometryError("minkowski_sum: mixed representation needs a direction grid");
  auto hk = support_on(K, *g);
  const auto hl = support_on(L, *g);
  for (std::size_t i = 0; i < hk.size(); ++i) hk[i] += hl[i];
  return Body::table(*g, std::move(hk), true);
}

// Axis-aligned bounding box from the support function along ±e_i.
inline Box bounding_box(const Body& K) {
  const int n = K.dim();
  Box b{Vector(n), Vector(n)};
  if (K.is_polytope()) {
    const auto& V = K.vertices();
    b.lo = b.hi = V.front();
    for (const auto& v : V) {
      for (int a = 0; a < n; ++a) {
        b.lo[a] = std::min(b.lo[a], v[a]);
        b.hi[a] = std::max(b.hi[a], v[a]);
      }
    }
    return b;
  }
  for (int a = 0; a < n; ++a) {
    const Vector e = Vector::unit(n, a);
    b.hi[a] = support(K, e);
    b.lo[a] = -support(K, -e);
  }
  return b;
}

// max_{x in K} |x|.
inline double circumradius(const Body& K) {
  if (K.is_polytope()) {
    double r = 0.0;
    for (const auto& v : K.vertices()) r = std::max(r, norm(v));
    return r;
  }
  if (K.is_ball()) return norm(K.as_ball().center) + K.as_ball().radius;
  double r = 0.0;
  for (double h : *K.as_table().values) r = std::max(r, h);
  return r;
}

// Origin strictly interior: h(K,u) > delta on every grid direction.
inline bool origin_interior(const Body& K, const DirectionGrid& grid, double delta = 1e-9) {
  for (double h : support_on(K, grid)) {
    if (!(h > delta)) return false;
  }
  return true;
}

namespace detail {

// max <x,u> subject to <x, v_i> <= 1.
inline double polar_support_lp(const std::vector<Vector>& V, const Vector& u) {
  const int n = u.dim();
  LpProblem lp;
  lp.sense = Sense::maximize;
  lp.objective.assign(u.begin(), u.end());
  lp.lower.assign(static_cast<std::size_t>(n), -std::numeric_limits<double>::infinity());
  lp.upper.assign(static_cast<std::size_t>(n), std::numeric_limits<double>::infinity());
  for (const auto& v : V) lp.add(std::vector<double>(v.begin(), v.end()), Relation::less_equal, 1.0);
  const auto s = solve_lp(lp);
  if (s.status != LpStatus::optimal) throw GeometryError("polar: support LP did not reach an optimum");
  return s.value;
}

}  // namespace detail

// Polar body K* = {x : <x,y> <= 1 for all y in K}; needs 0 in int K.
inline Body polar(const Body& K, const DirectionGrid& grid, double delta = 1e-9) {
  const int n = K.dim();
  if (grid.dim() != n) throw GeometryError("polar: grid dimension mismatch");
  if (!origin_interior(K, grid, delta)) throw GeometryError("polar: origin is not interior to the body");
  if (K.is_ball()) {
    const auto& b = K.as_ball();
    if (norm2(b.center) == 0.0) return Body::ball(b.center, 1.0 / b.radius);
    // h_{K*}(u) = 1 / rho_K(u).
    std::vector<double> h(static_cast<std::size_t>(grid.size()));
    for (int i = 0; i < grid.size(); ++i) {
      const double uc = dot(grid[i], b.center);
      const double rho = uc + std::sqrt(uc * uc - norm2(b.center) + b.radius * b.radius);
      h[static_cast<std::size_t>(i)] = 1.0 / rho;
    }
    return Body::table(grid, std::move(h), true);
  }
  if (K.is_table()) {
    if (n == 4) throw GeometryError("polar: support tables in dimension 4 are not supported");
    const auto& t = K.as_table();
    std::vector<Vector> pts;
    for (int i = 0; i < t.grid.size(); ++i) pts.push_back(t.grid[i] / (*t.values)[static_cast<std::size_t>(i)]);
    return Body::polytope(std::move(pts));
  }
  const auto& h = K.hull();
  if (n == 4) {
    std::vector<double> vals(static_cast<std::size_t>(grid.size()));
    for (int i = 0; i < grid.size(); ++i) vals[static_cast<std::size_t>(i)] = detail::polar_support_lp(h.vertices, grid[i]);
    return Body::table(grid, std::move(vals), false);
  }
  if (!h.full_dimensional()) throw GeometryError("polar: body has empty interior");
  std::vector<Vector> pts;
  pts.reserve(h.facets.size());
  for (const auto& f : h.facets) {
    if (!(f.offset > 0.0)) throw GeometryError("polar: origin on the boundary");
    pts.push_back(f.normal / f.offset);
  }
  return Body::polytope(std::move(pts));
}

// Same hull-reduced vertex sets within tol (order-free).
inline bool same_vertex_set(const std::vector<Vector>& a, const std::vector<Vector>& b, double tol) {
  if (a.size() != b.size()) return false;
  std::vector<char> used(b.size(), 0);
  for (const auto& x : a) {
    bool found = false;
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (!used[j] && approx_equal(x, b[j], tol)) {
        used[j] = 1;
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

inline Vector reflect(const Vector& x, const Vector& unit_normal) { return x - 2.0 * dot(x, unit_normal) * unit_normal; }

// Invariance under the reflections through the hyperplanes normal to
// `normals` (which must span R^n).
inline bool reflect_invariant(const Body& K, const std::vector<Vector>& normals, double tol = 1e-9) {
  const int n = K.dim();
  if (static_cast<int>(normals.size()) < n) throw GeometryError("reflect_invariant: need n independent normals");
  Eigen::MatrixXd M(static_cast<Eigen::Index>(normals.size()), n);
  for (std::size_t i = 0; i < normals.size(); ++i) {
    if (normals[i].dim() != n) throw GeometryError("reflect_invariant: normal dimension mismatch");
    for (int a = 0; a < n; ++a) M(static_cast<Eigen::Index>(i), a) = normals[i][a];
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(M);
  lu.setThreshold(1e-9);
  if (lu.rank() < n) throw GeometryError("reflect_invariant: normals do not span R^n");
  if (K.is_ball()) {
    for (const auto& nu : normals) {
      if (!approx_equal(reflect(K.as_ball().center, normalized(nu)), K.as_ball().center, tol)) return false;
    }
    return true;
  }
  if (!K.is_polytope()) throw GeometryError("reflect_invariant: support tables are not supported");
  const auto& V = K.vertices();
  for (const auto& nu : normals) {
    const Vector e = normalized(nu);
    std::vector<Vector> R;
    for (const auto& v : V) R.push_back(reflect(v, e));
    if (!same_vertex_set(R, V, tol)) return false;
  }
  return true;
}

inline bool is_origin_symmetric(const Body& K, double tol = 1e-9) {
  if (K.is_ball()) return max_abs(K.as_ball().center) <= tol;
  if (K.is_polytope()) {
    std::vector<Vector> neg;
    for (const auto& v : K.vertices()) neg.push_back(-v);
    return same_vertex_set(neg, K.vertices(), tol);
  }
  const auto& t = K.as_table();
  for (int i = 0; i < t.grid.size(); ++i) {
    if (std::abs((*t.values)[static_cast<std::size_t>(i)] - (*t.values)[static_cast<std::size_t>(t.grid.antipode(i))]) > tol) {
      return false;
    }
  }
  return true;
}

}  // namespace lpbm
