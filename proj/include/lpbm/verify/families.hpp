#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "lpbm/core/error.hpp"
#include "lpbm/core/rng.hpp"
#include "lpbm/geometry/body.hpp"
#include "lpbm/geometry/predicates.hpp"

namespace lpbm {

enum class Generator {
  symmetric_polytope,
  unconditional_box,
  weakly_unconditional,
  reflection_invariant,
  dilatate_pair,
  identical_pair,
  generic_origin_interior,
};

inline std::optional<Generator> generator_from_string(const std::string& s) {
  if (s == "symmetric_polytope") return Generator::symmetric_polytope;
  if (s == "unconditional_box") return Generator::unconditional_box;
  if (s == "weakly_unconditional") return Generator::weakly_unconditional;
  if (s == "reflection_invariant") return Generator::reflection_invariant;
  if (s == "dilatate_pair") return Generator::dilatate_pair;
  if (s == "identical_pair") return Generator::identical_pair;
  if (s == "generic_origin_interior") return Generator::generic_origin_interior;
  return std::nullopt;
}

inline std::string to_string(Generator g) {
  switch (g) {
    case Generator::symmetric_polytope: return "symmetric_polytope";
    case Generator::unconditional_box: return "unconditional_box";
    case Generator::weakly_unconditional: return "weakly_unconditional";
    case Generator::reflection_invariant: return "reflection_invariant";
    case Generator::dilatate_pair: return "dilatate_pair";
    case Generator::identical_pair: return "identical_pair";
    case Generator::generic_origin_interior: return "generic_origin_interior";
  }
  return "?";
}

struct PairFamily {
  std::string name;
  Generator generator = Generator::symmetric_polytope;
  int dim = 2;
  std::uint64_t seed = 1;
  int count = 20;
  double scale = 1.0;
  std::vector<Vector> normals;  // reflection_invariant; empty = default set
};

enum class PairRelation { generic, identical, dilatate };

inline std::string to_string(PairRelation r) {
  switch (r) {
    case PairRelation::generic: return "generic";
    case PairRelation::identical: return "identical";
    case PairRelation::dilatate: return "dilatate";
  }
  return "?";
}

struct BodyPair {
  int id = 0;
  Body K;
  Body L;
  PairRelation relation = PairRelation::generic;
  double ratio = 1.0;  // L = ratio * K for dilatates
};

// Hyperplane normals generating a finite reflection group.
//   n = 2: lines at 60 degrees (dihedral group of order 6)
//   n = 3: e_1, e_2 and (e_2 + e_3)/sqrt2 (order 16)
inline std::vector<Vector> default_reflection_normals(int n) {
  switch (n) {
    case 1: return {Vector{1.0}};
    case 2: return {Vector{1.0, 0.0}, Vector{0.5, std::sqrt(3.0) / 2.0}};
    case 3: return {Vector{1.0, 0.0, 0.0}, Vector{0.0, 1.0, 0.0}, Vector{0.0, std::numbers::sqrt2 / 2, std::numbers::sqrt2 / 2}};
    default: break;
  }
  std::vector<Vector> e;
  for (int a = 0; a < n; ++a) {
    Vector v(n);
    v[a] = 1.0;
    e.push_back(v);
  }
  return e;
}

namespace detail {

inline std::vector<Vector> normal_points(int n, int k, double scale, Stream& rng) {
  std::vector<Vector> pts;
  for (int i = 0; i < k; ++i) pts.push_back(scale * rng.normal_vector(n));
  return pts;
}

inline int vertex_budget(int n, Stream& rng) { return rng.uniform_int(n + 1, 3 * n); }

// Orbit closure of a point set under reflections (finite groups only).
inline std::vector<Vector> reflection_orbit(std::vector<Vector> pts, const std::vector<Vector>& normals) {
  std::vector<Vector> unit;
  for (const auto& v : normals) unit.push_back(normalized(v));
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (const auto& e : unit) {
      const Vector r = reflect(pts[i], e);
      bool seen = false;
      for (const auto& q : pts) {
        if (approx_equal(q, r, 1e-9)) {
          seen = true;
          break;
        }
      }
      if (!seen) pts.push_back(r);
    }
    if (pts.size() > 20000) throw VerifyError("reflection orbit: group is not finite (or too large)");
  }
  return pts;
}

inline Body full_dim_body(const std::function<std::vector<Vector>()>& make) {
  for (int attempt = 0; attempt < 100; ++attempt) {
    Body K = Body::polytope(make());
    if (K.hull().full_dimensional()) return K;
  }
  throw VerifyError("generate_pairs: could not draw a full-dimensional body");
}

inline Body random_symmetric(int n, double scale, Stream& rng) {
  return full_dim_body([&] {
    auto pts = normal_points(n, vertex_budget(n, rng), scale, rng);
    const std::size_t k = pts.size();
    for (std::size_t i = 0; i < k; ++i) pts.push_back(-pts[i]);
    return pts;
  });
}

inline Body random_box(int n, double scale, Stream& rng) {
  Box b{Vector(n), Vector(n)};
  for (int a = 0; a < n; ++a) {
    b.lo[a] = -scale * rng.uniform(0.3, 2.0);
    b.hi[a] = scale * rng.uniform(0.3, 2.0);
  }
  std::vector<Vector> pts;
  for (unsigned m = 0; m < (1u << n); ++m) {
    Vector v(n);
    for (int a = 0; a < n; ++a) v[a] = (m >> a) & 1u ? b.hi[a] : b.lo[a];
    pts.push_back(v);
  }
  return Body::polytope(std::move(pts));
}

inline Body random_weakly_unconditional(int n, double scale, Stream& rng) {
  return full_dim_body([&] {
    const auto base = normal_points(n, vertex_budget(n, rng), scale, rng);
    std::vector<Vector> pts;
    for (const auto& x : base) {
      for (unsigned m = 0; m < (1u << n); ++m) pts.push_back(mask_coordinates(x, m));
    }
    return pts;
  });
}

inline Body random_reflection_invariant(int n, double scale, const std::vector<Vector>& normals, Stream& rng) {
  return full_dim_body([&] { return reflection_orbit(normal_points(n, rng.uniform_int(1, n), scale, rng), normals); });
}

inline Body random_origin_interior(int n, double scale, Stream& rng) {
  const DirectionGrid grid(n);
  for (int attempt = 0; attempt < 100; ++attempt) {
    const Body K = full_dim_body([&] { return normal_points(n, vertex_budget(n, rng), scale, rng); });
    Vector c(n);
    for (const auto& v : K.vertices()) c += v;
    c = c / static_cast<double>(K.vertices().size());
    Body C = translate(K, -1.0 * c);
    if (origin_interior(C, grid, 1e-3 * scale)) return C;
  }
  throw VerifyError("generate_pairs: could not center a body");
}

inline Body draw(const PairFamily& f, Stream& rng, const std::vector<Vector>& normals) {
  switch (f.generator) {
    case Generator::symmetric_polytope:
    case Generator::dilatate_pair:
    case Generator::identical_pair: return random_symmetric(f.dim, f.scale, rng);
    case Generator::unconditional_box: return random_box(f.dim, f.scale, rng);
    case Generator::weakly_unconditional: return random_weakly_unconditional(f.dim, f.scale, rng);
    case Generator::reflection_invariant: return random_reflection_invariant(f.dim, f.scale, normals, rng);
    case Generator::generic_origin_interior: return random_origin_interior(f.dim, f.scale, rng);
  }
  throw VerifyError("generate_pairs: unknown generator");
}

inline bool satisfies(const PairFamily& f, const Body& K, const std::vector<Vector>& normals) {
  switch (f.generator) {
    case Generator::symmetric_polytope:
    case Generator::dilatate_pair:
    case Generator::identical_pair: return is_origin_symmetric(K);
    case Generator::unconditional_box:
    case Generator::weakly_unconditional: return is_weakly_unconditional(K, 1e-9);
    case Generator::reflection_invariant: return reflect_invariant(K, normals, 1e-7);
    case Generator::generic_origin_interior: return origin_interior(K, DirectionGrid(K.dim()));
  }
  return false;
}

}  // namespace detail

// Seeded, deterministic pairs; every body is checked against the family
// predicate before it is returned.
inline std::vector<BodyPair> generate_pairs(const PairFamily& f) {
  if (f.dim < 1 || f.dim > kMaxDim) throw VerifyError("family " + f.name + ": dimension must lie in [1, 4]");
  if (f.count < 0) throw VerifyError("family " + f.name + ": negative count");
  if (!(f.scale > 0.0)) throw VerifyError("family " + f.name + ": scale must be positive");
  const auto normals = f.normals.empty() ? default_reflection_normals(f.dim) : f.normals;
  std::vector<BodyPair> out;
  for (int i = 0; i < f.count; ++i) {
    Stream rng(f.seed, static_cast<std::uint64_t>(i), 0xfa);
    const Body K = detail::draw(f, rng, normals);
    BodyPair bp{i, K, K};
    switch (f.generator) {
      case Generator::identical_pair: bp.relation = PairRelation::identical; break;
      case Generator::dilatate_pair:
        bp.ratio = rng.uniform(1.2, 3.0);
        bp.L = scale(K, bp.ratio);
        bp.relation = PairRelation::dilatate;
        break;
      default: bp.L = detail::draw(f, rng, normals); break;
    }
    if (!detail::satisfies(f, bp.K, normals) || !detail::satisfies(f, bp.L, normals)) {
      throw VerifyError("family " + f.name + ": generated pair " + std::to_string(i) + " fails the family predicate");
    }
    out.push_back(std::move(bp));
  }
  return out;
}

// Fixed set of seeded random polytopes with the origin inside, dimensions
// cycling through 1, 2, 3; used for cross-representation checks.
inline std::vector<Body> regression_set(int count = 20, std::uint64_t seed = 2024) {
  std::vector<Body> out;
  for (int i = 0; i < count; ++i) {
    Stream rng(seed, static_cast<std::uint64_t>(i), 0x7e9);
    out.push_back(detail::random_origin_interior(i % 3 + 1, 1.0, rng));
  }
  return out;
}

}  // namespace lpbm
