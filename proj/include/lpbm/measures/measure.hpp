#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <numbers>
#include <optional>
#include <unordered_map>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "lpbm/core/estimate.hpp"
#include "lpbm/core/rng.hpp"
#include "lpbm/geometry/body.hpp"
#include "lpbm/geometry/indicator.hpp"
#include "lpbm/measures/density.hpp"
#include "lpbm/solver/membership.hpp"

namespace lpbm {

// Membership oracle tuned per representation. Lower-dimensional
// polytopes are null sets for every measure here and report false.
class BodyIndicator {
 public:
  explicit BodyIndicator(const Body& K) : body_(K) {
    if (K.is_polytope()) {
      const auto& h = K.as_polytope().hull;
      if (!h->full_dimensional()) {
        null_ = true;
      } else if (h->dim <= 3) {
        fast_ = std::make_shared<ConvexIndicator>(h);
      }
    }
  }

  bool operator()(const Vector& x) const {
    if (null_) return false;
    if (fast_) return fast_->contains(x);
    return membership(x, body_, 0.0);
  }

 private:
  Body body_;
  bool null_ = false;
  std::shared_ptr<const ConvexIndicator> fast_;
};

// ---------------------------------------------------------------- volumes

inline double polygon_area(const std::vector<Vector>& ccw) {
  double a = 0.0;
  const std::size_t m = ccw.size();
  const Vector& c = ccw.front();
  for (std::size_t i = 1; i + 1 < m; ++i) {
    const Vector& p = ccw[i];
    const Vector& q = ccw[i + 1];
    a += 0.5 * ((p[0] - c[0]) * (q[1] - c[1]) - (p[1] - c[1]) * (q[0] - c[0]));
  }
  return a;
}

inline double polygon_perimeter(const std::vector<Vector>& ccw) {
  double s = 0.0;
  for (std::size_t i = 0; i < ccw.size(); ++i) s += distance(ccw[i], ccw[(i + 1) % ccw.size()]);
  return s;
}

namespace detail {

inline double hull_volume(const HullData& h) {
  if (!h.full_dimensional()) return 0.0;
  const auto& V = h.vertices;
  switch (h.dim) {
    case 1: return V[1][0] - V[0][0];
    case 2: {
      // Fan from the vertex centroid.
      double a = 0.0;
      for (std::size_t i = 0; i < V.size(); ++i) {
        const Vector p = V[i] - h.interior, q = V[(i + 1) % V.size()] - h.interior;
        a += 0.5 * (p[0] * q[1] - p[1] * q[0]);
      }
      return a;
    }
    case 3: {
      double v = 0.0;
      for (const auto& t : h.triangles) {
        const Vector a = V[t[0]] - h.interior, b = V[t[1]] - h.interior, c = V[t[2]] - h.interior;
        v += dot(a, Vector{b[1] * c[2] - b[2] * c[1], b[2] * c[0] - b[0] * c[2], b[0] * c[1] - b[1] * c[0]}) / 6.0;
      }
      return v;
    }
    default: break;
  }
  throw MeasureError("volume_exact: dimension 4 polytopes need volume_mc");
}

}  // namespace detail

// Exact volume: polytopes in n <= 3, balls in any n.
inline Estimate volume_exact(const Body& K) {
  if (K.is_ball()) return Estimate::exact(kappa(K.dim()) * std::pow(K.as_ball().radius, K.dim()));
  if (!K.is_polytope()) throw MeasureError("volume_exact: support tables need volume_mc");
  return Estimate::exact(detail::hull_volume(K.hull()));
}

inline bool has_exact_volume(const Body& K) { return K.is_ball() || (K.is_polytope() && K.dim() <= 3); }

// Intrinsic volumes V_0..V_k of a hull, computed in its affine hull
// (k = affine dimension <= 3). Feeds the exact parallel-volume engine.
inline std::vector<double> hull_intrinsic_volumes(const HullData& h) {
  if (h.affine_dim == 0) return {1.0};
  if (!h.full_dimensional()) return hull_intrinsic_volumes(*h.sub);
  const auto& V = h.vertices;
  switch (h.dim) {
    case 1: return {1.0, V[1][0] - V[0][0]};
    case 2: return {1.0, 0.5 * polygon_perimeter(V), detail::hull_volume(h)};
    case 3: {
      double area = 0.0;
      std::vector<Vector> tn;
      for (const auto& t : h.triangles) {
        const Vector a = V[t[1]] - V[t[0]], b = V[t[2]] - V[t[0]];
        const Vector c{a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
        area += 0.5 * norm(c);
        tn.push_back(c / norm(c));
      }
      // Sum over edges of length * exterior angle / 2 (mean-width term).
      std::unordered_map<std::uint64_t, std::size_t> owner;
      for (std::size_t i = 0; i < h.triangles.size(); ++i) {
        const auto& t = h.triangles[i];
        for (int e = 0; e < 3; ++e) {
          const auto a = static_cast<std::uint32_t>(t[static_cast<std::size_t>(e)]);
          const auto b = static_cast<std::uint32_t>(t[static_cast<std::size_t>((e + 1) % 3)]);
          owner[(static_cast<std::uint64_t>(a) << 32) | b] = i;
        }
      }
      double m = 0.0;
      for (std::size_t i = 0; i < h.triangles.size(); ++i) {
        const auto& t = h.triangles[i];
        for (int e = 0; e < 3; ++e) {
          const int a = t[static_cast<std::size_t>(e)];
          const int b = t[static_cast<std::size_t>((e + 1) % 3)];
          if (a > b) continue;  // each undirected edge once
          const auto it = owner.find((static_cast<std::uint64_t>(static_cast<std::uint32_t>(b)) << 32) | static_cast<std::uint32_t>(a));
          if (it == owner.end()) continue;
          const Vector& n1 = tn[i];
          const Vector& n2 = tn[it->second];
          const Vector cr{n1[1] * n2[2] - n1[2] * n2[1], n1[2] * n2[0] - n1[0] * n2[2], n1[0] * n2[1] - n1[1] * n2[0]};
          const double theta = std::atan2(norm(cr), dot(n1, n2));
          m += 0.5 * distance(V[a], V[b]) * theta;
        }
      }
      return {1.0, m / std::numbers::pi, 0.5 * area, detail::hull_volume(h)};
    }
    default: break;
  }
  throw MeasureError("hull_intrinsic_volumes: dimension 4 is not supported");
}

// vol(K + tB_n), exact: sum_j kappa_{n-j} V_j(K) t^{n-j}.
inline double parallel_volume(const Body& K, double t) {
  const int n = K.dim();
  if (K.is_ball()) return kappa(n) * std::pow(K.as_ball().radius + t, n);
  if (!K.is_polytope() || n > 3) throw MeasureError("parallel_volume: needs a polytope in n <= 3 or a ball");
  const auto V = hull_intrinsic_volumes(K.hull());
  double v = 0.0;
  for (std::size_t j = 0; j < V.size(); ++j) v += kappa(n - static_cast<int>(j)) * V[j] * std::pow(t, n - static_cast<int>(j));
  return v;
}

// vol(K + tE), exact where the representation allows it.
inline double relative_parallel_volume(const Body& K, const Body& E, double t) {
  if (t == 0.0) return volume_exact(K).value;
  if (E.is_ball()) return parallel_volume(K, t * E.as_ball().radius);
  if (K.is_ball()) return parallel_volume(scale(E, t), K.as_ball().radius);
  return volume_exact(minkowski_sum(K, scale(E, t))).value;
}

// ------------------------------------------------------------ Monte Carlo

// Hit-or-miss over the bounding box.
inline Estimate volume_mc(const Body& K, std::uint64_t seed, std::int64_t n_samples) {
  const Box box = bounding_box(K);
  const double bv = box.volume();
  if (!(bv > 0.0)) throw MeasureError("volume_mc: degenerate bounding box");
  const BodyIndicator in(K);
  Stream rng(seed, 0x501);
  double hits = 0.0;
  for (std::int64_t i = 0; i < n_samples; ++i) hits += in(rng.uniform_in_box(box)) ? 1.0 : 0.0;
  return Estimate::from_sums(hits, hits, n_samples).scaled(bv);
}

// nu(A) = Z * P(X in A) with X drawn from the normalized density.
template <class Region>
inline Estimate measure_by_sampling(const Region& in, const MeasureSpec& spec, std::uint64_t seed, std::int64_t n_samples) {
  Stream rng(seed, 0x502);
  double hits = 0.0;
  for (std::int64_t i = 0; i < n_samples; ++i) hits += in(spec.sample(rng)) ? 1.0 : 0.0;
  return Estimate::from_sums(hits, hits, n_samples).scaled(spec.mass());
}

// Axis-aligned box body? Returns the box when K is one (within 1e-12).
inline std::optional<Box> as_axis_box(const Body& K) {
  if (!K.is_polytope()) return std::nullopt;
  const auto& h = K.hull();
  if (!h.full_dimensional()) return std::nullopt;
  const Box b = bounding_box(K);
  if (static_cast<int>(h.vertices.size()) != (1 << K.dim())) return std::nullopt;
  for (const auto& v : h.vertices) {
    for (int a = 0; a < K.dim(); ++a) {
      if (std::abs(v[a] - b.lo[a]) > 1e-12 && std::abs(v[a] - b.hi[a]) > 1e-12) return std::nullopt;
    }
  }
  return b;
}

// Standard Gaussian measure. Axis boxes take the exact product-of-CDFs
// path, origin-centered balls the chi-square path.
inline Estimate gaussian_measure(const Body& K, std::uint64_t seed, std::int64_t n_samples, bool allow_exact = true) {
  if (allow_exact) {
    if (auto b = as_axis_box(K)) {
      double v = 1.0;
      for (int a = 0; a < K.dim(); ++a) v *= std_normal_cdf(b->hi[a]) - std_normal_cdf(b->lo[a]);
      return Estimate::exact(v);
    }
    if (K.is_ball() && norm2(K.as_ball().center) == 0.0) {
      const double r = K.as_ball().radius;
      return Estimate::exact(boost::math::gamma_p(0.5 * K.dim(), 0.5 * r * r));
    }
  }
  return measure_by_sampling(BodyIndicator(K), MeasureSpec::gaussian(K.dim()), seed, n_samples);
}

// integral of the density over K.
inline Estimate density_measure(const Body& K, const MeasureSpec& spec, std::uint64_t seed, std::int64_t n_samples,
                                bool allow_exact = true) {
  if (spec.dim != K.dim()) throw MeasureError("density_measure: dimension mismatch");
  switch (spec.kind) {
    case MeasureSpec::Kind::lebesgue:
      if (allow_exact && has_exact_volume(K)) return volume_exact(K);
      return volume_mc(K, seed, n_samples);
    case MeasureSpec::Kind::gaussian: return gaussian_measure(K, seed, n_samples, allow_exact);
    case MeasureSpec::Kind::product:
      if (allow_exact) {
        if (auto b = as_axis_box(K)) {
          double v = 1.0;
          for (int a = 0; a < K.dim(); ++a) v *= spec.axes[static_cast<std::size_t>(a)].interval_mass(b->lo[a], b->hi[a]);
          return Estimate::exact(v);
        }
      }
      break;
    case MeasureSpec::Kind::radial: break;
  }
  return measure_by_sampling(BodyIndicator(K), spec, seed, n_samples);
}

}  // namespace lpbm
