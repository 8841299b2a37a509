#pragma once

#include <array>
#include <cmath>
#include <memory>
#include <numbers>
#include <vector>

#include "lpbm/core/error.hpp"
#include "lpbm/core/vector.hpp"
#include "lpbm/geometry/hull.hpp"

namespace lpbm {

// Fast membership for a full-dimensional polytope with a facet list.
//
// With c interior and w_f = a_f / (b_f - <a_f, c>), x lies in the body iff
// max_f <x - c, w_f> <= 1. The maximizing facet is found by hill climbing
// over facet adjacency (the edge graph of the polar of the body around c),
// started from a per-direction lookup table, so a query costs a handful of
// dot products instead of a scan over all facets.
class ConvexIndicator {
 public:
  ConvexIndicator() = default;

  explicit ConvexIndicator(std::shared_ptr<const HullData> hull) : hull_(std::move(hull)) {
    const HullData& h = *hull_;
    if (!h.full_dimensional() || h.facets.empty()) throw GeometryError("indicator: needs a full-dimensional hull with facets");
    n_ = h.dim;
    c_ = h.interior;
    w_.reserve(h.facets.size());
    for (const auto& f : h.facets) {
      const double d = f.offset - dot(f.normal, c_);
      if (!(d > 0.0)) throw GeometryError("indicator: interior point on a facet");
      w_.push_back(f.normal / d);
    }
    build_table();
  }

  const Vector& center() const { return c_; }
  int dim() const { return n_; }

  // Gauge of x - c with respect to K - c (Minkowski functional).
  double gauge(const Vector& x) const {
    const Vector d = x - c_;
    if (n_ == 1) return std::max(dot(d, w_[0]), dot(d, w_[1]));
    int f = table_[static_cast<std::size_t>(bin(d))];
    double best = dot(d, w_[static_cast<std::size_t>(f)]);
    for (;;) {
      int next = -1;
      for (int g : hull_->facet_adjacency[static_cast<std::size_t>(f)]) {
        const double v = dot(d, w_[static_cast<std::size_t>(g)]);
        if (v > best) {
          best = v;
          next = g;
        }
      }
      if (next < 0) return best;
      f = next;
    }
  }

  bool contains(const Vector& x, double tol = 0.0) const { return gauge(x) <= 1.0 + tol; }

  // Linear scan, for cross-checks.
  double gauge_scan(const Vector& x) const {
    const Vector d = x - c_;
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& w : w_) best = std::max(best, dot(d, w));
    return best;
  }

 private:
  static constexpr int kBins2 = 512;
  static constexpr int kFace3 = 24;

  int bin(const Vector& d) const {
    if (n_ == 2) {
      const double a = std::atan2(d[1], d[0]);
      int b = static_cast<int>((a + std::numbers::pi) / (2.0 * std::numbers::pi) * kBins2);
      return std::clamp(b, 0, kBins2 - 1);
    }
    // Cube map.
    const double ax = std::abs(d[0]), ay = std::abs(d[1]), az = std::abs(d[2]);
    int face = 0;
    double u = 0.0, v = 0.0, m = 0.0;
    if (ax >= ay && ax >= az) {
      face = d[0] >= 0 ? 0 : 1;
      m = ax;
      u = d[1];
      v = d[2];
    } else if (ay >= az) {
      face = d[1] >= 0 ? 2 : 3;
      m = ay;
      u = d[0];
      v = d[2];
    } else {
      face = d[2] >= 0 ? 4 : 5;
      m = az;
      u = d[0];
      v = d[1];
    }
    if (m == 0.0) return 0;
    const int iu = std::clamp(static_cast<int>((u / m + 1.0) * 0.5 * kFace3), 0, kFace3 - 1);
    const int iv = std::clamp(static_cast<int>((v / m + 1.0) * 0.5 * kFace3), 0, kFace3 - 1);
    return (face * kFace3 + iu) * kFace3 + iv;
  }

  Vector bin_center(int b) const {
    if (n_ == 2) {
      const double a = -std::numbers::pi + (b + 0.5) * 2.0 * std::numbers::pi / kBins2;
      return Vector{std::cos(a), std::sin(a)};
    }
    const int iv = b % kFace3;
    const int iu = (b / kFace3) % kFace3;
    const int face = b / (kFace3 * kFace3);
    const double u = -1.0 + (iu + 0.5) * 2.0 / kFace3;
    const double v = -1.0 + (iv + 0.5) * 2.0 / kFace3;
    const double s = face % 2 == 0 ? 1.0 : -1.0;
    switch (face / 2) {
      case 0: return Vector{s, u, v};
      case 1: return Vector{u, s, v};
      default: return Vector{u, v, s};
    }
  }

  int climb(const Vector& d, int f) const {
    double best = dot(d, w_[static_cast<std::size_t>(f)]);
    for (;;) {
      int next = -1;
      for (int g : hull_->facet_adjacency[static_cast<std::size_t>(f)]) {
        const double v = dot(d, w_[static_cast<std::size_t>(g)]);
        if (v > best) {
          best = v;
          next = g;
        }
      }
      if (next < 0) return f;
      f = next;
    }
  }

  void build_table() {
    if (n_ == 1) return;
    if (n_ > 3) throw GeometryError("indicator: dimension must be at most 3");
    const int nb = n_ == 2 ? kBins2 : 6 * kFace3 * kFace3;
    table_.resize(static_cast<std::size_t>(nb));
    int f = 0;
    for (int b = 0; b < nb; ++b) {
      f = climb(bin_center(b), f);
      table_[static_cast<std::size_t>(b)] = f;
    }
  }

  std::shared_ptr<const HullData> hull_;
  int n_ = 0;
  Vector c_;
  std::vector<Vector> w_;
  std::vector<int> table_;
};

}  // namespace lpbm
