#pragma once

#include <vector>

#include "lpbm/geometry/body.hpp"
#include "lpbm/solver/membership.hpp"

namespace lpbm {

// Coordinate masking: x_a -> 0 where bit a of `mask` is clear.
inline Vector mask_coordinates(const Vector& x, unsigned mask) {
  Vector y(x.dim());
  for (int a = 0; a < x.dim(); ++a) y[a] = (mask >> a) & 1u ? x[a] : 0.0;
  return y;
}

// Every {0,1}-masking of every vertex stays in the body.
inline bool is_weakly_unconditional(const Body& K, double tol = 1e-9) {
  const int n = K.dim();
  std::vector<Vector> V;
  if (K.is_polytope()) {
    V = K.vertices();
  } else if (K.is_ball()) {
    // Masking never increases the norm, so centered balls qualify; other
    // balls are outside the supported inputs.
    if (max_abs(K.as_ball().center) <= tol) return true;
    throw GeometryError("is_weakly_unconditional: off-center balls are not supported");
  } else {
    throw GeometryError("is_weakly_unconditional: support tables are not supported");
  }
  for (const auto& v : V) {
    for (unsigned m = 0; m + 1 < (1u << n); ++m) {
      if (!membership(mask_coordinates(v, m), K, tol)) return false;
    }
  }
  return true;
}

inline bool is_weakly_unconditional(const std::vector<Vector>& points, double tol = 1e-9) {
  return is_weakly_unconditional(Body::polytope(points), tol);
}

}  // namespace lpbm
