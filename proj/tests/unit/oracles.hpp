#pragma once

// Independent reference computations used by the unit tests. Nothing here
// calls into the library except for the Vector type.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "lpbm/core/rng.hpp"
#include "lpbm/core/vector.hpp"

namespace oracle {

using lpbm::Vector;

inline std::vector<Vector> square(double a = 1.0) { return {{-a, -a}, {a, -a}, {a, a}, {-a, a}}; }

inline std::vector<Vector> box_vertices(const std::vector<double>& lo, const std::vector<double>& hi) {
  const int n = static_cast<int>(lo.size());
  std::vector<Vector> out;
  for (unsigned m = 0; m < (1u << n); ++m) {
    Vector v(n);
    for (int a = 0; a < n; ++a) v[a] = (m >> a) & 1u ? hi[static_cast<std::size_t>(a)] : lo[static_cast<std::size_t>(a)];
    out.push_back(v);
  }
  return out;
}

inline double max_dot(const std::vector<Vector>& V, const Vector& u) {
  double m = -std::numeric_limits<double>::infinity();
  for (const auto& v : V) m = std::max(m, lpbm::dot(v, u));
  return m;
}

// max c.x s.t. A x <= b, x >= 0 by enumerating all basic solutions.
inline std::optional<double> brute_force_lp(const std::vector<std::vector<double>>& A, const std::vector<double>& b,
                                            const std::vector<double>& c) {
  const int n = static_cast<int>(c.size());
  const int m = static_cast<int>(A.size());
  // Rows: the m constraints followed by -x_j <= 0.
  std::vector<std::vector<double>> rows = A;
  std::vector<double> rhs = b;
  for (int j = 0; j < n; ++j) {
    std::vector<double> r(static_cast<std::size_t>(n), 0.0);
    r[static_cast<std::size_t>(j)] = -1.0;
    rows.push_back(r);
    rhs.push_back(0.0);
  }
  const int total = m + n;
  std::vector<int> pick(static_cast<std::size_t>(n));
  std::optional<double> best;
  // Iterate over n-subsets of the rows.
  std::vector<bool> sel(static_cast<std::size_t>(total), false);
  std::fill(sel.begin(), sel.begin() + n, true);
  do {
    Eigen::MatrixXd M(n, n);
    Eigen::VectorXd r(n);
    int k = 0;
    for (int i = 0; i < total; ++i) {
      if (!sel[static_cast<std::size_t>(i)]) continue;
      for (int j = 0; j < n; ++j) M(k, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      r(k) = rhs[static_cast<std::size_t>(i)];
      ++k;
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(M);
    if (!lu.isInvertible()) continue;
    const Eigen::VectorXd x = lu.solve(r);
    bool feasible = true;
    for (int i = 0; i < total && feasible; ++i) {
      double s = 0.0;
      for (int j = 0; j < n; ++j) s += rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] * x(j);
      feasible = s <= rhs[static_cast<std::size_t>(i)] + 1e-9;
    }
    if (!feasible) continue;
    double v = 0.0;
    for (int j = 0; j < n; ++j) v += c[static_cast<std::size_t>(j)] * x(j);
    if (!best || v > *best) best = v;
  } while (std::prev_permutation(sel.begin(), sel.end()));
  return best;
}

// Point in a counter-clockwise convex polygon via edge normals.
inline bool in_ccw_polygon(const std::vector<Vector>& P, const Vector& x) {
  for (std::size_t i = 0; i < P.size(); ++i) {
    const Vector& a = P[i];
    const Vector& b = P[(i + 1) % P.size()];
    const double cross = (b[0] - a[0]) * (x[1] - a[1]) - (b[1] - a[1]) * (x[0] - a[0]);
    if (cross < 0.0) return false;
  }
  return true;
}

// Shoelace area of a counter-clockwise polygon.
inline double shoelace(const std::vector<Vector>& P) {
  double s = 0.0;
  for (std::size_t i = 0; i < P.size(); ++i) {
    const Vector& a = P[i];
    const Vector& b = P[(i + 1) % P.size()];
    s += a[0] * b[1] - a[1] * b[0];
  }
  return 0.5 * s;
}

inline double det3(const Vector& a, const Vector& b, const Vector& c) {
  return a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0]) + a[2] * (b[0] * c[1] - b[1] * c[0]);
}

// Standard normal CDF from erfc, written out independently.
inline double Phi(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

inline bool same_points(std::vector<Vector> a, std::vector<Vector> b, double tol) {
  if (a.size() != b.size()) return false;
  for (const auto& x : a) {
    bool hit = false;
    for (const auto& y : b) hit = hit || lpbm::max_abs(x - y) <= tol;
    if (!hit) return false;
  }
  return true;
}

}  // namespace oracle
