#pragma once

#include <vector>

#include "lpbm/geometry/body.hpp"
#include "lpbm/solver/lp.hpp"

namespace lpbm {

// x in conv(V): feasibility of  sum l_i v_i = x, sum l_i = 1, l >= 0.
inline bool membership_lp(const Vector& x, const std::vector<Vector>& V, double tol = 1e-8) {
  LpProblem lp;
  lp.sense = Sense::minimize;
  lp.objective.assign(V.size(), 0.0);
  for (int a = 0; a < x.dim(); ++a) {
    std::vector<double> row(V.size());
    for (std::size_t i = 0; i < V.size(); ++i) row[i] = V[i][a];
    lp.add(std::move(row), Relation::equal, x[a]);
  }
  lp.add(std::vector<double>(V.size(), 1.0), Relation::equal, 1.0);
  LpOptions opts;
  opts.feasibility_tol = tol;
  return solve_lp(lp, opts).status == LpStatus::optimal;
}

// x in K. Polytopes go through the LP (or, equivalently and faster, the
// facet list of a full-dimensional hull); balls use the norm; support
// tables test every grid halfspace, i.e. membership in the outer polytope.
inline bool membership(const Vector& x, const Body& K, double tol = 1e-8) {
  if (x.dim() != K.dim()) throw GeometryError("membership: dimension mismatch");
  if (K.is_ball()) return distance(x, K.as_ball().center) <= K.as_ball().radius + tol;
  if (K.is_table()) {
    const auto& t = K.as_table();
    for (int i = 0; i < t.grid.size(); ++i) {
      if (dot(x, t.grid[i]) > (*t.values)[static_cast<std::size_t>(i)] + tol) return false;
    }
    return true;
  }
  const HullData& h = K.hull();
  if (h.full_dimensional() && !h.facets.empty()) {
    for (const auto& f : h.facets) {
      if (dot(x, f.normal) > f.offset + tol) return false;
    }
    return true;
  }
  return membership_lp(x, h.vertices, tol);
}

}  // namespace lpbm
