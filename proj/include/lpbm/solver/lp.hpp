#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lpbm/core/error.hpp"

namespace lpbm {

enum class Relation { less_equal, equal, greater_equal };
enum class Sense { minimize, maximize };
enum class LpStatus { optimal, infeasible, unbounded };

inline std::string to_string(LpStatus s) {
  switch (s) {
    case LpStatus::optimal: return "optimal";
    case LpStatus::infeasible: return "infeasible";
    case LpStatus::unbounded: return "unbounded";
  }
  return "?";
}

struct LpConstraint {
  std::vector<double> row;
  Relation relation = Relation::less_equal;
  double rhs = 0.0;
};

// Dense LP. Variables default to [0, +inf); set `lower`/`upper` (same
// length as `objective`) to change that, using +-infinity for free sides.
struct LpProblem {
  Sense sense = Sense::maximize;
  std::vector<double> objective;
  std::vector<LpConstraint> constraints;
  std::vector<double> lower;
  std::vector<double> upper;

  int num_vars() const { return static_cast<int>(objective.size()); }

  void add(std::vector<double> row, Relation rel, double rhs) {
    constraints.push_back(LpConstraint{std::move(row), rel, rhs});
  }

  void set_free(int j) {
    ensure_bounds();
    lower[static_cast<std::size_t>(j)] = -std::numeric_limits<double>::infinity();
  }

  void ensure_bounds() {
    if (lower.empty()) lower.assign(objective.size(), 0.0);
    if (upper.empty()) upper.assign(objective.size(), std::numeric_limits<double>::infinity());
  }
};

struct LpSolution {
  LpStatus status = LpStatus::infeasible;
  double value = 0.0;
  std::vector<double> point;
  // Objective of the dual solution read off the final basis.
  double dual_value = 0.0;
  int iterations = 0;
};

struct LpOptions {
  double feasibility_tol = 1e-8;
  int max_vars = 200;
  int max_constraints = 400;
};

namespace detail {

class Tableau {
 public:
  Tableau(int rows, int cols) : t_(Eigen::MatrixXd::Zero(rows + 1, cols + 1)), rows_(rows), cols_(cols) {}

  double& at(int i, int j) { return t_(i, j); }
  double at(int i, int j) const { return t_(i, j); }
  double& rhs(int i) { return t_(i, cols_); }
  double rhs(int i) const { return t_(i, cols_); }
  double& cost(int j) { return t_(rows_, j); }
  double cost(int j) const { return t_(rows_, j); }
  double& objective_rhs() { return t_(rows_, cols_); }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  void pivot(int r, int c) {
    const double p = t_(r, c);
    t_.row(r) /= p;
    for (int i = 0; i <= rows_; ++i) {
      if (i == r) continue;
      const double f = t_(i, c);
      if (f != 0.0) t_.row(i) -= f * t_.row(r);
    }
    t_(r, c) = 1.0;
  }

 private:
  Eigen::MatrixXd t_;
  int rows_;
  int cols_;
};

}  // namespace detail

// Two-phase dense simplex with Bland's rule. Deterministic for a given
// problem. Throws SolverError on size overflow or when the final basis
// does not reproduce a feasible point (numerical breakdown).
inline LpSolution solve_lp(const LpProblem& problem, const LpOptions& opts = {}) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  constexpr double kPivotEps = 1e-10;
  constexpr double kCostEps = 1e-10;

  const int n = problem.num_vars();
  if (n < 1) throw SolverError("solve_lp: problem has no variables");
  if (n > opts.max_vars) throw SolverError("solve_lp: too many variables (" + std::to_string(n) + ")");
  if (static_cast<int>(problem.constraints.size()) > opts.max_constraints) {
    throw SolverError("solve_lp: too many constraints (" + std::to_string(problem.constraints.size()) + ")");
  }
  for (double c : problem.objective) {
    if (!std::isfinite(c)) throw SolverError("solve_lp: non-finite objective coefficient");
  }
  for (const auto& con : problem.constraints) {
    if (static_cast<int>(con.row.size()) != n) throw SolverError("solve_lp: inconsistent row dimension");
    if (!std::isfinite(con.rhs)) throw SolverError("solve_lp: non-finite right-hand side");
    for (double a : con.row) {
      if (!std::isfinite(a)) throw SolverError("solve_lp: non-finite constraint coefficient");
    }
  }
  auto bound = [&](const std::vector<double>& v, int j, double dflt) {
    return v.empty() ? dflt : v[static_cast<std::size_t>(j)];
  };

  // Substitute every original variable by nonnegative columns:
  // x_j = offset_j + sum coef * x'_col.
  struct Term {
    int col;
    double coef;
  };
  std::vector<std::vector<Term>> terms(static_cast<std::size_t>(n));
  std::vector<double> offset(static_cast<std::size_t>(n), 0.0);
  struct BoundRow {
    int col;
    double cap;
  };
  std::vector<BoundRow> bound_rows;
  int ncols = 0;
  for (int j = 0; j < n; ++j) {
    const double lo = bound(problem.lower, j, 0.0);
    const double hi = bound(problem.upper, j, kInf);
    if (lo > hi) {
      LpSolution s;
      s.status = LpStatus::infeasible;
      return s;
    }
    auto& tj = terms[static_cast<std::size_t>(j)];
    if (std::isfinite(lo)) {
      offset[static_cast<std::size_t>(j)] = lo;
      tj.push_back({ncols, 1.0});
      if (std::isfinite(hi)) bound_rows.push_back({ncols, hi - lo});
      ++ncols;
    } else if (std::isfinite(hi)) {
      offset[static_cast<std::size_t>(j)] = hi;
      tj.push_back({ncols, -1.0});
      ++ncols;
    } else {
      tj.push_back({ncols, 1.0});
      tj.push_back({ncols + 1, -1.0});
      ncols += 2;
    }
  }

  const int m = static_cast<int>(problem.constraints.size() + bound_rows.size());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m, ncols);
  std::vector<double> b(static_cast<std::size_t>(m), 0.0);
  std::vector<Relation> rel(static_cast<std::size_t>(m), Relation::less_equal);
  int r = 0;
  for (const auto& con : problem.constraints) {
    double shift = 0.0;
    for (int j = 0; j < n; ++j) {
      const double aj = con.row[static_cast<std::size_t>(j)];
      if (aj == 0.0) continue;
      shift += aj * offset[static_cast<std::size_t>(j)];
      for (const auto& t : terms[static_cast<std::size_t>(j)]) a(r, t.col) += aj * t.coef;
    }
    b[static_cast<std::size_t>(r)] = con.rhs - shift;
    rel[static_cast<std::size_t>(r)] = con.relation;
    ++r;
  }
  for (const auto& br : bound_rows) {
    a(r, br.col) = 1.0;
    b[static_cast<std::size_t>(r)] = br.cap;
    ++r;
  }

  const double sense = problem.sense == Sense::minimize ? 1.0 : -1.0;
  std::vector<double> cost(static_cast<std::size_t>(ncols), 0.0);
  double cost_const = 0.0;
  for (int j = 0; j < n; ++j) {
    const double cj = problem.objective[static_cast<std::size_t>(j)];
    cost_const += cj * offset[static_cast<std::size_t>(j)];
    for (const auto& t : terms[static_cast<std::size_t>(j)]) cost[static_cast<std::size_t>(t.col)] += sense * cj * t.coef;
  }

  // Nonnegative right-hand sides.
  std::vector<double> row_sign(static_cast<std::size_t>(m), 1.0);
  for (int i = 0; i < m; ++i) {
    if (b[static_cast<std::size_t>(i)] < 0.0) {
      a.row(i) *= -1.0;
      b[static_cast<std::size_t>(i)] *= -1.0;
      row_sign[static_cast<std::size_t>(i)] = -1.0;
      auto& ri = rel[static_cast<std::size_t>(i)];
      if (ri == Relation::less_equal) {
        ri = Relation::greater_equal;
      } else if (ri == Relation::greater_equal) {
        ri = Relation::less_equal;
      }
    }
  }

  // Column layout: structural | slacks | artificials.
  int nslack = 0;
  int nart = 0;
  for (auto ri : rel) {
    if (ri != Relation::equal) ++nslack;
    if (ri != Relation::less_equal) ++nart;
  }
  const int total = ncols + nslack + nart;
  const int art_begin = ncols + nslack;
  detail::Tableau tab(m, total);
  std::vector<int> basis(static_cast<std::size_t>(m));
  std::vector<int> identity_col(static_cast<std::size_t>(m));
  {
    int s = ncols;
    int art = art_begin;
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < ncols; ++j) tab.at(i, j) = a(i, j);
      tab.rhs(i) = b[static_cast<std::size_t>(i)];
      const auto ri = rel[static_cast<std::size_t>(i)];
      if (ri == Relation::less_equal) {
        tab.at(i, s) = 1.0;
        identity_col[static_cast<std::size_t>(i)] = s++;
      } else {
        if (ri == Relation::greater_equal) tab.at(i, s++) = -1.0;
        tab.at(i, art) = 1.0;
        identity_col[static_cast<std::size_t>(i)] = art++;
      }
      basis[static_cast<std::size_t>(i)] = identity_col[static_cast<std::size_t>(i)];
    }
  }

  int iterations = 0;
  const int max_iter = 20000 + 50 * (m + total);
  enum class Outcome { optimal, unbounded };
  auto run_simplex = [&](bool allow_artificial) {
    for (;;) {
      if (++iterations > max_iter) throw SolverError("solve_lp: iteration limit reached");
      int enter = -1;
      for (int j = 0; j < total; ++j) {
        if (!allow_artificial && j >= art_begin) break;
        if (tab.cost(j) < -kCostEps) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return Outcome::optimal;
      int leave = -1;
      double best = kInf;
      for (int i = 0; i < m; ++i) {
        const double aij = tab.at(i, enter);
        if (aij <= kPivotEps) continue;
        const double ratio = tab.rhs(i) / aij;
        if (ratio < best - 1e-14 ||
            (std::abs(ratio - best) <= 1e-14 && basis[static_cast<std::size_t>(i)] < basis[static_cast<std::size_t>(leave)])) {
          best = ratio;
          leave = i;
        }
      }
      if (leave < 0) return Outcome::unbounded;
      tab.pivot(leave, enter);
      basis[static_cast<std::size_t>(leave)] = enter;
    }
  };
  auto load_costs = [&](const std::vector<double>& c) {
    for (int j = 0; j <= total; ++j) tab.at(m, j) = j < total ? c[static_cast<std::size_t>(j)] : 0.0;
    for (int i = 0; i < m; ++i) {
      const double cb = c[static_cast<std::size_t>(basis[static_cast<std::size_t>(i)])];
      if (cb == 0.0) continue;
      for (int j = 0; j <= total; ++j) tab.at(m, j) -= cb * tab.at(i, j);
    }
  };

  double bmax = 0.0;
  for (double bi : b) bmax = std::max(bmax, bi);

  LpSolution sol;
  if (nart > 0) {
    std::vector<double> c1(static_cast<std::size_t>(total), 0.0);
    for (int j = art_begin; j < total; ++j) c1[static_cast<std::size_t>(j)] = 1.0;
    load_costs(c1);
    run_simplex(true);
    const double infeas = -tab.objective_rhs();
    if (infeas > opts.feasibility_tol * (1.0 + bmax)) {
      sol.status = LpStatus::infeasible;
      sol.iterations = iterations;
      return sol;
    }
    // Drive zero-level artificials out of the basis where possible; rows
    // where that fails are redundant and stay inert.
    for (int i = 0; i < m; ++i) {
      if (basis[static_cast<std::size_t>(i)] < art_begin) continue;
      int col = -1;
      double best = 1e-9;
      for (int j = 0; j < art_begin; ++j) {
        if (std::abs(tab.at(i, j)) > best) {
          best = std::abs(tab.at(i, j));
          col = j;
        }
      }
      if (col >= 0) {
        tab.pivot(i, col);
        basis[static_cast<std::size_t>(i)] = col;
        tab.rhs(i) = std::max(0.0, tab.rhs(i));
      }
    }
  }

  std::vector<double> c2(static_cast<std::size_t>(total), 0.0);
  for (int j = 0; j < ncols; ++j) c2[static_cast<std::size_t>(j)] = cost[static_cast<std::size_t>(j)];
  load_costs(c2);
  const Outcome out = run_simplex(false);
  sol.iterations = iterations;
  if (out == Outcome::unbounded) {
    sol.status = LpStatus::unbounded;
    sol.value = problem.sense == Sense::maximize ? kInf : -kInf;
    sol.dual_value = sol.value;
    return sol;
  }

  std::vector<double> xc(static_cast<std::size_t>(total), 0.0);
  for (int i = 0; i < m; ++i) xc[static_cast<std::size_t>(basis[static_cast<std::size_t>(i)])] = tab.rhs(i);
  sol.point.assign(static_cast<std::size_t>(n), 0.0);
  for (int j = 0; j < n; ++j) {
    double v = offset[static_cast<std::size_t>(j)];
    for (const auto& t : terms[static_cast<std::size_t>(j)]) v += t.coef * xc[static_cast<std::size_t>(t.col)];
    sol.point[static_cast<std::size_t>(j)] = v;
  }
  sol.value = 0.0;
  for (int j = 0; j < n; ++j) sol.value += problem.objective[static_cast<std::size_t>(j)] * sol.point[static_cast<std::size_t>(j)];

  double dual = 0.0;
  for (int i = 0; i < m; ++i) {
    const double y = -tab.cost(identity_col[static_cast<std::size_t>(i)]);
    dual += y * b[static_cast<std::size_t>(i)];
  }
  sol.dual_value = sense * dual + cost_const;

  // Never report a point that does not satisfy the problem.
  for (const auto& con : problem.constraints) {
    double lhs = 0.0;
    double scale = std::max(1.0, std::abs(con.rhs));
    for (int j = 0; j < n; ++j) {
      const double term = con.row[static_cast<std::size_t>(j)] * sol.point[static_cast<std::size_t>(j)];
      lhs += term;
      scale = std::max(scale, std::abs(term));
    }
    const double tol = opts.feasibility_tol * scale;
    bool ok = true;
    switch (con.relation) {
      case Relation::less_equal: ok = lhs <= con.rhs + tol; break;
      case Relation::greater_equal: ok = lhs >= con.rhs - tol; break;
      case Relation::equal: ok = std::abs(lhs - con.rhs) <= tol; break;
    }
    if (!ok) throw SolverError("solve_lp: numerically singular basis (constraint residual too large)");
  }
  for (int j = 0; j < n; ++j) {
    const double x = sol.point[static_cast<std::size_t>(j)];
    const double lo = bound(problem.lower, j, 0.0);
    const double hi = bound(problem.upper, j, kInf);
    const double tol = opts.feasibility_tol * std::max(1.0, std::abs(x));
    if (x < lo - tol || x > hi + tol) throw SolverError("solve_lp: numerically singular basis (bound violated)");
  }
  sol.status = LpStatus::optimal;
  return sol;
}

}  // namespace lpbm
