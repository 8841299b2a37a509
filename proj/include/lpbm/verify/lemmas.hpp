#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "lpbm/psum/psum.hpp"

namespace lpbm {

struct HolderStepReport {
  int points = 0;
  double max_sum = 0.0;           // max t + s over the grid
  int violations = 0;             // t + s > 1 + tol
  double max_diagonal_gap = 0.0;  // max |t + s - 1| at mu = lambda
  double min_offdiagonal_gap = 1.0;  // min 1 - (t + s) at mu != lambda
};

// t(mu) + s(mu) <= 1 with equality exactly at mu = lambda, on an
// m x m x m grid of (p, lambda, mu); p ranges over (1, 1 + m/2].
inline HolderStepReport holder_step_check(int m = 10, double tol = 1e-12) {
  HolderStepReport r;
  for (int a = 0; a < m; ++a) {
    const double p = 1.0 + 0.5 * (a + 1);
    for (int b = 0; b < m; ++b) {
      const double lambda = (b + 0.5) / m;
      const PCombination c = PCombination::make(p, lambda);
      for (int k = 0; k < m; ++k) {
        const double mu = (k + 0.5) / m;
        const double sum = c.t(mu) + c.s(mu);
        ++r.points;
        r.max_sum = std::max(r.max_sum, sum);
        if (sum > 1.0 + tol) ++r.violations;
        if (k == b) {
          r.max_diagonal_gap = std::max(r.max_diagonal_gap, std::abs(sum - 1.0));
        } else {
          r.min_offdiagonal_gap = std::min(r.min_offdiagonal_gap, 1.0 - sum);
        }
      }
    }
  }
  return r;
}

// M_r(a, b; lambda) is nondecreasing in r over the given exponents
// (sorted ascending, all nonzero).
inline bool power_mean_monotone(double a, double b, double lambda, const std::vector<double>& exponents,
                                double tol = 1e-12) {
  double prev = -1.0;
  for (double r : exponents) {
    const double m = std::pow((1.0 - lambda) * std::pow(a, r) + lambda * std::pow(b, r), 1.0 / r);
    if (m < prev * (1.0 - tol)) return false;
    prev = m;
  }
  return true;
}

}  // namespace lpbm
