// Walks through one pair (square, disc): the p-sum bodies, a Gaussian
// L_p Brunn-Minkowski instance and its polar-quermassintegral analogue.

#include <cstdio>

#include "lpbm/lpbm.hpp"

using namespace lpbm;

int main() {
  const Body K = Body::polytope({{-1, -1}, {1, -1}, {1, 1}, {-1, 1}});
  const Body L = Body::ball(Vector(2), 1.0);
  const DirectionGrid grid(2);
  const double lambda = 0.5;

  std::printf("p-sums of the square and the unit disc, lambda = %.2f\n", lambda);
  std::printf("%6s %14s %14s %14s\n", "p", "area(inner)", "area(outer)", "h(e1)");
  for (double p : {1.0, 1.5, 2.0, 4.0, 16.0}) {
    const PCombination c = PCombination::make(p, lambda);
    const Body inner = lyz_inner_body(K, inner_polytope(L, grid), c, MuGrid::uniform(256, {lambda}));
    const Body outer = firey_combination(K, L, c, grid);
    const auto a_out = volume_mc(outer, 1, 200000);
    std::printf("%6.1f %14.6f %9.4f+-%.4f %14.6f\n", p, volume_exact(inner).value, a_out.value, a_out.std_error,
                support(inner, Vector{1, 0}));
  }

  InequalitySpec gauss;
  gauss.name = "gaussian";
  gauss.functional = FunctionalSpec::of_measure(MeasureSpec::gaussian(2));
  gauss.alpha = 0.5;
  EvalSettings s;
  s.n_samples = 100000;
  const BodyPair pair{0, K, L};
  const PairEvaluator ev(gauss.functional, K, L, s, 7);
  std::printf("\nGaussian measure: gamma(K) = %.5f, gamma(L) = %.5f\n", ev.fk().est.value, ev.fl().est.value);
  std::printf("%6s %10s %10s %10s %10s %s\n", "p", "lhs", "rhs", "slack", "sigma", "verdict");
  for (double p : {1.0, 2.0, 4.0}) {
    const auto r = check_lp_bm(gauss, ev, pair, lambda, p, s, 3.0);
    std::printf("%6.1f %10.5f %10.5f %10.5f %10.5f %s\n", p, r.lhs.value, r.rhs.value, r.slack, r.sigma, to_string(r.verdict).c_str());
  }

  std::printf("\nPolar quermassintegrals (n = 2, <= form)\n");
  for (int i = 0; i < 2; ++i) {
    for (double p : {1.0, 2.0, 4.0}) {
      const auto r = check_polar_lp_bm(i, pair, p, lambda, s, 11);
      std::printf("  i=%d p=%.1f  W_i(comb*) = %.5f  bound = %.5f  slack = %.2e  %s\n", i, p, r.lhs.value, r.rhs.value, r.slack,
                  to_string(r.verdict).c_str());
    }
  }
  return 0;
}
