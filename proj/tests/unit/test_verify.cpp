#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "lpbm/verify/families.hpp"
#include "lpbm/verify/inequality.hpp"
#include "lpbm/verify/lemmas.hpp"
#include "lpbm/verify/suite.hpp"
#include "oracles.hpp"

using namespace lpbm;

namespace {

InequalitySpec gaussian_spec(double alpha = 0.5) {
  InequalitySpec s;
  s.name = "gauss";
  s.functional = FunctionalSpec::of_measure(MeasureSpec::gaussian(2));
  s.alpha = alpha;
  return s;
}

InequalitySpec volume_spec(int n) {
  InequalitySpec s;
  s.name = "vol";
  s.functional = FunctionalSpec::of_measure(MeasureSpec::lebesgue(n));
  s.alpha = 1.0 / n;
  return s;
}

BodyPair make_pair(Body K, Body L, PairRelation rel = PairRelation::generic) {
  BodyPair bp{0, std::move(K), std::move(L)};
  bp.relation = rel;
  return bp;
}

double power_mean_oracle(double a, double b, double l, double e) {
  return std::pow((1 - l) * std::pow(a, e) + l * std::pow(b, e), 1 / e);
}

}  // namespace

TEST(Rhs, MeanAndGradient) {
  const double fk = 0.7, fl = 1.9, l = 0.3, p = 2.0, a = 0.5, C = 1.0;
  const auto r = rhs_mean(fk, fl, l, p, a, C);
  EXPECT_NEAR(r.value, power_mean_oracle(fk, fl, l, p * a), 1e-14);
  const double h = 1e-6;
  EXPECT_NEAR(r.d_fk, (power_mean_oracle(fk + h, fl, l, p * a) - power_mean_oracle(fk - h, fl, l, p * a)) / (2 * h), 1e-8);
  EXPECT_NEAR(r.d_fl, (power_mean_oracle(fk, fl + h, l, p * a) - power_mean_oracle(fk, fl - h, l, p * a)) / (2 * h), 1e-8);
  EXPECT_NEAR(rhs_mean(fk, fl, l, 1.0, -0.5, 2.0).value, 2.0 * power_mean_oracle(fk, fl, l, -0.5), 1e-14);
}

TEST(Decide, Verdicts) {
  EXPECT_EQ(decide(1.0, 0.1, false), Verdict::pass);
  EXPECT_EQ(decide(-1.0, 0.1, false), Verdict::fail);
  EXPECT_EQ(decide(0.05, 0.1, false), Verdict::inconclusive);
  EXPECT_EQ(decide(-0.05, 0.1, true), Verdict::pass);
  EXPECT_EQ(decide(-1.0, 0.1, true), Verdict::fail);
}

TEST(JointSigma, IndependentTermsAddInQuadrature) {
  FValue a{Estimate{1.0, 0.3, 100, Method::mc, 0.0}, nullptr};
  FValue b{Estimate{1.0, 0.4, 100, Method::mc, 0.0}, nullptr};
  EXPECT_NEAR(joint_sigma({{1.0, &a}, {-2.0, &b}}, 1.0), std::sqrt(0.09 + 0.64), 1e-14);
  // Identical shared hits cancel exactly.
  auto h = std::make_shared<std::vector<std::uint8_t>>(std::vector<std::uint8_t>{1, 0, 1, 1, 0, 0, 1, 0});
  FValue c{Estimate{0.5, 0.2, 8, Method::mc, 0.0}, h};
  EXPECT_NEAR(joint_sigma({{1.0, &c}, {-1.0, &c}}, 3.0), 0.0, 1e-15);
}

TEST(Bonferroni, Quantile) {
  EXPECT_EQ(bonferroni_k(3.0, 1), 3.0);
  const double k = bonferroni_k(3.0, 240);
  EXPECT_NEAR(1 - oracle::Phi(k), (1 - oracle::Phi(3.0)) / 240, 1e-12);
  EXPECT_GT(k, 4.0);
}

TEST(Check, GaussianSquareAndDisc) {
  const auto spec = gaussian_spec();
  const BodyPair pr = make_pair(Body::polytope(oracle::square()), Body::ball(Vector(2), 1.0));
  EvalSettings s;
  const PairEvaluator ev(spec.functional, pr.K, pr.L, s, 7);
  const double gk = std::pow(2 * oracle::Phi(1.0) - 1, 2), gl = 1 - std::exp(-0.5);
  EXPECT_LE(std::abs(ev.fk().est.value - gk), 4 * ev.fk().est.std_error);
  EXPECT_LE(std::abs(ev.fl().est.value - gl), 4 * ev.fl().est.std_error);
  for (double p : {1.0, 2.0, 4.0}) {
    const auto r = check_lp_bm(spec, ev, pr, 0.5, p, s, 3.0);
    EXPECT_EQ(r.verdict, Verdict::pass) << "p=" << p << " slack=" << r.slack << " thr=" << r.threshold;
    EXPECT_NEAR(r.rhs.value, power_mean_oracle(r.fk.value, r.fl.value, 0.5, p * 0.5), 1e-12);
    EXPECT_EQ(r.note, "grid-admissible");
    if (p > 1) {
      EXPECT_EQ(r.body_path, "lyz_inner");
      ASSERT_TRUE(r.lhs_outer.has_value());
      // Inner body sits inside the Firey table body.
      EXPECT_LE(r.lhs.value, r.lhs_outer->value + 4 * (r.lhs.std_error + r.lhs_outer->std_error));
    } else {
      EXPECT_EQ(r.body_path, "minkowski_inner");
    }
  }
}

TEST(Check, IdenticalPairsSitInTheBand) {
  const PairFamily f{"id", Generator::identical_pair, 2, 3, 4, 1.0, {}};
  const auto spec = gaussian_spec();
  EvalSettings s;
  for (const auto& pr : generate_pairs(f)) {
    const auto rep = equality_probe(spec, pr, {0.25, 0.5, 0.75}, {1.0, 1.5, 2.0, 4.0}, s, 11);
    EXPECT_TRUE(rep.all_within_band);
    for (const auto& r : rep.records) EXPECT_EQ(r.verdict, Verdict::pass);
  }
}

TEST(Check, VolumeOfBoxesMatchesProductOracle) {
  // (1-l)[-a,a] x [-b,b] + l[-c,c] x [-d,d] is again a box.
  const Body K = Body::polytope(oracle::box_vertices({-1.0, -0.5}, {1.0, 0.5}));
  const Body L = Body::polytope(oracle::box_vertices({-0.3, -2.0}, {0.3, 2.0}));
  const auto pr = make_pair(K, L);
  const auto spec = volume_spec(2);
  EvalSettings s;
  const PairEvaluator ev(spec.functional, K, L, s, 3);
  EXPECT_EQ(ev.fk().est.value, 2.0 * 1.0);
  const auto r = check_lp_bm(spec, ev, pr, 0.25, 1.0, s, 3.0);
  const double want = 2 * (0.75 * 1.0 + 0.25 * 0.3) * 2 * (0.75 * 0.5 + 0.25 * 2.0);
  EXPECT_NEAR(r.lhs.value, want, 1e-10);
  EXPECT_NEAR(r.rhs.value, std::pow(0.75 * std::sqrt(2.0) + 0.25 * std::sqrt(2.4), 2), 1e-12);
  EXPECT_EQ(r.verdict, Verdict::pass);
  EXPECT_EQ(r.sigma, 0.0);
  for (double p : {1.5, 2.0, 4.0}) {
    const auto q = check_lp_bm(spec, ev, pr, 0.25, p, s, 3.0);
    EXPECT_EQ(q.verdict, Verdict::pass);
    // The outer table body has no exact volume: compare within its error.
    EXPECT_EQ(q.lhs.method, Method::exact);
    EXPECT_LE(q.lhs.value, q.lhs_outer->value + 4 * q.lhs_outer->std_error);
  }
}

TEST(Check, VolumeOnGenericPairs) {
  const PairFamily f{"g", Generator::generic_origin_interior, 2, 5, 5, 1.0, {}};
  SuiteOptions opt;
  const auto recs = run_inequality(volume_spec(2), f, generate_pairs(f), opt);
  EXPECT_EQ(recs.size(), 5u * 12u);
  for (const auto& r : recs) EXPECT_NE(r.verdict, Verdict::fail);
  const auto sum = summarize("vol", recs);
  EXPECT_EQ(sum.fail, 0u);
  EXPECT_EQ(sum.errors, 0u);
  EXPECT_GE(*sum.min_relative_slack, -1e-9);
}

TEST(Check, DilatatesGiveEqualityForVolume) {
  const PairFamily f{"d", Generator::dilatate_pair, 2, 9, 4, 1.0, {}};
  const auto spec = volume_spec(2);
  EvalSettings s;
  for (const auto& pr : generate_pairs(f)) {
    const PairEvaluator ev(spec.functional, pr.K, pr.L, s, 5);
    // vol(L) = r^2 vol(K).
    EXPECT_NEAR(ev.fl().est.value, pr.ratio * pr.ratio * ev.fk().est.value, 1e-10);
    const auto r = check_lp_bm(spec, ev, pr, 0.5, 1.0, s, 3.0);
    EXPECT_TRUE(r.equality_expected);
    EXPECT_EQ(r.verdict, Verdict::pass);
    EXPECT_LE(std::abs(r.slack), 1e-9 * r.rhs.value);
  }
}

TEST(Check, WillsWithHalfConstant) {
  InequalitySpec spec;
  spec.name = "wills";
  spec.functional = FunctionalSpec::wills();
  spec.alpha = 0.5;
  spec.C = 0.5;
  const Body K = Body::polytope({{-1, -0.5}, {2, -1}, {1, 1.5}, {-0.5, 1}});
  const auto pr = make_pair(K, K, PairRelation::identical);
  EvalSettings s;
  const PairEvaluator ev(spec.functional, K, K, s, 1);
  for (double p : {1.0, 2.0}) {
    const auto r = check_lp_bm(spec, ev, pr, 0.5, p, s, 3.0);
    EXPECT_FALSE(r.equality_expected);
    EXPECT_GT(r.slack, 0.0);
    EXPECT_NEAR(r.slack, 0.5 * r.lhs.value, 1e-8 * r.lhs.value);
    EXPECT_EQ(r.verdict, Verdict::pass);
  }
}

TEST(Check, PolarQuermassSquareAndDisc) {
  const auto pr = make_pair(Body::polytope(oracle::square()), Body::ball(Vector(2), 1.0));
  EvalSettings s;
  // Polar of the square is the diamond of area 2; the disc is self-polar.
  const auto r0 = check_polar_lp_bm(0, pr, 2.0, 0.5, s, 1);
  EXPECT_NEAR(r0.fk.value, 2.0, 1e-6);
  EXPECT_NEAR(r0.fl.value, std::numbers::pi, 1e-6);
  EXPECT_EQ(r0.verdict, Verdict::pass);
  // W_1 in the plane is half the perimeter: diamond 2 sqrt2, disc pi.
  const auto r1 = check_polar_lp_bm(1, pr, 2.0, 0.5, s, 1);
  EXPECT_NEAR(r1.fk.value, 2.0 * std::numbers::sqrt2, 1e-6);
  EXPECT_EQ(r1.verdict, Verdict::pass);
  EXPECT_THROW(check_polar_lp_bm(0, make_pair(translate(pr.K, Vector{3.0, 0.0}), pr.L), 2.0, 0.5, s, 1), VerifyError);
}

TEST(Check, PolarDilatatesAtEveryP) {
  const PairFamily f{"d", Generator::dilatate_pair, 2, 12, 3, 1.0, {}};
  EvalSettings s;
  for (const auto& pr : generate_pairs(f)) {
    for (double p : {1.0, 2.0, 4.0}) {
      const auto r = check_polar_lp_bm(0, pr, p, 0.25, s, 2);
      EXPECT_TRUE(r.equality_expected);
      EXPECT_EQ(r.verdict, Verdict::pass) << "slack " << r.slack << " threshold " << r.threshold;
    }
  }
}

TEST(Check, NonOriginPairsUseSlices) {
  const auto spec = gaussian_spec();
  const Body K = translate(Body::polytope(oracle::square(0.5)), Vector{1.0, 1.0});
  const Body L = translate(Body::polytope(oracle::square(0.5)), Vector{-1.0, 1.0});
  const auto pr = make_pair(K, L);
  EvalSettings s;
  const PairEvaluator ev(spec.functional, K, L, s, 4);
  const auto r = check_lp_bm(spec, ev, pr, 0.5, 2.0, s, 3.0);
  EXPECT_EQ(r.body_path, "slice_union");
  EXPECT_NE(r.verdict, Verdict::fail);
}

TEST(Check, ErrorsBecomeRecords) {
  InequalitySpec spec;
  spec.name = "wills";
  spec.functional = FunctionalSpec::wills();
  spec.C = 0.5;
  const Body K = translate(Body::polytope(oracle::square()), Vector{3.0, 0.0});
  const std::vector<BodyPair> pairs{make_pair(K, K)};
  const PairFamily f{"x", Generator::symmetric_polytope, 2, 1, 1, 1.0, {}};
  const auto recs = run_inequality(spec, f, pairs, SuiteOptions{});
  ASSERT_EQ(recs.size(), 12u);
  // p = 1 records would succeed, but the whole pair is reported as failed evaluation.
  for (const auto& r : recs) {
    EXPECT_EQ(r.verdict, Verdict::error);
    EXPECT_FALSE(r.note.empty());
  }
  EXPECT_EQ(summarize("wills", recs).errors, 12u);
}

TEST(Families, PredicatesAndDeterminism) {
  for (auto g : {Generator::symmetric_polytope, Generator::unconditional_box, Generator::weakly_unconditional,
                 Generator::reflection_invariant, Generator::dilatate_pair, Generator::identical_pair,
                 Generator::generic_origin_interior}) {
    const PairFamily f{"f", g, 2, 77, 4, 1.0, {}};
    const auto a = generate_pairs(f), b = generate_pairs(f);
    ASSERT_EQ(a.size(), 4u);
    for (std::size_t i = 0; i < a.size(); ++i) {
      EXPECT_TRUE(oracle::same_points(a[i].K.vertices(), b[i].K.vertices(), 0.0));
      const auto& V = a[i].K.vertices();
      if (g == Generator::symmetric_polytope || g == Generator::identical_pair || g == Generator::dilatate_pair) {
        std::vector<Vector> neg;
        for (const auto& v : V) neg.push_back(-1.0 * v);
        EXPECT_TRUE(oracle::same_points(V, neg, 1e-12));
      }
      if (g == Generator::unconditional_box) EXPECT_EQ(V.size(), 4u);
      if (g == Generator::weakly_unconditional) {
        // Coordinate projections of vertices stay inside.
        for (const auto& v : V) {
          EXPECT_TRUE(oracle::in_ccw_polygon(V, Vector{v[0], 0.0}));
          EXPECT_TRUE(oracle::in_ccw_polygon(V, Vector{0.0, v[1]}));
        }
      }
      if (g == Generator::identical_pair) EXPECT_EQ(a[i].relation, PairRelation::identical);
      if (g == Generator::dilatate_pair) {
        std::vector<Vector> sc;
        for (const auto& v : V) sc.push_back(a[i].ratio * v);
        EXPECT_TRUE(oracle::same_points(a[i].L.vertices(), sc, 1e-12));
        EXPECT_GE(a[i].ratio, 1.2);
      }
      if (g == Generator::generic_origin_interior) EXPECT_TRUE(oracle::in_ccw_polygon(V, Vector(2)));
    }
  }
  const PairFamily other{"f", Generator::symmetric_polytope, 2, 78, 1, 1.0, {}};
  const PairFamily base{"f", Generator::symmetric_polytope, 2, 77, 1, 1.0, {}};
  EXPECT_FALSE(oracle::same_points(generate_pairs(other)[0].K.vertices(), generate_pairs(base)[0].K.vertices(), 1e-9));
}

TEST(Suite, DeterministicAcrossThreadCounts) {
  const PairFamily f{"s", Generator::symmetric_polytope, 2, 21, 4, 1.0, {}};
  const auto pairs = generate_pairs(f);
  SuiteOptions one, three;
  one.seed = three.seed = 99;
  one.eval.n_samples = three.eval.n_samples = 4000;
  three.threads = 3;
  const auto a = run_inequality(gaussian_spec(), f, pairs, one);
  const auto b = run_inequality(gaussian_spec(), f, pairs, three);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].pair, b[i].pair);
    EXPECT_EQ(a[i].slack, b[i].slack);
    EXPECT_EQ(a[i].sigma, b[i].sigma);
  }
  SuiteOptions other = one;
  other.seed = 100;
  const auto c = run_inequality(gaussian_spec(), f, pairs, other);
  EXPECT_NE(a[0].lhs.value, c[0].lhs.value);
}

TEST(Spec, Validation) {
  auto s = gaussian_spec();
  s.direction = Direction::leq;
  EXPECT_THROW(s.validate(2), VerifyError);
  s = gaussian_spec();
  s.p_values = {0.5};
  EXPECT_THROW(s.validate(2), VerifyError);
  s = gaussian_spec();
  s.lambdas = {1.0};
  EXPECT_THROW(s.validate(2), VerifyError);
  s = gaussian_spec();
  EXPECT_THROW(s.validate(3), FunctionalError);
  const auto pq = polar_quermass_spec(3, 1);
  EXPECT_DOUBLE_EQ(pq.alpha, -0.5);
  EXPECT_EQ(pq.direction, Direction::leq);
}
