#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "lpbm/measures/measure.hpp"
#include "oracles.hpp"

using namespace lpbm;

namespace {

// Trapezoid integral of a one-dimensional density on [a, b].
double trapezoid(const Density& f, double a, double b, int m = 200000) {
  const double h = (b - a) / m;
  double s = 0.5 * (f(Vector{a}) + f(Vector{b}));
  for (int i = 1; i < m; ++i) s += f(Vector{a + i * h});
  return s * h;
}

}  // namespace

TEST(Volume, ExactExamples) {
  EXPECT_NEAR(volume_exact(Body::polytope(oracle::square())).value, 4.0, 1e-12);
  EXPECT_NEAR(volume_exact(Body::ball(Vector(2), 1.0)).value, std::numbers::pi, 1e-12);
  EXPECT_NEAR(volume_exact(Body::ball(Vector(3), 2.0)).value, 4.0 / 3.0 * std::numbers::pi * 8.0, 1e-10);
  const std::vector<Vector> poly{{0, 0}, {3, 0}, {4, 2}, {1, 3}, {-1, 1}};
  EXPECT_NEAR(volume_exact(Body::polytope(poly)).value, oracle::shoelace(poly), 1e-12);
  Stream rng(5, 0);
  for (int k = 0; k < 10; ++k) {
    const Vector a = rng.normal_vector(3), b = rng.normal_vector(3), c = rng.normal_vector(3);
    const Body S = Body::polytope({Vector(3), a, b, c});
    EXPECT_NEAR(volume_exact(S).value, std::abs(oracle::det3(a, b, c)) / 6.0, 1e-10);
  }
  EXPECT_NEAR(volume_exact(Body::polytope(oracle::box_vertices({-1, 0, 2}, {1, 3, 2.5}))).value, 3.0, 1e-12);
}

TEST(Volume, MonteCarloAgreesWithExact) {
  // A box fills its bounding box: every sample hits.
  const auto e = volume_mc(Body::polytope(oracle::square()), 3, 1000);
  EXPECT_EQ(e.value, 4.0);
  const std::vector<Vector> tri{{0, 0}, {2, 0}, {0, 1}};
  const auto t = volume_mc(Body::polytope(tri), 3, 200000);
  EXPECT_GT(t.std_error, 0.0);
  EXPECT_LE(std::abs(t.value - 1.0), 4 * t.std_error);
  Stream rng(9, 0);
  for (int k = 0; k < 5; ++k) {
    const Vector a = rng.normal_vector(3), b = rng.normal_vector(3), c = rng.normal_vector(3);
    const Body S = Body::polytope({Vector(3), a, b, c});
    const auto m = volume_mc(S, 10 + static_cast<std::uint64_t>(k), 100000);
    EXPECT_LE(std::abs(m.value - std::abs(oracle::det3(a, b, c)) / 6.0), 4 * m.std_error);
  }
  const auto b3 = volume_mc(Body::ball(Vector(3), 1.0), 4, 200000);
  EXPECT_LE(std::abs(b3.value - 4.0 / 3.0 * std::numbers::pi), 4 * b3.std_error);
}

TEST(Gaussian, ExactPaths) {
  const double q = 2 * oracle::Phi(1.0) - 1;
  EXPECT_NEAR(gaussian_measure(Body::polytope(oracle::square()), 1, 10).value, q * q, 1e-12);
  EXPECT_NEAR(gaussian_measure(Body::ball(Vector(2), 1.0), 1, 10).value, 1 - std::exp(-0.5), 1e-12);
  EXPECT_NEAR(gaussian_measure(Body::polytope(oracle::square(40.0)), 1, 10).value, 1.0, 1e-12);
}

TEST(Gaussian, SamplingAgreesWithExact) {
  const double q = 2 * oracle::Phi(1.0) - 1;
  const auto s = gaussian_measure(Body::polytope(oracle::square()), 7, 400000, false);
  EXPECT_LE(std::abs(s.value - q * q), 4 * s.std_error);
  const auto b = gaussian_measure(Body::ball(Vector(2), 1.0), 8, 400000, false);
  EXPECT_LE(std::abs(b.value - (1 - std::exp(-0.5))), 4 * b.std_error);
  // Huge box: essentially everything.
  const auto h = gaussian_measure(Body::polytope(oracle::square(40.0)), 9, 100000, false);
  EXPECT_NEAR(h.value, 1.0, 1e-4);
}

TEST(Product, Laplace) {
  const Density l = Density::make(Family::laplace, 1, {1.0});
  const auto spec = MeasureSpec::product({l, l});
  const double want = (1 - std::exp(-1.0)) * (1 - std::exp(-1.0));
  EXPECT_NEAR(density_measure(Body::polytope(oracle::square()), spec, 1, 10).value, want, 1e-12);
  const auto s = density_measure(Body::polytope(oracle::square()), spec, 2, 400000, false);
  EXPECT_LE(std::abs(s.value - want), 4 * s.std_error);
}

TEST(Densities, MassesMatchQuadrature) {
  EXPECT_NEAR(Density::make(Family::power_cap, 1, {1.0}).mass(), trapezoid(Density::make(Family::power_cap, 1, {1.0}), -1, 1), 1e-8);
  EXPECT_NEAR(Density::make(Family::power_cap, 1, {0.5}).mass(), 16.0 / 15.0, 1e-12);
  EXPECT_NEAR(Density::make(Family::exp_norm, 1, {2.0}).mass(), trapezoid(Density::make(Family::exp_norm, 1, {2.0}), -80, 80), 1e-6);
  // 2-d: integral of e^{-|x|} is 2 pi.
  EXPECT_NEAR(Density::make(Family::exp_norm, 2, {1.0}).mass(), 2 * std::numbers::pi, 1e-12);
  EXPECT_NEAR(Density::make(Family::norm_on_ball, 2).mass(), 2 * std::numbers::pi / 3, 1e-12);
  EXPECT_NEAR(Density::make(Family::laplace, 1, {0.5}).interval_mass(-1, 2), trapezoid(Density::make(Family::laplace, 1, {0.5}), -1, 2), 1e-8);
}

TEST(Densities, RadialSamplingCoversTheMass) {
  // A radial density integrated over a ball containing its support.
  for (auto d : {Density::make(Family::power_cap, 2, {1.0}), Density::make(Family::norm_on_ball, 2)}) {
    const auto spec = MeasureSpec::with_density(d);
    const auto e = density_measure(Body::ball(Vector(2), 1.5), spec, 3, 1000);
    EXPECT_NEAR(e.value, d.mass(), 1e-12);
  }
  // Half of a symmetric density lies in a half-plane box.
  const auto spec = MeasureSpec::with_density(Density::make(Family::exp_norm, 2, {1.0}));
  const Body half = Body::polytope(oracle::box_vertices({0, -200}, {200, 200}));
  const auto e = density_measure(half, spec, 4, 200000);
  EXPECT_LE(std::abs(e.value - std::numbers::pi), 4 * e.std_error);
}

TEST(Densities, SubHomogeneity) {
  // nu(rA) <= r^n nu(A) for r >= 1 and radially decreasing densities.
  const std::vector<MeasureSpec> specs{MeasureSpec::gaussian(2),
                                       MeasureSpec::product({Density::make(Family::laplace, 1, {1.0}), Density::make(Family::laplace, 1, {0.5})}),
                                       MeasureSpec::with_density(Density::make(Family::exp_norm, 2, {1.0}))};
  const Body A = Body::polytope({{-1, -0.5}, {2, -1}, {1, 1.5}, {-0.5, 1}});
  for (const auto& s : specs) {
    const auto a = density_measure(A, s, 11, 200000);
    for (double r : {1.5, 2.0, 3.0}) {
      const auto b = density_measure(scale(A, r), s, 11, 200000);
      EXPECT_LE(b.value, r * r * a.value + 4 * (b.std_error + r * r * a.std_error));
    }
  }
}

TEST(Probes, RadialMonotonicity) {
  EXPECT_TRUE(is_radially_decreasing(Density::make(Family::gaussian, 2), 2000, 1).holds);
  EXPECT_TRUE(is_radially_decreasing(Density::make(Family::exp_norm, 3, {1.0}), 2000, 1).holds);
  EXPECT_TRUE(is_radially_decreasing(Density::make(Family::power_cap, 2, {0.5}), 2000, 1).holds);
  const auto r = is_radially_decreasing(Density::make(Family::norm_on_ball, 2), 2000, 1);
  EXPECT_FALSE(r.holds);
  EXPECT_FALSE(r.witness.empty());
  EXPECT_FALSE(is_radially_decreasing(Density::make(Family::indicator_interval, 1, {0.5, 2.0}), 2000, 1).holds);
}

TEST(Probes, Concavity) {
  EXPECT_TRUE(is_beta_concave(Density::make(Family::gaussian, 2), 0.0, 2000, 1).holds);
  EXPECT_TRUE(is_beta_concave(Density::make(Family::power_cap, 2, {1.0}), 1.0, 2000, 1).holds);
  EXPECT_TRUE(is_beta_concave(Density::make(Family::power_cap, 2, {0.5}), 0.5, 2000, 1).holds);
  // (1 - |x|^2)^2 is log-concave on the ball but not concave.
  EXPECT_TRUE(is_beta_concave(Density::make(Family::power_cap, 2, {0.5}), 0.0, 2000, 1).holds);
  EXPECT_FALSE(is_beta_concave(Density::make(Family::power_cap, 2, {0.5}), 1.0, 2000, 1).holds);
  EXPECT_FALSE(is_beta_concave(Density::make(Family::indicator_union, 1, {-2, -1, 1, 2}), 0.0, 2000, 1).holds);
}

TEST(Densities, Validation) {
  EXPECT_THROW(Density::make(Family::laplace, 2), MeasureError);
  EXPECT_THROW(Density::make(Family::indicator_interval, 1, {1, 0}), MeasureError);
  EXPECT_THROW(Density::make(Family::gaussian, 2, {-1}), MeasureError);
  Stream rng(1, 0);
  EXPECT_THROW(MeasureSpec::lebesgue(2).sample(rng), MeasureError);
}
