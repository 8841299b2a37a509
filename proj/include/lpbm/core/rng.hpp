#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "lpbm/core/vector.hpp"

namespace lpbm {

// Random stream keyed by (experiment seed, task index, substream).
//
// The engine is std::mt19937_64 seeded through std::seed_seq; both are
// specified bit-for-bit by the standard, and every transform below is
// written out here rather than delegated to std::*_distribution, so a
// key always yields the same numbers on every platform and under any
// scheduling of tasks.
class Stream {
 public:
  Stream(std::uint64_t seed, std::uint64_t task, std::uint64_t sub = 0) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(task), static_cast<std::uint32_t>(task >> 32),
                      static_cast<std::uint32_t>(sub), static_cast<std::uint32_t>(sub >> 32),
                      0x6c70626du};
    engine_.seed(seq);
  }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform in (0, 1].
  double uniform_pos() { return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  // Uniform integer in [lo, hi].
  int uniform_int(int lo, int hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>(engine_() % span);
  }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform_pos()));
    const double theta = 2.0 * std::numbers::pi * uniform();
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

  double exponential() { return -std::log(uniform_pos()); }

  // Marsaglia-Tsang, shape > 0, unit scale.
  double gamma(double shape) {
    if (shape < 1.0) {
      const double g = gamma(shape + 1.0);
      return g * std::pow(uniform_pos(), 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x = 0.0;
      double v = 0.0;
      do {
        x = normal();
        v = 1.0 + c * x;
      } while (v <= 0.0);
      v = v * v * v;
      const double u = uniform_pos();
      if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
      if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
  }

  double beta(double a, double b) {
    const double x = gamma(a);
    const double y = gamma(b);
    return x / (x + y);
  }

  Vector normal_vector(int dim) {
    Vector v(dim);
    for (int i = 0; i < dim; ++i) v[i] = normal();
    return v;
  }

  Vector unit_vector(int dim) {
    for (;;) {
      Vector v = normal_vector(dim);
      const double r = norm(v);
      if (r > 1e-12) return v / r;
    }
  }

  Vector uniform_in_box(const Box& box) {
    Vector v(box.dim());
    for (int i = 0; i < box.dim(); ++i) v[i] = uniform(box.lo[i], box.hi[i]);
    return v;
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace lpbm
