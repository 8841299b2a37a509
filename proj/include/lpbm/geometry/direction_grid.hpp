#pragma once

#include <cmath>
#include <cstdint>
#include <memory>
#include <numbers>
#include <vector>

#include <boost/math/special_functions/erf.hpp>

#include "lpbm/core/error.hpp"
#include "lpbm/core/rng.hpp"
#include "lpbm/core/vector.hpp"

namespace lpbm {

// Fixed set of unit directions. Antipodes are produced by exact negation,
// so for every u the grid holds -u bit-for-bit; the coordinate axes are
// always members.
class DirectionGrid {
 public:
  DirectionGrid() = default;

  static int default_size(int dim) { return dim == 1 ? 2 : dim == 2 ? 720 : 2000; }

  explicit DirectionGrid(int dim, int m = 0, std::uint64_t seed = 0) : dim_(dim), seed_(seed) {
    if (dim < 1 || dim > kMaxDim) throw GeometryError("DirectionGrid: unsupported dimension");
    if (m == 0) m = default_size(dim);
    if (m % 2 != 0) throw GeometryError("DirectionGrid: size must be even");
    std::vector<Vector> half;
    switch (dim) {
      case 1:
        half.push_back(Vector{1.0});
        break;
      case 2: half = circle(m); break;
      case 3: half = fibonacci(m); break;
      default: half = halton(m, seed); break;
    }
    auto dirs = std::make_shared<std::vector<Vector>>();
    dirs->reserve(2 * half.size());
    for (const auto& u : half) dirs->push_back(u);
    for (const auto& u : half) dirs->push_back(-u);
    m_ = static_cast<int>(dirs->size());
    dirs_ = std::move(dirs);
  }

  int dim() const { return dim_; }
  int size() const { return m_; }
  int resolution() const { return m_; }
  std::uint64_t seed() const { return seed_; }
  const Vector& operator[](int i) const { return (*dirs_)[static_cast<std::size_t>(i)]; }
  const std::vector<Vector>& directions() const { return *dirs_; }
  int antipode(int i) const { return i < m_ / 2 ? i + m_ / 2 : i - m_ / 2; }

  // Index of u in the grid (tolerance 1e-12 per coordinate), or -1.
  int find(const Vector& u) const {
    if (u.dim() != dim_) return -1;
    for (int i = 0; i < m_; ++i) {
      if (approx_equal((*dirs_)[static_cast<std::size_t>(i)], u, 1e-12)) return i;
    }
    return -1;
  }

  bool same_as(const DirectionGrid& o) const { return dirs_ == o.dirs_ || (dim_ == o.dim_ && m_ == o.m_ && seed_ == o.seed_); }

 private:
  static std::vector<Vector> circle(int m) {
    const int h = m / 2;
    std::vector<Vector> out;
    out.reserve(static_cast<std::size_t>(h));
    for (int k = 0; k < h; ++k) {
      // Exact values at multiples of a quarter turn.
      if (4 * k == m) {
        out.push_back(Vector{0.0, 1.0});
        continue;
      }
      if (k == 0) {
        out.push_back(Vector{1.0, 0.0});
        continue;
      }
      const double th = 2.0 * std::numbers::pi * k / m;
      out.push_back(Vector{std::cos(th), std::sin(th)});
    }
    return out;
  }

  // Golden-angle spiral on the upper hemisphere plus the three axes.
  static std::vector<Vector> fibonacci(int m) {
    const int h = m / 2 - 3;
    if (h < 1) throw GeometryError("DirectionGrid: size too small for n=3");
    std::vector<Vector> out{Vector{1.0, 0.0, 0.0}, Vector{0.0, 1.0, 0.0}, Vector{0.0, 0.0, 1.0}};
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (int k = 0; k < h; ++k) {
      const double z = (k + 0.5) / h;
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double phi = golden * k;
      Vector u{r * std::cos(phi), r * std::sin(phi), z};
      out.push_back(u / norm(u));
    }
    return out;
  }

  static double radical_inverse(int base, std::uint64_t i) {
    double inv = 1.0 / base;
    double f = inv;
    double r = 0.0;
    while (i > 0) {
      r += f * static_cast<double>(i % static_cast<std::uint64_t>(base));
      i /= static_cast<std::uint64_t>(base);
      f *= inv;
    }
    return r;
  }

  // Shifted Halton points pushed through the normal quantile, normalized.
  static std::vector<Vector> halton(int m, std::uint64_t seed) {
    const int h = m / 2 - 4;
    if (h < 1) throw GeometryError("DirectionGrid: size too small for n=4");
    std::vector<Vector> out;
    for (int a = 0; a < 4; ++a) out.push_back(Vector::unit(4, a));
    Stream rng(seed, 0x9d1d);
    double shift[4];
    for (double& s : shift) s = rng.uniform();
    constexpr int bases[4] = {2, 3, 5, 7};
    for (std::uint64_t k = 1; static_cast<int>(out.size()) < h + 4; ++k) {
      Vector g(4);
      for (int a = 0; a < 4; ++a) {
        double x = radical_inverse(bases[a], k) + shift[a];
        x -= std::floor(x);
        x = std::clamp(x, 1e-12, 1.0 - 1e-12);
        g[a] = std::numbers::sqrt2 * boost::math::erf_inv(2.0 * x - 1.0);
      }
      const double r = norm(g);
      if (r < 1e-9) continue;
      Vector u = g / r;
      // Keep one representative per antipodal pair.
      int lead = 0;
      while (lead < 4 && u[lead] == 0.0) ++lead;
      if (u[lead] < 0.0) u = -u;
      out.push_back(u);
    }
    return out;
  }

  int dim_ = 0;
  int m_ = 0;
  std::uint64_t seed_ = 0;
  std::shared_ptr<const std::vector<Vector>> dirs_;
};

}  // namespace lpbm
