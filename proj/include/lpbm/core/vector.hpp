#pragma once

#include <algorithm>
#include <array>
#include <cassert>
#include <cmath>
#include <initializer_list>
#include <stdexcept>
#include <string>

namespace lpbm {

inline constexpr int kMaxDim = 4;

// Fixed-capacity point of R^n, 1 <= n <= 4.
class Vector {
 public:
  Vector() = default;

  explicit Vector(int dim) : n_(dim) {
    if (dim < 1 || dim > kMaxDim) {
      throw std::invalid_argument("Vector: dimension must be in [1, 4], got " + std::to_string(dim));
    }
  }

  Vector(std::initializer_list<double> xs) : Vector(static_cast<int>(xs.size())) {
    std::copy(xs.begin(), xs.end(), c_.begin());
  }

  static Vector zero(int dim) { return Vector(dim); }

  static Vector unit(int dim, int axis) {
    Vector v(dim);
    v[axis] = 1.0;
    return v;
  }

  int dim() const { return n_; }

  double operator[](int i) const {
    assert(i >= 0 && i < n_);
    return c_[static_cast<std::size_t>(i)];
  }
  double& operator[](int i) {
    assert(i >= 0 && i < n_);
    return c_[static_cast<std::size_t>(i)];
  }

  const double* begin() const { return c_.data(); }
  const double* end() const { return c_.data() + n_; }
  double* begin() { return c_.data(); }
  double* end() { return c_.data() + n_; }

  Vector& operator+=(const Vector& o) {
    assert(o.n_ == n_);
    for (int i = 0; i < n_; ++i) c_[i] += o.c_[i];
    return *this;
  }
  Vector& operator-=(const Vector& o) {
    assert(o.n_ == n_);
    for (int i = 0; i < n_; ++i) c_[i] -= o.c_[i];
    return *this;
  }
  Vector& operator*=(double s) {
    for (int i = 0; i < n_; ++i) c_[i] *= s;
    return *this;
  }
  Vector& operator/=(double s) {
    for (int i = 0; i < n_; ++i) c_[i] /= s;
    return *this;
  }

  friend Vector operator+(Vector a, const Vector& b) { return a += b; }
  friend Vector operator-(Vector a, const Vector& b) { return a -= b; }
  friend Vector operator*(Vector a, double s) { return a *= s; }
  friend Vector operator*(double s, Vector a) { return a *= s; }
  friend Vector operator/(Vector a, double s) { return a /= s; }
  friend Vector operator-(Vector a) { return a *= -1.0; }

  friend bool operator==(const Vector& a, const Vector& b) {
    if (a.n_ != b.n_) return false;
    for (int i = 0; i < a.n_; ++i) {
      if (a.c_[i] != b.c_[i]) return false;
    }
    return true;
  }

  bool finite() const {
    for (int i = 0; i < n_; ++i) {
      if (!std::isfinite(c_[i])) return false;
    }
    return true;
  }

 private:
  std::array<double, kMaxDim> c_{};
  int n_ = 0;
};

inline double dot(const Vector& a, const Vector& b) {
  assert(a.dim() == b.dim());
  double s = 0.0;
  for (int i = 0; i < a.dim(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm2(const Vector& a) { return dot(a, a); }
inline double norm(const Vector& a) { return std::sqrt(norm2(a)); }
inline double distance(const Vector& a, const Vector& b) { return norm(a - b); }
inline double max_abs(const Vector& a) {
  double m = 0.0;
  for (double x : a) m = std::max(m, std::abs(x));
  return m;
}

inline bool approx_equal(const Vector& a, const Vector& b, double tol) {
  if (a.dim() != b.dim()) return false;
  for (int i = 0; i < a.dim(); ++i) {
    if (std::abs(a[i] - b[i]) > tol) return false;
  }
  return true;
}

inline Vector normalized(const Vector& a) {
  const double r = norm(a);
  if (r == 0.0) throw std::invalid_argument("normalized: zero vector");
  return a / r;
}

// Lexicographic order, used for deterministic sorting and dedup.
inline bool lex_less(const Vector& a, const Vector& b) {
  for (int i = 0; i < a.dim(); ++i) {
    if (a[i] < b[i]) return true;
    if (a[i] > b[i]) return false;
  }
  return false;
}

inline std::string to_string(const Vector& v) {
  std::string s = "(";
  for (int i = 0; i < v.dim(); ++i) {
    if (i) s += ", ";
    s += std::to_string(v[i]);
  }
  return s + ")";
}

// Axis-aligned box [lo, hi].
struct Box {
  Vector lo;
  Vector hi;

  int dim() const { return lo.dim(); }

  double volume() const {
    double v = 1.0;
    for (int i = 0; i < lo.dim(); ++i) v *= std::max(0.0, hi[i] - lo[i]);
    return v;
  }

  Box united(const Box& o) const {
    Box b = *this;
    for (int i = 0; i < lo.dim(); ++i) {
      b.lo[i] = std::min(lo[i], o.lo[i]);
      b.hi[i] = std::max(hi[i], o.hi[i]);
    }
    return b;
  }

  Box intersected(const Box& o) const {
    Box b = *this;
    for (int i = 0; i < lo.dim(); ++i) {
      b.lo[i] = std::max(lo[i], o.lo[i]);
      b.hi[i] = std::min(hi[i], o.hi[i]);
    }
    return b;
  }

  Box inflated(double r) const {
    Box b = *this;
    for (int i = 0; i < lo.dim(); ++i) {
      b.lo[i] -= r;
      b.hi[i] += r;
    }
    return b;
  }
};

}  // namespace lpbm
