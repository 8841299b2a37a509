#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <string>

#include "lpbm/core/error.hpp"

namespace lpbm {

enum class Method { exact, mc, qmc };

inline std::string to_string(Method m) {
  switch (m) {
    case Method::exact: return "exact";
    case Method::mc: return "mc";
    case Method::qmc: return "qmc";
  }
  return "?";
}

// A numeric value with its standard error. Exact values carry zero error;
// Monte Carlo values carry sample-std / sqrt(n). `bias_bound` holds any
// deterministic truncation bound (e.g. an integration tail) on top of it.
struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
  std::int64_t n_samples = 0;
  Method method = Method::exact;
  double bias_bound = 0.0;

  static Estimate exact(double v) { return Estimate{v, 0.0, 0, Method::exact, 0.0}; }

  // Mean and standard error from running sums of x and x^2.
  static Estimate from_sums(double sum, double sum_sq, std::int64_t n) {
    if (n < 2) throw MeasureError("Estimate: need at least two samples");
    const double dn = static_cast<double>(n);
    const double mean = sum / dn;
    const double var = std::max(0.0, (sum_sq - dn * mean * mean) / (dn - 1.0));
    return Estimate{mean, std::sqrt(var / dn), n, Method::mc, 0.0};
  }

  Estimate scaled(double s) const {
    Estimate e = *this;
    e.value *= s;
    e.std_error *= std::abs(s);
    e.bias_bound *= std::abs(s);
    return e;
  }

  // Width of the k-sigma band including the deterministic bias bound.
  double band(double k) const { return k * std_error + bias_bound; }
};

// Pooled mean/variance of independent shards of the same estimator.
inline Estimate pool(std::span<const Estimate> shards) {
  if (shards.empty()) throw MeasureError("pool: no shards");
  if (shards.size() == 1) return shards.front();
  double n_total = 0.0;
  double weighted = 0.0;
  for (const auto& s : shards) {
    n_total += static_cast<double>(s.n_samples);
    weighted += static_cast<double>(s.n_samples) * s.value;
  }
  const double mean = weighted / n_total;
  double ss = 0.0;
  double bias = 0.0;
  for (const auto& s : shards) {
    const double n = static_cast<double>(s.n_samples);
    const double var = s.std_error * s.std_error * n;
    ss += (n - 1.0) * var + n * (s.value - mean) * (s.value - mean);
    bias += n * s.bias_bound;
  }
  const double var = ss / (n_total - 1.0);
  return Estimate{mean, std::sqrt(var / n_total), static_cast<std::int64_t>(n_total),
                  shards.front().method, bias / n_total};
}

}  // namespace lpbm
