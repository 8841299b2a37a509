#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lpbm/core/error.hpp"
#include "lpbm/core/estimate.hpp"
#include "lpbm/core/rng.hpp"
#include "lpbm/functionals/functional_spec.hpp"
#include "lpbm/functionals/steiner.hpp"
#include "lpbm/functionals/wills.hpp"
#include "lpbm/geometry/body.hpp"
#include "lpbm/geometry/direction_grid.hpp"
#include "lpbm/measures/measure.hpp"
#include "lpbm/psum/psum.hpp"
#include "lpbm/verify/families.hpp"

namespace lpbm {

enum class Direction { geq, leq };
enum class Verdict { pass, fail, inconclusive, error };

inline std::string to_string(Direction d) { return d == Direction::geq ? ">=" : "<="; }

inline std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::inconclusive: return "inconclusive";
    case Verdict::error: return "error";
  }
  return "?";
}

// F(comb) >= C ((1-l) F(K)^{p a} + l F(L)^{p a})^{1/(p a)}   (a > 0), or
// the same with <= for a < 0.
struct InequalitySpec {
  std::string name;
  FunctionalSpec functional;
  double alpha = 0.5;
  double C = 1.0;
  std::vector<double> p_values{1.0, 1.5, 2.0, 4.0};
  std::vector<double> lambdas{0.25, 0.5, 0.75};
  Direction direction = Direction::geq;
  std::vector<std::string> families;

  void validate(int n) const {
    if (alpha == 0.0 || !std::isfinite(alpha)) throw VerifyError("inequality " + name + ": alpha must be finite and nonzero");
    if ((alpha > 0.0) != (direction == Direction::geq)) {
      throw VerifyError("inequality " + name + ": direction must be >= for alpha > 0 and <= for alpha < 0");
    }
    if (!(C > 0.0) || !std::isfinite(C)) throw VerifyError("inequality " + name + ": C must be positive");
    for (double p : p_values) {
      if (!(p >= 1.0) || !std::isfinite(p)) throw VerifyError("inequality " + name + ": p must be >= 1");
    }
    for (double l : lambdas) {
      if (!(l > 0.0 && l < 1.0)) throw VerifyError("inequality " + name + ": lambda must lie in (0,1)");
    }
    functional.validate(n);
  }
};

struct EvalSettings {
  std::int64_t n_samples = 20000;
  int grid_m = 0;  // 0: DirectionGrid default
  int mu_grid = 256;
  double sigma_k = 3.0;
  double dedup_eps = 1e-9;
  bool outer = true;  // also evaluate the support-table outer body
};

struct VerificationRecord {
  std::string suite;
  std::string family;
  int pair = 0;
  PairRelation relation = PairRelation::generic;
  double lambda = 0.0;
  double p = 1.0;
  Estimate fk, fl;
  Estimate lhs, rhs;
  std::optional<Estimate> lhs_outer;
  double slack = 0.0;
  double sigma = 0.0;
  double threshold = 0.0;
  bool equality_expected = false;
  Verdict verdict = Verdict::error;
  std::string body_path;
  std::string note;

  // slack / sigma; NaN when the record is deterministic.
  double slack_in_sigma() const { return sigma > 0.0 ? slack / sigma : std::numeric_limits<double>::quiet_NaN(); }
  double relative_slack() const {
    const double s = std::max({std::abs(lhs.value), std::abs(rhs.value), 1e-300});
    return slack / s;
  }
};

// A functional value; Monte Carlo values keep their per-sample hits so
// that quantities on the same pair can be combined with common samples.
struct FValue {
  Estimate est;
  std::shared_ptr<const std::vector<std::uint8_t>> hits;
};

// Evaluates one functional on K, L and on derived bodies. All Monte Carlo
// evaluations of a pair share one sample set.
class PairEvaluator {
 public:
  PairEvaluator(const FunctionalSpec& F, const Body& K, const Body& L, const EvalSettings& s, std::uint64_t seed)
      : F_(F), settings_(s), seed_(seed), grid_(K.dim(), s.grid_m) {
    if (K.dim() != L.dim()) throw VerifyError("pair: dimension mismatch");
    F_.validate(K.dim());
    if (F_.kind == FunctionalSpec::Kind::measure) build_samples(K, L);
    fk_ = evaluate(K);
    fl_ = evaluate(L);
  }

  const FValue& fk() const { return fk_; }
  const FValue& fl() const { return fl_; }
  const DirectionGrid& grid() const { return grid_; }
  const FunctionalSpec& functional() const { return F_; }
  bool sampled() const { return !samples_.empty(); }

  FValue evaluate(const Body& A) const {
    switch (F_.kind) {
      case FunctionalSpec::Kind::measure: {
        if (F_.measure.kind == MeasureSpec::Kind::lebesgue && has_exact_volume(A)) return {volume_exact(A), nullptr};
        return evaluate_region(BodyIndicator(A));
      }
      case FunctionalSpec::Kind::wills: {
        if (A.dim() <= 3 && !A.is_table()) return {wills_steiner(A), nullptr};
        return {wills_hadwiger(A, seed_ ^ 0x3111, settings_.n_samples), nullptr};
      }
      case FunctionalSpec::Kind::generalized_wills: {
        if (A.dim() <= 3 && !A.is_table()) return {generalized_wills_identity(A, *F_.gauge, F_.u), nullptr};
        return {generalized_wills(A, *F_.gauge, F_.u, seed_ ^ 0x3112, settings_.n_samples), nullptr};
      }
      case FunctionalSpec::Kind::polar_quermass: {
        const Body P = polar(A, grid_);
        const int n = A.dim();
        const SteinerFit fit = quermassintegrals_fit(P, Body::ball(Vector(n), 1.0));
        return {Estimate::exact(fit.W[static_cast<std::size_t>(F_.index)]), nullptr};
      }
    }
    throw VerifyError("evaluate: unknown functional");
  }

  // nu(region) on the shared samples (measure functionals only).
  template <class Region>
  FValue evaluate_region(const Region& in) const {
    if (samples_.empty()) throw VerifyError("evaluate_region: functional has no sample set");
    auto hits = std::make_shared<std::vector<std::uint8_t>>(samples_.size());
    double h = 0.0;
    for (std::size_t i = 0; i < samples_.size(); ++i) {
      (*hits)[i] = in(samples_[i]) ? 1 : 0;
      h += (*hits)[i];
    }
    return {Estimate::from_sums(h, h, static_cast<std::int64_t>(samples_.size())).scaled(Z_), hits};
  }

  double sample_scale() const { return Z_; }

 private:
  void build_samples(const Body& K, const Body& L) {
    const auto N = settings_.n_samples;
    if (N < 2) throw VerifyError("sampling: n_samples must be at least 2");
    Stream rng(seed_, 0x5a3, 1);
    samples_.reserve(static_cast<std::size_t>(N));
    if (F_.measure.kind == MeasureSpec::Kind::lebesgue) {
      // Uniform on a box holding conv(K ∪ L ∪ {0}), which contains every
      // combination body built from the pair.
      const Box bk = bounding_box(K), bl = bounding_box(L);
      Box b{Vector(K.dim()), Vector(K.dim())};
      for (int a = 0; a < K.dim(); ++a) {
        b.lo[a] = std::min({0.0, bk.lo[a], bl.lo[a]});
        b.hi[a] = std::max({0.0, bk.hi[a], bl.hi[a]});
      }
      Z_ = b.volume();
      for (std::int64_t i = 0; i < N; ++i) samples_.push_back(rng.uniform_in_box(b));
    } else {
      Z_ = F_.measure.mass();
      for (std::int64_t i = 0; i < N; ++i) samples_.push_back(F_.measure.sample(rng));
    }
  }

  FunctionalSpec F_;
  EvalSettings settings_;
  std::uint64_t seed_;
  DirectionGrid grid_;
  std::vector<Vector> samples_;
  double Z_ = 1.0;
  FValue fk_, fl_;
};

// C ((1-l) a^{pa} + l b^{pa})^{1/(pa)} and its partial derivatives.
struct RhsValue {
  double value = 0.0;
  double d_fk = 0.0;
  double d_fl = 0.0;
};

inline RhsValue rhs_mean(double fk, double fl, double lambda, double p, double alpha, double C) {
  const double e = p * alpha;
  const double a = (1.0 - lambda) * std::pow(fk, e);
  const double b = lambda * std::pow(fl, e);
  const double M = std::pow(a + b, 1.0 / e);
  RhsValue r;
  r.value = C * M;
  // dM/dfk = (1-l) fk^{e-1} M^{1-e}
  r.d_fk = C * (1.0 - lambda) * std::pow(fk, e - 1.0) * std::pow(M, 1.0 - e);
  r.d_fl = C * lambda * std::pow(fl, e - 1.0) * std::pow(M, 1.0 - e);
  return r;
}

// Delta-method sigma of  g_c F_c + g_k F_k + g_l F_l  with Monte Carlo
// terms correlated through their shared samples.
inline double joint_sigma(const std::vector<std::pair<double, const FValue*>>& terms, double Z) {
  std::vector<std::pair<double, const std::vector<std::uint8_t>*>> mc;
  double indep = 0.0;
  for (const auto& [g, v] : terms) {
    if (v->hits) {
      mc.emplace_back(g, v->hits.get());
    } else {
      indep += g * g * v->est.std_error * v->est.std_error;
    }
  }
  double var = indep;
  if (!mc.empty()) {
    const std::size_t N = mc.front().second->size();
    double s = 0.0, ss = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      double y = 0.0;
      for (const auto& [g, h] : mc) y += g * Z * (*h)[i];
      s += y;
      ss += y * y;
    }
    const double dn = static_cast<double>(N);
    const double mean = s / dn;
    const double v = std::max(0.0, (ss - dn * mean * mean) / (dn - 1.0));
    var += v / dn;
  }
  return std::sqrt(var);
}

inline bool origin_in_body(const Body& K, const DirectionGrid& grid) {
  if (K.is_ball()) return norm(K.as_ball().center) <= K.as_ball().radius;
  if (K.is_polytope() && K.hull().full_dimensional() && !K.hull().facets.empty()) {
    for (const auto& f : K.hull().facets) {
      if (f.offset < -1e-12) return false;
    }
    return true;
  }
  for (double h : support_on(K, grid)) {
    if (h < -1e-12) return false;
  }
  return true;
}

// Dilatates give equality for volume (alpha = 1/n) and the polar
// quermassintegrals (alpha = -1/(n-i)) at every p: the p-combination of K
// and rK is cK with c^p = (1-l) + l r^p, and both functionals are
// homogeneous of the matching degree.
inline bool equality_expected(const FunctionalSpec& F, const InequalitySpec& spec, PairRelation rel, int n) {
  if (rel == PairRelation::identical) return spec.C == 1.0;
  if (rel != PairRelation::dilatate || spec.C != 1.0) return false;
  auto near = [](double a, double b) { return std::abs(a - b) <= 1e-12; };
  if (F.kind == FunctionalSpec::Kind::polar_quermass) return F.index < n && near(spec.alpha, -1.0 / (n - F.index));
  return F.kind == FunctionalSpec::Kind::measure && F.measure.kind == MeasureSpec::Kind::lebesgue && near(spec.alpha, 1.0 / n);
}

inline Verdict decide(double slack, double threshold, bool equality) {
  if (slack < -threshold) return Verdict::fail;
  if (std::abs(slack) <= threshold) return equality ? Verdict::pass : Verdict::inconclusive;
  return Verdict::pass;
}

// One (lambda, p) instance on a pair. For >= inequalities with a measure,
// the left side is the inner LYZ body (the outer support table is logged
// too); F decreasing under inclusion (polar quermassintegrals) makes the
// inner body conservative for <= as well.
inline VerificationRecord check_lp_bm(const InequalitySpec& spec, const PairEvaluator& ev, const BodyPair& pair,
                                      double lambda, double p, const EvalSettings& s, double sigma_k) {
  const auto& F = ev.functional();
  const PCombination c = PCombination::make(p, lambda);
  VerificationRecord r;
  r.suite = spec.name;
  r.pair = pair.id;
  r.relation = pair.relation;
  r.lambda = lambda;
  r.p = p;
  r.fk = ev.fk().est;
  r.fl = ev.fl().est;
  if (!(r.fk.value > 0.0) || !(r.fl.value > 0.0)) throw VerifyError("pair not admissible: zero functional value");

  const auto& grid = ev.grid();
  const bool origin = origin_in_body(pair.K, grid) && origin_in_body(pair.L, grid);
  FValue lhs;
  if (c.q_infinite()) {
    const bool same_kind = (pair.K.is_polytope() && pair.L.is_polytope()) || (pair.K.is_ball() && pair.L.is_ball());
    if (same_kind) {
      lhs = ev.evaluate(minkowski_combination(pair.K, pair.L, lambda));
      r.body_path = "minkowski";
    } else {
      // Mixed representations: inscribed polytopes keep the left side conservative.
      lhs = ev.evaluate(minkowski_combination(inner_polytope(pair.K, grid), inner_polytope(pair.L, grid), lambda));
      r.body_path = "minkowski_inner";
    }
  } else {
    const double ms = mu_star(lambda, r.fk.value, r.fl.value, p, spec.alpha);
    const MuGrid mu = MuGrid::uniform(s.mu_grid, {ms, lambda});
    if (origin) {
      const Body Kp = inner_polytope(pair.K, grid), Lp = inner_polytope(pair.L, grid);
      lhs = ev.evaluate(lyz_inner_body(Kp, Lp, c, mu));
      r.body_path = "lyz_inner";
      if (s.outer && F.kind == FunctionalSpec::Kind::measure) {
        r.lhs_outer = ev.evaluate(firey_combination(pair.K, pair.L, c, grid)).est;
      }
    } else if (F.kind == FunctionalSpec::Kind::measure) {
      const SliceUnion U(pair.K, pair.L, c, mu);
      lhs = ev.evaluate_region([&U](const Vector& z) { return U.contains(z); });
      r.body_path = "slice_union";
    } else {
      throw VerifyError("p-combination: origin must lie in both bodies for " + F.describe());
    }
  }
  r.lhs = lhs.est;
  const RhsValue rv = rhs_mean(r.fk.value, r.fl.value, lambda, p, spec.alpha, spec.C);
  r.rhs = Estimate::exact(rv.value);
  r.rhs.method = (r.fk.method == Method::exact && r.fl.method == Method::exact) ? Method::exact : Method::mc;

  const double sign = spec.direction == Direction::geq ? 1.0 : -1.0;
  r.slack = sign * (r.lhs.value - rv.value);
  const double Z = ev.sampled() ? ev.sample_scale() : 1.0;
  const FValue fk = ev.fk(), fl = ev.fl();
  r.sigma = joint_sigma({{sign, &lhs}, {-sign * rv.d_fk, &fk}, {-sign * rv.d_fl, &fl}}, Z);
  r.rhs.std_error = joint_sigma({{rv.d_fk, &fk}, {rv.d_fl, &fl}}, Z);
  const double bias = lhs.est.bias_bound + std::abs(rv.d_fk) * fk.est.bias_bound + std::abs(rv.d_fl) * fl.est.bias_bound;
  const double scale = std::max({std::abs(r.lhs.value), std::abs(rv.value), 1e-300});
  r.threshold = sigma_k * r.sigma + bias + 1e-9 * scale;
  r.equality_expected = equality_expected(F, spec, pair.relation, pair.K.dim());
  r.verdict = decide(r.slack, r.threshold, r.equality_expected);
  if (F.kind == FunctionalSpec::Kind::measure && F.measure.kind != MeasureSpec::Kind::lebesgue) r.note = "grid-admissible";
  return r;
}

// Minkowski (p = 1) instance.
inline VerificationRecord check_minkowski_bm(const InequalitySpec& spec, const PairEvaluator& ev, const BodyPair& pair,
                                             double lambda, const EvalSettings& s, double sigma_k) {
  return check_lp_bm(spec, ev, pair, lambda, 1.0, s, sigma_k);
}

// W_i([(1-l)·K +_p l·L]^*)^{-p/(n-i)} >= (1-l) W_i(K^*)^{-p/(n-i)} + l W_i(L^*)^{-p/(n-i)},
// i.e. the alpha = -1/(n-i), C = 1 form with <=.
inline InequalitySpec polar_quermass_spec(int n, int i) {
  InequalitySpec s;
  s.name = "polar_quermass_n" + std::to_string(n) + "_i" + std::to_string(i);
  s.functional = FunctionalSpec::polar_quermass(i);
  s.alpha = -1.0 / (n - i);
  s.C = 1.0;
  s.direction = Direction::leq;
  return s;
}

inline VerificationRecord check_polar_lp_bm(int i, const BodyPair& pair, double p, double lambda, const EvalSettings& s,
                                            std::uint64_t seed, double sigma_k = 3.0) {
  const int n = pair.K.dim();
  if (n > 3) throw VerifyError("check_polar_lp_bm: needs n <= 3");
  const InequalitySpec spec = polar_quermass_spec(n, i);
  spec.validate(n);
  const DirectionGrid g(n, s.grid_m);
  if (!origin_interior(pair.K, g) || !origin_interior(pair.L, g)) throw VerifyError("check_polar_lp_bm: origin not interior");
  const PairEvaluator ev(spec.functional, pair.K, pair.L, s, seed);
  return check_lp_bm(spec, ev, pair, lambda, p, s, sigma_k);
}

struct EqualityProbeReport {
  std::vector<VerificationRecord> records;
  VerificationRecord min_record;
  bool all_within_band = true;      // every |slack| <= threshold
  bool all_positive_beyond = true;  // every slack > threshold
};

// Scans slack over (lambda, p). Identical pairs should sit inside the
// band, pairs away from the equality case strictly above it.
inline EqualityProbeReport equality_probe(const InequalitySpec& spec, const BodyPair& pair, const std::vector<double>& lambdas,
                                          const std::vector<double>& ps, const EvalSettings& s, std::uint64_t seed) {
  spec.validate(pair.K.dim());
  const PairEvaluator ev(spec.functional, pair.K, pair.L, s, seed);
  EqualityProbeReport rep;
  for (double l : lambdas) {
    for (double p : ps) {
      auto r = check_lp_bm(spec, ev, pair, l, p, s, s.sigma_k);
      if (std::abs(r.slack) > r.threshold) rep.all_within_band = false;
      if (!(r.slack > r.threshold)) rep.all_positive_beyond = false;
      if (rep.records.empty() || r.slack < rep.min_record.slack) rep.min_record = r;
      rep.records.push_back(std::move(r));
    }
  }
  return rep;
}

}  // namespace lpbm
