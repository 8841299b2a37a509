// Acceptance suite: one line per criterion, exit status 0 iff all pass.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "lpbm/cli/runner.hpp"
#include "lpbm/lpbm.hpp"

using namespace lpbm;
namespace fs = std::filesystem;

namespace {

constexpr double pi = std::numbers::pi;

// Collects failed sub-checks of one criterion.
struct Checks {
  std::vector<std::string> failed;
  int total = 0;
  std::string info;

  void expect(bool ok, const std::string& what) {
    ++total;
    if (!ok) failed.push_back(what);
  }
  void near(double got, double want, double tol, const std::string& what) {
    std::ostringstream os;
    os << what << " = " << got << " (want " << want << " +- " << tol << ")";
    expect(std::abs(got - want) <= tol, os.str());
  }
};

struct Criterion {
  int id;
  std::string title;
  double budget_s;
  std::function<void(Checks&)> body;
};

std::vector<Vector> square(double a = 1.0) { return {{-a, -a}, {a, -a}, {a, a}, {-a, a}}; }

bool same_points(const std::vector<Vector>& a, const std::vector<Vector>& b, double tol) {
  if (a.size() != b.size()) return false;
  for (const auto& x : a) {
    bool hit = false;
    for (const auto& y : b) hit = hit || max_abs(x - y) <= tol;
    if (!hit) return false;
  }
  return true;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ---- 1: geometry and solver examples

void geometry_oracles(Checks& c) {
  const Body S = Body::polytope(square());
  const Body B = Body::ball(Vector(2), 1.0);
  c.near(support(S, Vector{1, 0}), 1.0, 1e-9, "h(square, e1)");
  Stream rng(1, 0);
  for (int k = 0; k < 10; ++k) c.near(support(B, rng.unit_vector(2)), 1.0, 1e-9, "h(B2, u)");
  c.near(support(Body::polytope({{2, 0}, {-2, 0}, {0, 2}, {0, -2}}), Vector{1, 1}), 2.0, 1e-9, "h(diamond, (1,1))");
  c.expect(same_points(scale(S, 2).vertices(), square(2), 1e-12), "scale(square, 2)");
  c.near(scale(B, 0.5).as_ball().radius, 0.5, 1e-12, "scale(B2, 0.5)");
  const Body U = Body::polytope({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
  c.expect(same_points(minkowski_sum(U, U).vertices(), {{0, 0}, {2, 0}, {2, 2}, {0, 2}}, 1e-12), "[0,1]^2 + [0,1]^2");
  c.expect(same_points(minkowski_sum(Body::polytope({{-1, 0}, {1, 0}}), Body::polytope({{0, -1}, {0, 1}})).vertices(), square(), 1e-12),
           "segment + segment");
  c.near(minkowski_sum(B, Body::ball(Vector(2), 2.0)).as_ball().radius, 3.0, 1e-12, "B(1) + B(2)");
  c.expect(same_points(Body::polytope({{0, 0}, {1, 0}, {0.5, 0.25}, {0, 1}, {1, 1}}).vertices(), {{0, 0}, {1, 0}, {0, 1}, {1, 1}}, 1e-12),
           "hull drops interior point");
  c.expect(same_points(Body::polytope({{0.3, 0.2}}).vertices(), {{0.3, 0.2}}, 0.0), "hull of a point");
  c.expect(same_points(Body::polytope({{0, 0}, {1, 1}, {2, 2}}).vertices(), {{0, 0}, {2, 2}}, 1e-12), "collinear hull");
  const DirectionGrid g(2);
  c.expect(same_points(polar(S, g).vertices(), {{1, 0}, {-1, 0}, {0, 1}, {0, -1}}, 1e-9), "polar(square)");
  c.near(polar(B, g).as_ball().radius, 1.0, 1e-12, "polar(B2)");
  c.expect(reflect_invariant(S, {Vector{1, 0}, Vector{0, 1}}), "square reflection invariant");
  c.expect(!reflect_invariant(translate(S, Vector{1, 0}), {Vector{1, 0}, Vector{0, 1}}), "shifted square not invariant");
  c.expect(is_weakly_unconditional(U), "[0,1]^2 weakly unconditional");
  c.expect(!is_weakly_unconditional(Body::polytope({{1, 0}, {0, 1}, {1, 1}})), "triangle not weakly unconditional");

  LpProblem P;
  P.objective = {1.0, 1.0};
  P.add({1.0, 0.0}, Relation::less_equal, 1.0);
  P.add({0.0, 1.0}, Relation::less_equal, 1.0);
  const auto s = solve_lp(P);
  c.expect(s.status == LpStatus::optimal, "lp optimal");
  c.near(s.value, 2.0, 1e-9, "lp value");
  LpProblem Q;
  Q.objective = {1.0};
  Q.add({1.0}, Relation::less_equal, -1.0);
  c.expect(solve_lp(Q).status == LpStatus::infeasible, "lp infeasible");

  c.expect(membership(Vector{0, 0}, S), "(0,0) in square");
  c.expect(!membership(Vector{1.000001, 0}, S, 1e-8), "(1.000001,0) not in square");
  c.near(gauge_distance(Vector{2, 0}, S, B), 1.0, 1e-7, "d_B((2,0), square)");
  c.near(gauge_distance(Vector{0.5, -0.2}, S, B), 0.0, 1e-9, "d_B(inside)");
  c.near(gauge_distance(Vector{3, 0}, Body::point(Vector(2)), S), 3.0, 1e-7, "d_square((3,0), {0})");
  c.near(euclidean_distance(Vector{2, 0}, S), 1.0, 1e-9, "d((2,0), square)");
  c.near(euclidean_distance(Vector{2, 2}, S), std::sqrt(2.0), 1e-9, "d((2,2), square)");
  c.near(euclidean_distance(Vector{0.1, 0.9}, S), 0.0, 1e-12, "d(inside)");
}

// ---- 2: measures

void measure_oracles(Checks& c) {
  const auto g = gaussian_measure(Body::polytope(square()), 2024, 1000000, false);
  const double want = std::pow(std::erf(1.0 / std::numbers::sqrt2), 2);
  c.expect(g.std_error <= 0.002, "sigma of gamma_2(square) <= 0.002");
  c.near(g.value, 0.46607, 3 * g.std_error, "gamma_2([-1,1]^2) vs 0.46607");
  c.near(g.value, want, 3 * g.std_error, "gamma_2([-1,1]^2) vs erf(1/sqrt2)^2");
  const auto b = gaussian_measure(Body::ball(Vector(2), 1.0), 2025, 1000000, false);
  c.near(b.value, 1 - std::exp(-0.5), 3 * b.std_error, "gamma_2(B2)");
  int agree = 0;
  for (int i = 0; i < 20; ++i) {
    Stream rng(303, static_cast<std::uint64_t>(i));
    std::vector<Vector> pts;
    const int k = rng.uniform_int(4, 12);
    for (int j = 0; j < k; ++j) pts.push_back(rng.normal_vector(3));
    const Body K = Body::polytope(pts);
    const double ex = volume_exact(K).value;
    const auto mc = volume_mc(K, 500 + static_cast<std::uint64_t>(i), 200000);
    const bool ok = std::abs(mc.value - ex) <= 3 * mc.std_error;
    agree += ok;
    c.expect(ok, "volume_mc vs volume_exact, polytope " + std::to_string(i));
  }
  std::ostringstream os;
  os << "gamma_2(square) " << g.value << " +- " << g.std_error << ", gamma_2(B2) " << b.value << " +- " << b.std_error << ", " << agree
     << "/20 volume agreements";
  c.info = os.str();
}

// ---- 3: Wills

void wills_oracles(Checks& c) {
  struct Case {
    std::string name;
    Body K;
    double want;
  };
  const std::vector<Case> cases{{"W(point)", Body::point(Vector(2)), 1.0},
                                {"W([0,2])", Body::polytope({Vector{0.0}, Vector{2.0}}), 3.0},
                                {"W([0,1]^2)", Body::polytope({{0, 0}, {1, 0}, {1, 1}, {0, 1}}), 4.0}};
  std::uint64_t seed = 77;
  for (const auto& k : cases) {
    const auto h = wills_hadwiger(k.K, seed++, 400000);
    c.expect(h.std_error <= 0.01 * k.want, k.name + " sigma <= 1%");
    c.near(h.value, k.want, 3 * h.std_error + h.bias_bound, k.name + " (Hadwiger)");
    c.near(wills_steiner(k.K).value, k.want, 1e-9, k.name + " (Steiner)");
  }
  int agree = 0, i = 0;
  for (const auto& K : regression_set()) {
    const auto h = wills_hadwiger(K, 900 + static_cast<std::uint64_t>(i), 200000);
    const auto s = wills_steiner(K);
    const bool ok = std::abs(h.value - s.value) <= 3 * std::hypot(h.std_error, s.std_error) + h.bias_bound;
    agree += ok;
    c.expect(ok, "Hadwiger vs Steiner, regression body " + std::to_string(i));
    ++i;
  }
  c.info = std::to_string(agree) + "/20 regression agreements";
}

// ---- 4: Steiner fit

void steiner_fit(Checks& c) {
  const Body S = Body::polytope(square());
  const Body B = Body::ball(Vector(2), 1.0);
  const double want[] = {4.0, 4.0, pi};
  const auto ex = quermassintegrals_fit(S, B);
  for (int i = 0; i < 3; ++i) c.near(ex.W[static_cast<std::size_t>(i)], want[i], 1e-6, "exact W_" + std::to_string(i));
  SteinerOptions opt;
  opt.engine = VolumeEngine::monte_carlo;
  opt.n_samples = 400000;
  opt.seed = 4;
  const auto mc = quermassintegrals_fit(S, B, {}, opt);
  for (int i = 0; i < 3; ++i) {
    c.near(mc.W[static_cast<std::size_t>(i)], want[i], 3 * mc.W_err[static_cast<std::size_t>(i)], "MC W_" + std::to_string(i));
  }
}

// ---- 5, 6, 9: master runs

struct MasterRun {
  cli::ExperimentConfig config;
  cli::ExperimentResult result;
  double seconds = 0.0;
};

MasterRun run_master(const fs::path& out) {
  MasterRun m;
  m.config = cli::load_config(std::string(LPBM_SOURCE_DIR) + "/configs/master.json");
  m.config.output.dir = out.string();
  const auto t0 = std::chrono::steady_clock::now();
  m.result = cli::run_experiment(m.config);
  cli::write_outputs(m.result, m.config);
  m.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return m;
}

const MasterRun& master_a() {
  static const MasterRun m = run_master(fs::temp_directory_path() / "lpbm_acceptance_a");
  return m;
}

void inequality_suites(Checks& c) {
  const auto& m = master_a();
  // Theorem classes and the suites that cover them.
  const std::vector<std::pair<std::string, std::vector<std::string>>> classes{
      {"volume", {"volume_lp_bm", "volume_lp_bm_n3"}},
      {"gaussian symmetric", {"gaussian_symmetric"}},
      {"gaussian weakly unconditional", {"gaussian_weakly_unconditional"}},
      {"gaussian reflection invariant", {"gaussian_reflection_invariant"}},
      {"product radially decreasing", {"product_radial_decreasing"}},
      {"beta-concave density", {"beta_concave_density"}},
      {"even log-concave", {"even_log_concave"}},
      {"polar quermassintegrals",
       {"polar_quermass_n2_i0", "polar_quermass_n2_i1", "polar_quermass_n3_i0", "polar_quermass_n3_i1", "polar_quermass_n3_i2"}},
      {"wills", {"wills"}},
      {"generalized wills", {"generalized_wills"}}};
  std::size_t total = 0, fails = 0, inconclusive = 0;
  for (const auto& [cls, names] : classes) {
    for (const auto& name : names) {
      const cli::SuiteRun* run = nullptr;
      for (const auto& s : m.result.suites) {
        if (s.spec->name == name) run = &s;
      }
      c.expect(run != nullptr, cls + ": suite " + name + " present");
      if (!run) continue;
      const auto& sum = run->summary;
      total += sum.records;
      fails += sum.fail;
      inconclusive += sum.inconclusive;
      c.expect(sum.fail == 0, name + ": " + std::to_string(sum.fail) + " fail verdicts");
      c.expect(sum.errors == 0, name + ": " + std::to_string(sum.errors) + " error verdicts");
      c.expect(sum.records >= 20u * 3u * 4u, name + ": at least 240 records");
      c.expect(sum.median_relative_slack && *sum.median_relative_slack > 0.0, name + ": median slack on non-identical pairs > 0");
      // Every family of the suite contributes the full grid.
      for (const auto& fam : run->spec->families) {
        std::size_t n = 0;
        for (const auto& r : run->records) n += r.family == fam;
        c.expect(n >= 240, name + "/" + fam + ": " + std::to_string(n) + " records");
      }
    }
  }
  c.expect(m.seconds < 1800.0, "master run under 30 min");
  std::ostringstream os;
  os << total << " records, " << fails << " fail, " << inconclusive << " inconclusive, master run " << m.seconds << " s";
  c.info = os.str();
}

void equality_probes(Checks& c) {
  const auto& m = master_a();
  std::size_t id_n = 0, id_ok = 0, dil_n = 0, dil_ok = 0;
  for (const auto& s : m.result.suites) {
    const bool gaussian = s.spec->functional.kind == FunctionalSpec::Kind::measure &&
                          s.spec->functional.measure.kind == MeasureSpec::Kind::gaussian;
    for (const auto& r : s.records) {
      if (r.relation == PairRelation::identical && s.spec->C == 1.0) {
        ++id_n;
        // Deterministic records (sigma = 0) get a round-off floor.
        const double floor = 1e-9 * std::max(std::abs(r.lhs.value), std::abs(r.rhs.value));
        id_ok += std::abs(r.slack) <= 3 * r.sigma + floor;
      }
      if (gaussian && r.relation == PairRelation::dilatate && r.p > 1.0) {
        ++dil_n;
        dil_ok += r.slack > 3 * r.sigma;
      }
    }
  }
  c.expect(id_n > 0, "identical records present");
  c.expect(id_ok == id_n, "identical pairs within 3 sigma: " + std::to_string(id_ok) + "/" + std::to_string(id_n));
  c.expect(dil_n > 0, "dilatate records present");
  c.expect(dil_n > 0 && 100 * dil_ok >= 95 * dil_n, "dilatate slack > 3 sigma: " + std::to_string(dil_ok) + "/" + std::to_string(dil_n));
  std::ostringstream os;
  os << "identical " << id_ok << "/" << id_n << " within 3 sigma; Gaussian dilatates " << dil_ok << "/" << dil_n << " beyond 3 sigma ("
     << (dil_n ? 100.0 * dil_ok / dil_n : 0.0) << "%)";
  c.info = os.str();
}

// ---- 7: structural lemmas

void structural_lemmas(Checks& c) {
  const auto set = regression_set();
  int pairs = 0, violations = 0;
  for (std::size_t i = 0; i + 3 < set.size(); ++i) {
    const Body& K = set[i];
    const Body& L = set[i + 3];  // same dimension
    const DirectionGrid g(K.dim());
    for (double p : {1.5, 2.0, 4.0}) {
      const auto r = inclusion_check(K, L, PCombination::make(p, 0.5), g, MuGrid::uniform(64), 10000, 31 + i);
      violations += r.violations;
      c.expect(r.violations == 0, "inclusion, bodies " + std::to_string(i) + "/" + std::to_string(i + 3) + " p=" + std::to_string(p));
      ++pairs;
    }
  }
  const auto h = holder_step_check(10, 1e-12);
  c.expect(h.points == 1000, "Hoelder grid has 1000 points");
  c.expect(h.violations == 0, "Hoelder step t + s <= 1");
  c.expect(h.max_diagonal_gap <= 1e-12, "equality at mu = lambda");
  c.expect(h.min_offdiagonal_gap > 1e-12, "strict off the diagonal");
  std::ostringstream os;
  os << pairs << " pair/p checks x 1e4 samples, " << violations << " violations; Hoelder max sum " << h.max_sum;
  c.info = os.str();
}

// ---- 8: homogeneity

void homogeneity(Checks& c) {
  int i = 0;
  double worst_polar = 0.0;
  for (const auto& K : regression_set()) {
    const int n = K.dim();
    const std::string tag = " (body " + std::to_string(i) + ")";
    // Gaussian: nu(2A) <= 2^n nu(A), strict beyond 3 sigma.
    const auto a = gaussian_measure(K, 1000 + static_cast<std::uint64_t>(i), 200000, false);
    const auto b = gaussian_measure(scale(K, 2.0), 2000 + static_cast<std::uint64_t>(i), 200000, false);
    const double gap = std::pow(2.0, n) * a.value - b.value;
    c.expect(gap > 3 * std::hypot(std::pow(2.0, n) * a.std_error, b.std_error), "gaussian sub-homogeneity" + tag);
    // Generalized Wills with a cube gauge, affine u; exact for n <= 3.
    std::vector<double> lo(static_cast<std::size_t>(n), -1.0), hi(static_cast<std::size_t>(n), 1.0);
    std::vector<Vector> cube;
    for (unsigned m = 0; m < (1u << n); ++m) {
      Vector v(n);
      for (int d = 0; d < n; ++d) v[d] = (m >> d) & 1u ? 1.0 : -1.0;
      cube.push_back(v);
    }
    const Body E = Body::polytope(cube);
    const auto u = UFunction::affine(1.0, 1.0);
    const auto w1 = generalized_wills_identity(K, E, u), w2 = generalized_wills_identity(scale(K, 2.0), E, u);
    const double wgap = std::pow(2.0, n) * w1.value - w2.value;
    c.expect(wgap > 3 * std::hypot(std::pow(2.0, n) * w1.std_error, w2.std_error) + 1e-9 * w2.value, "W_u sub-homogeneity" + tag);
    // Polar homogeneity: W_i((rK)^*) = r^{-(n-i)} W_i(K^*).
    const DirectionGrid g(n);
    const Body Bn = Body::ball(Vector(n), 1.0);
    const double r = 1.7;
    const auto f1 = quermassintegrals_fit(polar(K, g), Bn);
    const auto f2 = quermassintegrals_fit(polar(scale(K, r), g), Bn);
    for (int k = 0; k < n; ++k) {
      const double lhs = f2.W[static_cast<std::size_t>(k)];
      const double rhs = std::pow(r, -(n - k)) * f1.W[static_cast<std::size_t>(k)];
      const double tol = 3 * std::hypot(f2.W_err[static_cast<std::size_t>(k)], std::pow(r, -(n - k)) * f1.W_err[static_cast<std::size_t>(k)]) +
                         1e-8 * std::abs(rhs);
      worst_polar = std::max(worst_polar, std::abs(lhs - rhs) / std::abs(rhs));
      c.expect(std::abs(lhs - rhs) <= tol, "polar homogeneity W_" + std::to_string(k) + tag);
    }
    ++i;
  }
  std::ostringstream os;
  os << "worst relative polar mismatch " << worst_polar;
  c.info = os.str();
}

void determinism(Checks& c) {
  const auto& a = master_a();
  const auto b = run_master(fs::temp_directory_path() / "lpbm_acceptance_b");
  c.expect(a.result.fingerprint == b.result.fingerprint, "fingerprints match");
  const std::string ra = slurp(a.result.report_path), rb = slurp(b.result.report_path);
  c.expect(!ra.empty(), "report not empty");
  c.expect(ra == rb, "reports byte-identical");
  c.expect(slurp(a.result.summary_path) == slurp(b.result.summary_path), "summaries byte-identical");
  c.info = std::to_string(ra.size()) + " report bytes, fingerprint " + a.result.fingerprint;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "geometry/solver oracles", 10, geometry_oracles},
      {2, "measure oracles", 60, measure_oracles},
      {3, "Wills oracles", 300, wills_oracles},
      {4, "Steiner fit", 60, steiner_fit},
      {5, "inequality suites", 1800, inequality_suites},
      {6, "equality probes", 60, equality_probes},
      {7, "structural lemmas", 300, structural_lemmas},
      {8, "homogeneity", 300, homogeneity},
      {9, "determinism", 1800, determinism},
  };
  int failed = 0;
  for (const auto& cr : criteria) {
    Checks c;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      cr.body(c);
    } catch (const std::exception& e) {
      c.failed.push_back(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    // Criterion 5 and 6 share the first master run; its time is charged to 5.
    if (cr.budget_s > 0 && secs > cr.budget_s) c.failed.push_back("runtime " + std::to_string(secs) + " s over budget");
    const bool ok = c.failed.empty();
    failed += !ok;
    std::printf("criterion %d: %s  %s [%d checks, %.1f s]%s%s\n", cr.id, ok ? "PASS" : "FAIL", cr.title.c_str(), c.total, secs,
                c.info.empty() ? "" : " ", c.info.c_str());
    for (std::size_t k = 0; k < c.failed.size() && k < 10; ++k) std::printf("    - %s\n", c.failed[k].c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
