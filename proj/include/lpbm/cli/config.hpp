#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "lpbm/core/error.hpp"
#include "lpbm/functionals/functional_spec.hpp"
#include "lpbm/verify/families.hpp"
#include "lpbm/verify/inequality.hpp"
#include "lpbm/verify/suite.hpp"

namespace lpbm::cli {

using nlohmann::json;

struct OutputConfig {
  std::string dir = "results";
  std::string report = "report.jsonl";
  std::string summary = "summary.csv";
};

struct ExperimentConfig {
  std::string name;
  std::uint64_t seed = 1;
  int dimension = 2;
  std::int64_t n_samples = 20000;
  int shards = 1;  // worker threads; results do not depend on it
  double sigma_k = 3.0;
  int grid_m = 0;
  int mu_grid = 256;
  double dedup_eps = 1e-9;
  bool bonferroni = true;
  bool outer = true;
  std::vector<PairFamily> families;
  std::vector<InequalitySpec> inequalities;
  OutputConfig output;

  const PairFamily& family(const std::string& n) const {
    for (const auto& f : families) {
      if (f.name == n) return f;
    }
    throw ConfigError("families", "no family named '" + n + "'");
  }

  SuiteOptions suite_options() const {
    SuiteOptions o;
    o.eval.n_samples = n_samples;
    o.eval.grid_m = grid_m;
    o.eval.mu_grid = mu_grid;
    o.eval.sigma_k = sigma_k;
    o.eval.dedup_eps = dedup_eps;
    o.eval.outer = outer;
    o.seed = seed;
    o.threads = shards;
    o.bonferroni = bonferroni;
    return o;
  }
};

namespace detail {

// A JSON object together with its dotted path, for error messages.
class Node {
 public:
  Node(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_.empty() ? "<root>" : path_, "expected an object");
  }

  std::string at(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
  bool has(const std::string& key) const { return j_.contains(key); }
  const json& raw(const std::string& key) const {
    if (!j_.contains(key)) throw ConfigError(at(key), "required field is missing");
    return j_.at(key);
  }

  // Rejects keys outside `allowed`, so typos do not pass silently.
  void only(std::initializer_list<const char*> allowed) const {
    std::set<std::string> ok(allowed.begin(), allowed.end());
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!ok.count(it.key())) throw ConfigError(at(it.key()), "unknown field");
    }
  }

  Node child(const std::string& key) const { return Node(raw(key), at(key)); }

  std::string str(const std::string& key) const {
    const json& v = raw(key);
    if (!v.is_string()) throw ConfigError(at(key), "expected a string");
    return v.get<std::string>();
  }
  std::string str(const std::string& key, const std::string& dflt) const { return has(key) ? str(key) : dflt; }

  double num(const std::string& key) const {
    const json& v = raw(key);
    if (!v.is_number()) throw ConfigError(at(key), "expected a number");
    return v.get<double>();
  }
  double num(const std::string& key, double dflt) const { return has(key) ? num(key) : dflt; }

  std::int64_t integer(const std::string& key) const {
    const json& v = raw(key);
    if (!v.is_number_integer()) throw ConfigError(at(key), "expected an integer");
    return v.get<std::int64_t>();
  }
  std::int64_t integer(const std::string& key, std::int64_t dflt) const { return has(key) ? integer(key) : dflt; }

  std::uint64_t uinteger(const std::string& key, std::uint64_t dflt) const {
    if (!has(key)) return dflt;
    const json& v = raw(key);
    const bool ok = v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0);
    if (!ok) throw ConfigError(at(key), "expected a non-negative integer");
    return v.get<std::uint64_t>();
  }

  bool boolean(const std::string& key, bool dflt) const {
    if (!has(key)) return dflt;
    const json& v = raw(key);
    if (!v.is_boolean()) throw ConfigError(at(key), "expected true or false");
    return v.get<bool>();
  }

  std::vector<double> numbers(const std::string& key) const {
    const json& v = raw(key);
    if (!v.is_array()) throw ConfigError(at(key), "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number()) throw ConfigError(at(key) + "[" + std::to_string(i) + "]", "expected a number");
      out.push_back(v[i].get<double>());
    }
    return out;
  }
  std::vector<double> numbers(const std::string& key, std::vector<double> dflt) const {
    return has(key) ? numbers(key) : dflt;
  }

  const std::string& path() const { return path_; }

 private:
  const json& j_;
  std::string path_;
};

inline std::string idx(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

inline Vector to_vector(const json& v, const std::string& path, int n) {
  if (!v.is_array() || static_cast<int>(v.size()) != n) {
    throw ConfigError(path, "expected an array of " + std::to_string(n) + " numbers");
  }
  Vector x(n);
  for (int a = 0; a < n; ++a) {
    if (!v[static_cast<std::size_t>(a)].is_number()) throw ConfigError(idx(path, static_cast<std::size_t>(a)), "expected a number");
    x[a] = v[static_cast<std::size_t>(a)].get<double>();
  }
  return x;
}

inline Density parse_density(const Node& d, int dim) {
  d.only({"family", "params"});
  const std::string fam = d.str("family");
  const auto f = family_from_string(fam);
  if (!f) throw ConfigError(d.at("family"), "unknown density family '" + fam + "'");
  try {
    return Density::make(*f, dim, d.numbers("params", {}));
  } catch (const MeasureError& e) {
    throw ConfigError(d.at("params"), e.what());
  }
}

inline MeasureSpec parse_measure(const Node& m, int n) {
  const std::string kind = m.str("kind");
  if (kind == "lebesgue") {
    m.only({"kind"});
    return MeasureSpec::lebesgue(n);
  }
  if (kind == "gaussian") {
    m.only({"kind"});
    return MeasureSpec::gaussian(n);
  }
  if (kind == "product") {
    m.only({"kind", "axes"});
    const json& axes = m.raw("axes");
    if (!axes.is_array() || static_cast<int>(axes.size()) != n) {
      throw ConfigError(m.at("axes"), "expected " + std::to_string(n) + " axis densities");
    }
    std::vector<Density> ds;
    for (std::size_t i = 0; i < axes.size(); ++i) ds.push_back(parse_density(Node(axes[i], idx(m.at("axes"), i)), 1));
    return MeasureSpec::product(std::move(ds));
  }
  if (kind == "radial") {
    m.only({"kind", "family", "params"});
    const std::string fam = m.str("family");
    const auto f = family_from_string(fam);
    if (!f) throw ConfigError(m.at("family"), "unknown density family '" + fam + "'");
    try {
      return MeasureSpec::with_density(Density::make(*f, n, m.numbers("params", {})));
    } catch (const MeasureError& e) {
      throw ConfigError(m.at("params"), e.what());
    }
  }
  throw ConfigError(m.at("kind"), "unknown measure kind '" + kind + "'");
}

inline Body parse_gauge(const Node& g, int n) {
  g.only({"vertices", "ball"});
  if (g.has("vertices")) {
    const json& v = g.raw("vertices");
    if (!v.is_array() || v.empty()) throw ConfigError(g.at("vertices"), "expected a non-empty array of points");
    std::vector<Vector> pts;
    for (std::size_t i = 0; i < v.size(); ++i) pts.push_back(to_vector(v[i], idx(g.at("vertices"), i), n));
    return Body::polytope(std::move(pts));
  }
  if (g.has("ball")) {
    const Node b = g.child("ball");
    b.only({"center", "radius"});
    const Vector c = b.has("center") ? to_vector(b.raw("center"), b.at("center"), n) : Vector(n);
    const double r = b.num("radius");
    if (!(r > 0.0)) throw ConfigError(b.at("radius"), "radius must be positive");
    return Body::ball(c, r);
  }
  throw ConfigError(g.path(), "expected 'vertices' or 'ball'");
}

inline UFunction parse_u(const Node& u) {
  u.only({"family", "params"});
  const std::string fam = u.str("family");
  const auto k = UFunction::kind_from_string(fam);
  if (!k) throw ConfigError(u.at("family"), "unknown u family '" + fam + "'");
  const auto p = u.numbers("params", {});
  try {
    switch (*k) {
      case UFunction::Kind::affine:
        if (p.size() != 2) throw ConfigError(u.at("params"), "affine u needs [slope, intercept]");
        return UFunction::affine(p[0], p[1]);
      case UFunction::Kind::quadratic:
        if (p.size() > 2) throw ConfigError(u.at("params"), "quadratic u takes [a, c]");
        return UFunction::quadratic(p.size() > 0 ? p[0] : std::numbers::pi, p.size() > 1 ? p[1] : 0.0);
      case UFunction::Kind::power:
        if (p.size() != 1) throw ConfigError(u.at("params"), "power u needs [k]");
        return UFunction::power(p[0]);
    }
  } catch (const FunctionalError& e) {
    throw ConfigError(u.at("params"), e.what());
  }
  throw ConfigError(u.at("family"), "unsupported u family");
}

inline FunctionalSpec parse_functional(const Node& f, int n) {
  const std::string type = f.str("type");
  FunctionalSpec s;
  if (type == "measure") {
    f.only({"type", "measure"});
    s = FunctionalSpec::of_measure(parse_measure(f.child("measure"), n));
  } else if (type == "wills") {
    f.only({"type"});
    s = FunctionalSpec::wills();
  } else if (type == "generalized_wills") {
    f.only({"type", "gauge", "u"});
    s = FunctionalSpec::generalized_wills(parse_gauge(f.child("gauge"), n), parse_u(f.child("u")));
  } else if (type == "polar_quermass") {
    f.only({"type", "index"});
    s = FunctionalSpec::polar_quermass(static_cast<int>(f.integer("index")));
  } else {
    throw ConfigError(f.at("type"), "unknown functional type '" + type + "'");
  }
  try {
    s.validate(n);
  } catch (const Error& e) {
    throw ConfigError(f.path(), e.what());
  }
  return s;
}

inline PairFamily parse_family(const Node& f, int default_dim) {
  f.only({"name", "generator", "count", "seed", "dimension", "scale", "normals"});
  PairFamily p;
  p.name = f.str("name");
  const std::string g = f.str("generator");
  const auto gen = generator_from_string(g);
  if (!gen) throw ConfigError(f.at("generator"), "unknown family generator '" + g + "'");
  p.generator = *gen;
  p.count = static_cast<int>(f.integer("count", 20));
  if (p.count < 1) throw ConfigError(f.at("count"), "count must be positive");
  p.seed = f.uinteger("seed", 1);
  p.dim = static_cast<int>(f.integer("dimension", default_dim));
  if (p.dim < 1 || p.dim > kMaxDim) throw ConfigError(f.at("dimension"), "dimension must lie in [1, 4]");
  p.scale = f.num("scale", 1.0);
  if (!(p.scale > 0.0)) throw ConfigError(f.at("scale"), "scale must be positive");
  if (f.has("normals")) {
    const json& v = f.raw("normals");
    if (!v.is_array() || v.empty()) throw ConfigError(f.at("normals"), "expected a non-empty array of vectors");
    for (std::size_t i = 0; i < v.size(); ++i) {
      Vector e = to_vector(v[i], idx(f.at("normals"), i), p.dim);
      if (norm(e) == 0.0) throw ConfigError(idx(f.at("normals"), i), "normal must be nonzero");
      p.normals.push_back(e);
    }
  }
  return p;
}

inline InequalitySpec parse_inequality(const Node& q, const std::vector<PairFamily>& families) {
  q.only({"name", "functional", "alpha", "C", "p", "lambda", "direction", "families"});
  InequalitySpec s;
  s.name = q.str("name");
  const json& fl = q.raw("families");
  if (!fl.is_array() || fl.empty()) throw ConfigError(q.at("families"), "expected a non-empty array of family names");
  int n = -1;
  for (std::size_t i = 0; i < fl.size(); ++i) {
    const std::string path = idx(q.at("families"), i);
    if (!fl[i].is_string()) throw ConfigError(path, "expected a family name");
    const std::string name = fl[i].get<std::string>();
    auto it = std::find_if(families.begin(), families.end(), [&](const PairFamily& f) { return f.name == name; });
    if (it == families.end()) throw ConfigError(path, "unknown family '" + name + "'");
    if (n >= 0 && it->dim != n) throw ConfigError(path, "families of one inequality must share a dimension");
    n = it->dim;
    s.families.push_back(name);
  }
  s.functional = parse_functional(q.child("functional"), n);
  s.alpha = q.num("alpha");
  s.C = q.num("C", 1.0);
  s.p_values = q.numbers("p", s.p_values);
  s.lambdas = q.numbers("lambda", s.lambdas);
  const std::string dir = q.str("direction", s.alpha < 0.0 ? "<=" : ">=");
  if (dir == ">=") {
    s.direction = Direction::geq;
  } else if (dir == "<=") {
    s.direction = Direction::leq;
  } else {
    throw ConfigError(q.at("direction"), "expected \">=\" or \"<=\"");
  }
  try {
    s.validate(n);
  } catch (const Error& e) {
    throw ConfigError(q.path(), e.what());
  }
  return s;
}

}  // namespace detail

inline ExperimentConfig parse_config(const json& j) {
  const detail::Node root(j, "");
  root.only({"name", "seed", "dimension", "sampling", "tolerances", "families", "inequalities", "output"});
  ExperimentConfig c;
  c.name = root.str("name", "experiment");
  if (!root.has("seed")) throw ConfigError("seed", "required field is missing");
  c.seed = root.uinteger("seed", 1);
  c.dimension = static_cast<int>(root.integer("dimension", 2));
  if (c.dimension < 1 || c.dimension > kMaxDim) throw ConfigError("dimension", "dimension must lie in [1, 4]");
  if (root.has("sampling")) {
    const auto s = root.child("sampling");
    s.only({"n_samples", "shards"});
    c.n_samples = s.integer("n_samples", c.n_samples);
    if (c.n_samples < 2) throw ConfigError(s.at("n_samples"), "need at least 2 samples");
    c.shards = static_cast<int>(s.integer("shards", c.shards));
    if (c.shards < 1) throw ConfigError(s.at("shards"), "shards must be positive");
  }
  if (root.has("tolerances")) {
    const auto t = root.child("tolerances");
    t.only({"sigma_k", "grid_m", "mu_grid", "dedup_eps", "bonferroni", "outer"});
    c.sigma_k = t.num("sigma_k", c.sigma_k);
    if (!(c.sigma_k > 0.0)) throw ConfigError(t.at("sigma_k"), "must be positive");
    c.grid_m = static_cast<int>(t.integer("grid_m", c.grid_m));
    if (c.grid_m < 0 || c.grid_m % 2 != 0) throw ConfigError(t.at("grid_m"), "must be 0 or a positive even number");
    c.mu_grid = static_cast<int>(t.integer("mu_grid", c.mu_grid));
    if (c.mu_grid < 2) throw ConfigError(t.at("mu_grid"), "need at least 2 points");
    c.dedup_eps = t.num("dedup_eps", c.dedup_eps);
    if (!(c.dedup_eps > 0.0)) throw ConfigError(t.at("dedup_eps"), "must be positive");
    c.bonferroni = t.boolean("bonferroni", c.bonferroni);
    c.outer = t.boolean("outer", c.outer);
  }
  const json& fams = root.raw("families");
  if (!fams.is_array()) throw ConfigError("families", "expected an array");
  std::set<std::string> names;
  for (std::size_t i = 0; i < fams.size(); ++i) {
    PairFamily f = detail::parse_family(detail::Node(fams[i], detail::idx("families", i)), c.dimension);
    if (!names.insert(f.name).second) throw ConfigError(detail::idx("families", i) + ".name", "duplicate family name");
    c.families.push_back(std::move(f));
  }
  const json& ineqs = root.raw("inequalities");
  if (!ineqs.is_array()) throw ConfigError("inequalities", "expected an array");
  names.clear();
  for (std::size_t i = 0; i < ineqs.size(); ++i) {
    InequalitySpec s = detail::parse_inequality(detail::Node(ineqs[i], detail::idx("inequalities", i)), c.families);
    if (!names.insert(s.name).second) throw ConfigError(detail::idx("inequalities", i) + ".name", "duplicate inequality name");
    c.inequalities.push_back(std::move(s));
  }
  if (root.has("output")) {
    const auto o = root.child("output");
    o.only({"dir", "report", "summary"});
    c.output.dir = o.str("dir", c.output.dir);
    c.output.report = o.str("report", c.output.report);
    c.output.summary = o.str("summary", c.output.summary);
  }
  // Canonical run order.
  std::sort(c.families.begin(), c.families.end(), [](const auto& a, const auto& b) { return a.name < b.name; });
  std::sort(c.inequalities.begin(), c.inequalities.end(), [](const auto& a, const auto& b) { return a.name < b.name; });
  return c;
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("<file>", "cannot open '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("<file>", std::string("invalid JSON: ") + e.what());
  }
  return parse_config(j);
}

// ---- canonical form ------------------------------------------------------

namespace detail {

inline json density_json(const Density& d) { return {{"family", to_string(d.family)}, {"params", d.params}}; }

inline json vector_json(const Vector& v) {
  json a = json::array();
  for (int i = 0; i < v.dim(); ++i) a.push_back(v[i]);
  return a;
}

inline json functional_json(const FunctionalSpec& f) {
  switch (f.kind) {
    case FunctionalSpec::Kind::measure: {
      json m;
      switch (f.measure.kind) {
        case MeasureSpec::Kind::lebesgue: m = {{"kind", "lebesgue"}}; break;
        case MeasureSpec::Kind::gaussian: m = {{"kind", "gaussian"}}; break;
        case MeasureSpec::Kind::radial:
          m = {{"kind", "radial"}, {"family", to_string(f.measure.radial.family)}, {"params", f.measure.radial.params}};
          break;
        case MeasureSpec::Kind::product: {
          json axes = json::array();
          for (const auto& a : f.measure.axes) axes.push_back(density_json(a));
          m = {{"kind", "product"}, {"axes", axes}};
          break;
        }
      }
      return {{"type", "measure"}, {"measure", m}};
    }
    case FunctionalSpec::Kind::wills: return {{"type", "wills"}};
    case FunctionalSpec::Kind::generalized_wills: {
      json g;
      if (f.gauge->is_ball()) {
        g = {{"ball", {{"center", vector_json(f.gauge->as_ball().center)}, {"radius", f.gauge->as_ball().radius}}}};
      } else {
        json v = json::array();
        for (const auto& x : f.gauge->vertices()) v.push_back(vector_json(x));
        g = {{"vertices", v}};
      }
      const char* fam = f.u.kind == UFunction::Kind::affine ? "affine" : f.u.kind == UFunction::Kind::quadratic ? "quadratic" : "power";
      json params = f.u.kind == UFunction::Kind::power ? json::array({f.u.a}) : json::array({f.u.a, f.u.b});
      return {{"type", "generalized_wills"}, {"gauge", g}, {"u", {{"family", fam}, {"params", params}}}};
    }
    case FunctionalSpec::Kind::polar_quermass: return {{"type", "polar_quermass"}, {"index", f.index}};
  }
  return {};
}

}  // namespace detail

// Everything that determines the results, with defaults filled in and
// lists in run order; output locations and thread count are left out.
inline json canonical_json(const ExperimentConfig& c) {
  json fams = json::array();
  for (const auto& f : c.families) {
    json normals = json::array();
    for (const auto& v : f.normals) normals.push_back(detail::vector_json(v));
    fams.push_back({{"name", f.name},
                    {"generator", to_string(f.generator)},
                    {"count", f.count},
                    {"seed", f.seed},
                    {"dimension", f.dim},
                    {"scale", f.scale},
                    {"normals", normals}});
  }
  json ineqs = json::array();
  for (const auto& q : c.inequalities) {
    ineqs.push_back({{"name", q.name},
                     {"functional", detail::functional_json(q.functional)},
                     {"alpha", q.alpha},
                     {"C", q.C},
                     {"p", q.p_values},
                     {"lambda", q.lambdas},
                     {"direction", to_string(q.direction)},
                     {"families", q.families}});
  }
  return {{"name", c.name},
          {"seed", c.seed},
          {"dimension", c.dimension},
          {"sampling", {{"n_samples", c.n_samples}}},
          {"tolerances",
           {{"sigma_k", c.sigma_k},
            {"grid_m", c.grid_m},
            {"mu_grid", c.mu_grid},
            {"dedup_eps", c.dedup_eps},
            {"bonferroni", c.bonferroni},
            {"outer", c.outer}}},
          {"families", fams},
          {"inequalities", ineqs}};
}

inline std::string fingerprint(const ExperimentConfig& c) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(canonical_json(c).dump())));
  return buf;
}

}  // namespace lpbm::cli
