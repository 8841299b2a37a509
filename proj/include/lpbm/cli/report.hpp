#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "lpbm/core/estimate.hpp"
#include "lpbm/verify/inequality.hpp"
#include "lpbm/verify/suite.hpp"

namespace lpbm::cli {

inline constexpr const char* kVersion = "1.0.0";

inline nlohmann::json finite_or_null(double x) { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr); }

inline nlohmann::json estimate_json(const Estimate& e) {
  return {{"value", finite_or_null(e.value)},
          {"std_error", finite_or_null(e.std_error)},
          {"n_samples", e.n_samples},
          {"method", to_string(e.method)},
          {"bias_bound", finite_or_null(e.bias_bound)}};
}

inline nlohmann::json record_json(const VerificationRecord& r, const InequalitySpec& spec, const std::string& fp) {
  nlohmann::json j;
  j["fingerprint"] = fp;
  j["version"] = kVersion;
  j["suite"] = r.suite;
  j["functional"] = spec.functional.describe();
  j["family"] = r.family;
  j["pair"] = r.pair;
  j["relation"] = to_string(r.relation);
  j["lambda"] = r.lambda;
  j["p"] = r.p;
  j["alpha"] = spec.alpha;
  j["C"] = spec.C;
  j["direction"] = to_string(spec.direction);
  if (r.verdict == Verdict::error) {
    j["lhs"] = nullptr;
    j["lhs_outer"] = nullptr;
    j["rhs"] = nullptr;
    j["slack"] = nullptr;
    j["sigma"] = nullptr;
    j["slack_in_sigma"] = nullptr;
    j["threshold"] = nullptr;
  } else {
    j["lhs"] = estimate_json(r.lhs);
    j["lhs_outer"] = r.lhs_outer ? estimate_json(*r.lhs_outer) : nlohmann::json(nullptr);
    j["rhs"] = estimate_json(r.rhs);
    j["F_K"] = estimate_json(r.fk);
    j["F_L"] = estimate_json(r.fl);
    j["slack"] = finite_or_null(r.slack);
    j["sigma"] = finite_or_null(r.sigma);
    j["slack_in_sigma"] = finite_or_null(r.slack_in_sigma());
    j["threshold"] = finite_or_null(r.threshold);
  }
  j["body"] = r.body_path;
  j["equality_expected"] = r.equality_expected;
  j["verdict"] = to_string(r.verdict);
  j["note"] = r.note;
  return j;
}

inline std::string fmt(std::optional<double> x) {
  if (!x || !std::isfinite(*x)) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", *x);
  return buf;
}

inline void write_summary_csv(std::ostream& os, const std::vector<SuiteSummary>& rows) {
  os << "suite,records,pass,fail,inconclusive,errors,min_slack_sigma,min_relative_slack,median_relative_slack\n";
  for (const auto& s : rows) {
    os << s.suite << ',' << s.records << ',' << s.pass << ',' << s.fail << ',' << s.inconclusive << ',' << s.errors << ','
       << fmt(s.min_slack_sigma) << ',' << fmt(s.min_relative_slack) << ',' << fmt(s.median_relative_slack) << '\n';
  }
}

}  // namespace lpbm::cli
