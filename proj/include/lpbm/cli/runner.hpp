#pragma once

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "lpbm/cli/config.hpp"
#include "lpbm/cli/report.hpp"
#include "lpbm/verify/families.hpp"
#include "lpbm/verify/suite.hpp"

namespace lpbm::cli {

enum ExitCode : int { kOk = 0, kRuntimeError = 1, kInequalityFailed = 2 };

struct SuiteRun {
  const InequalitySpec* spec = nullptr;
  std::vector<VerificationRecord> records;
  SuiteSummary summary;
};

struct ExperimentResult {
  std::string fingerprint;
  std::vector<SuiteRun> suites;
  std::filesystem::path report_path;
  std::filesystem::path summary_path;

  std::size_t count(Verdict v) const {
    std::size_t n = 0;
    for (const auto& s : suites) {
      for (const auto& r : s.records) n += r.verdict == v;
    }
    return n;
  }
  int exit_code() const { return count(Verdict::fail) > 0 ? kInequalityFailed : kOk; }
};

// Runs every inequality over its families, in canonical order.
inline ExperimentResult run_experiment(const ExperimentConfig& c, std::ostream* log = nullptr) {
  ExperimentResult res;
  res.fingerprint = fingerprint(c);
  const SuiteOptions opt = c.suite_options();
  std::map<std::string, std::vector<BodyPair>> pairs;
  for (const auto& f : c.families) {
    try {
      pairs.emplace(f.name, generate_pairs(f));
    } catch (const Error& e) {
      throw ConfigError("families." + f.name, e.what());
    }
  }
  for (const auto& q : c.inequalities) {
    SuiteRun run;
    run.spec = &q;
    for (const auto& fname : q.families) {
      auto recs = run_inequality(q, c.family(fname), pairs.at(fname), opt);
      std::move(recs.begin(), recs.end(), std::back_inserter(run.records));
    }
    run.summary = summarize(q.name, run.records);
    if (log) {
      *log << q.name << ": " << run.summary.records << " records, " << run.summary.pass << " pass, " << run.summary.fail
           << " fail, " << run.summary.inconclusive << " inconclusive, " << run.summary.errors << " error\n";
    }
    res.suites.push_back(std::move(run));
  }
  return res;
}

inline void write_outputs(ExperimentResult& res, const ExperimentConfig& c) {
  namespace fs = std::filesystem;
  const fs::path dir(c.output.dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("output.dir", "cannot create '" + dir.string() + "': " + ec.message());
  res.report_path = dir / c.output.report;
  res.summary_path = dir / c.output.summary;
  std::ofstream rep(res.report_path);
  if (!rep) throw ConfigError("output.report", "cannot write '" + res.report_path.string() + "'");
  for (const auto& s : res.suites) {
    for (const auto& r : s.records) rep << record_json(r, *s.spec, res.fingerprint).dump() << '\n';
  }
  std::ofstream sum(res.summary_path);
  if (!sum) throw ConfigError("output.summary", "cannot write '" + res.summary_path.string() + "'");
  std::vector<SuiteSummary> rows;
  for (const auto& s : res.suites) rows.push_back(s.summary);
  write_summary_csv(sum, rows);
}

inline void describe(const ExperimentConfig& c, std::ostream& os) {
  os << "experiment   " << c.name << "\n"
     << "fingerprint  " << fingerprint(c) << "\n"
     << "seed         " << c.seed << "\n"
     << "samples      " << c.n_samples << " per pair (" << c.shards << " worker thread" << (c.shards == 1 ? "" : "s") << ")\n"
     << "tolerance    " << c.sigma_k << " sigma" << (c.bonferroni ? " (Bonferroni)" : "") << ", mu grid " << c.mu_grid
     << "\n\nfamilies\n";
  for (const auto& f : c.families) {
    os << "  " << f.name << ": " << to_string(f.generator) << ", n=" << f.dim << ", " << f.count << " pairs, seed " << f.seed
       << "\n";
  }
  os << "\ninequalities\n";
  std::size_t total = 0, samples = 0;
  for (const auto& q : c.inequalities) {
    std::size_t pairs = 0;
    for (const auto& f : q.families) pairs += static_cast<std::size_t>(c.family(f).count);
    const std::size_t recs = pairs * q.p_values.size() * q.lambdas.size();
    // One shared sample set per pair for measures; Monte Carlo fallbacks
    // of the other functionals draw per evaluation.
    const bool sampled = q.functional.kind == FunctionalSpec::Kind::measure ||
                         (q.functional.kind != FunctionalSpec::Kind::polar_quermass && c.family(q.families.front()).dim > 3);
    const std::size_t budget = sampled ? pairs * static_cast<std::size_t>(c.n_samples) : 0;
    total += recs;
    samples += budget;
    os << "  " << q.name << ": " << q.functional.describe() << ", alpha=" << q.alpha << ", C=" << q.C << ", "
       << to_string(q.direction) << ", " << recs << " tasks, ~" << budget << " samples\n";
  }
  os << "\ntotal tasks " << total << ", estimated sample budget " << samples << "\n";
}

}  // namespace lpbm::cli
