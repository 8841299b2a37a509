#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include <boost/math/distributions/normal.hpp>

#include "lpbm/core/rng.hpp"
#include "lpbm/verify/families.hpp"
#include "lpbm/verify/inequality.hpp"

namespace lpbm {

inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  return h;
}

// One-sided per-test multiplier keeping the family-wise rate of a k-sigma
// test over m records.
inline double bonferroni_k(double k, std::size_t m) {
  if (m <= 1) return k;
  const boost::math::normal z;
  const double tail = boost::math::cdf(boost::math::complement(z, k));
  return boost::math::quantile(boost::math::complement(z, tail / static_cast<double>(m)));
}

struct SuiteOptions {
  EvalSettings eval;
  std::uint64_t seed = 1;
  int threads = 1;
  bool bonferroni = true;
};

// All (lambda, p) records of one inequality over one family, ordered by
// (pair, lambda, p) regardless of the thread count. A pair whose
// evaluation throws yields "error" records and the run goes on.
inline std::vector<VerificationRecord> run_inequality(const InequalitySpec& spec, const PairFamily& fam,
                                                      const std::vector<BodyPair>& pairs, const SuiteOptions& opt) {
  spec.validate(fam.dim);
  const std::size_t per_pair = spec.lambdas.size() * spec.p_values.size();
  const double k = opt.bonferroni ? bonferroni_k(opt.eval.sigma_k, per_pair * pairs.size()) : opt.eval.sigma_k;
  const std::uint64_t key = fnv1a64(spec.name) ^ (fnv1a64(fam.name) << 1);
  std::vector<std::vector<VerificationRecord>> slots(pairs.size());

  auto work = [&](std::size_t i) {
    const BodyPair& pair = pairs[i];
    auto& out = slots[i];
    try {
      const std::uint64_t seed = Stream(opt.seed, key, static_cast<std::uint64_t>(pair.id)).next_u64();
      const PairEvaluator ev(spec.functional, pair.K, pair.L, opt.eval, seed);
      for (double l : spec.lambdas) {
        for (double p : spec.p_values) {
          auto r = check_lp_bm(spec, ev, pair, l, p, opt.eval, k);
          r.family = fam.name;
          out.push_back(std::move(r));
        }
      }
    } catch (const std::exception& e) {
      out.clear();
      for (double l : spec.lambdas) {
        for (double p : spec.p_values) {
          VerificationRecord r;
          r.suite = spec.name;
          r.family = fam.name;
          r.pair = pair.id;
          r.relation = pair.relation;
          r.lambda = l;
          r.p = p;
          r.verdict = Verdict::error;
          r.note = e.what();
          out.push_back(std::move(r));
        }
      }
    }
  };

  const int threads = std::max(1, std::min<int>(opt.threads, static_cast<int>(pairs.size())));
  if (threads == 1) {
    for (std::size_t i = 0; i < pairs.size(); ++i) work(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < pairs.size(); i = next++) work(i);
      });
    }
    for (auto& th : pool) th.join();
  }
  std::vector<VerificationRecord> all;
  all.reserve(per_pair * pairs.size());
  for (auto& s : slots) std::move(s.begin(), s.end(), std::back_inserter(all));
  return all;
}

struct SuiteSummary {
  std::string suite;
  std::size_t records = 0;
  std::size_t pass = 0;
  std::size_t fail = 0;
  std::size_t inconclusive = 0;
  std::size_t errors = 0;
  std::optional<double> min_slack_sigma;         // over records with sigma > 0
  std::optional<double> min_relative_slack;      // slack / max(|lhs|, |rhs|)
  std::optional<double> median_relative_slack;   // non-identical pairs only
};

inline SuiteSummary summarize(const std::string& suite, const std::vector<VerificationRecord>& recs) {
  SuiteSummary s;
  s.suite = suite;
  std::vector<double> rel;
  for (const auto& r : recs) {
    ++s.records;
    switch (r.verdict) {
      case Verdict::pass: ++s.pass; break;
      case Verdict::fail: ++s.fail; break;
      case Verdict::inconclusive: ++s.inconclusive; break;
      case Verdict::error: ++s.errors; continue;
    }
    const double z = r.slack_in_sigma();
    if (!std::isnan(z)) s.min_slack_sigma = s.min_slack_sigma ? std::min(*s.min_slack_sigma, z) : z;
    const double q = r.relative_slack();
    s.min_relative_slack = s.min_relative_slack ? std::min(*s.min_relative_slack, q) : q;
    if (r.relation != PairRelation::identical) rel.push_back(q);
  }
  if (!rel.empty()) {
    const std::size_t h = rel.size() / 2;
    std::nth_element(rel.begin(), rel.begin() + static_cast<std::ptrdiff_t>(h), rel.end());
    double med = rel[h];
    if (rel.size() % 2 == 0) med = 0.5 * (med + *std::max_element(rel.begin(), rel.begin() + static_cast<std::ptrdiff_t>(h)));
    s.median_relative_slack = med;
  }
  return s;
}

}  // namespace lpbm
