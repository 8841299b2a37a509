#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "lpbm/cli/config.hpp"
#include "lpbm/cli/runner.hpp"

using namespace lpbm;

int main(int argc, char** argv) {
  CLI::App app{"Numerical checks of L_p Brunn-Minkowski inequalities"};
  app.require_subcommand(1);

  std::string run_cfg;
  std::optional<std::uint64_t> seed_override;
  std::optional<std::int64_t> samples_override;
  std::optional<int> threads_override;
  std::optional<std::string> out_dir;
  bool quiet = false;
  auto* run = app.add_subcommand("run", "run an experiment config and write the report");
  run->add_option("config", run_cfg, "experiment JSON")->required();
  run->add_option("--seed-override", seed_override, "replace the top-level seed");
  run->add_option("--samples-override", samples_override, "replace sampling.n_samples");
  run->add_option("--threads", threads_override, "replace sampling.shards (worker threads)");
  run->add_option("--out", out_dir, "replace output.dir");
  run->add_flag("-q,--quiet", quiet, "no per-suite progress lines");

  std::string describe_cfg;
  auto* desc = app.add_subcommand("describe", "print the parsed config and its fingerprint");
  desc->add_option("config", describe_cfg, "experiment JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : cli::kRuntimeError;
  }

  try {
    if (*desc) {
      cli::describe(cli::load_config(describe_cfg), std::cout);
      return cli::kOk;
    }
    auto cfg = cli::load_config(run_cfg);
    if (seed_override) cfg.seed = *seed_override;
    if (samples_override) {
      if (*samples_override < 2) throw ConfigError("--samples-override", "need at least 2 samples");
      cfg.n_samples = *samples_override;
    }
    if (threads_override) {
      if (*threads_override < 1) throw ConfigError("--threads", "must be positive");
      cfg.shards = *threads_override;
    }
    if (out_dir) cfg.output.dir = *out_dir;

    auto res = cli::run_experiment(cfg, quiet ? nullptr : &std::cerr);
    cli::write_outputs(res, cfg);
    std::cout << "fingerprint " << res.fingerprint << "\n"
              << "records " << (res.count(Verdict::pass) + res.count(Verdict::fail) + res.count(Verdict::inconclusive) +
                                res.count(Verdict::error))
              << ": " << res.count(Verdict::pass) << " pass, " << res.count(Verdict::fail) << " fail, "
              << res.count(Verdict::inconclusive) << " inconclusive, " << res.count(Verdict::error) << " error\n"
              << "report " << res.report_path.string() << "\n"
              << "summary " << res.summary_path.string() << "\n";
    return res.exit_code();
  } catch (const ConfigError& e) {
    std::cerr << "config error at " << e.what() << "\n";
    return cli::kRuntimeError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli::kRuntimeError;
  }
}
