#pragma once

#include "psga/bench/runner.hpp"
#include "psga/bench/selftest.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace psga::bench {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitNumeric = 2;

/// `run <config>`, `summarize <dir>`, `selftest`. Returns 0 on success, 1 on
/// usage or config errors, 2 when any run ended in numeric_failure.
inline int cli_main(int argc, const char* const* argv, std::ostream& out = std::cout,
                    std::ostream& err = std::cerr) {
  CLI::App app{"Stochastic proximal gradient benchmark harness", "psga_bench"};
  app.require_subcommand(1);

  std::string config_path;
  SuiteOptions opts;
  std::uint64_t seed = 0, max_iters = 0;
  std::string output;
  auto* run = app.add_subcommand("run", "Execute every [[run]] in a TOML suite file");
  run->add_option("config", config_path, "Suite file")->required();
  run->add_option("--jobs", opts.jobs, "Concurrent runs")->check(CLI::PositiveNumber);
  auto* seed_opt = run->add_option("--seed", seed, "Override every run's seed");
  auto* iters_opt = run->add_option("--max-iters", max_iters, "Override max_iters")
                        ->check(CLI::PositiveNumber);
  auto* out_opt = run->add_option("--output", output, "Override output_dir");

  std::string summary_dir;
  auto* summarize = app.add_subcommand("summarize", "Rebuild the summary table of a run directory");
  summarize->add_option("dir", summary_dir, "Output directory of a previous run")->required();

  auto* selftest = app.add_subcommand("selftest", "Check numerical invariants in-process");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n\n" << app.help();
    return kExitConfig;
  }

  try {
    if (run->parsed()) {
      if (*seed_opt) opts.seed = seed;
      if (*iters_opt) opts.max_iters = max_iters;
      if (*out_opt) opts.output_dir = output;
      auto suite = run_suite(load_suite(config_path), opts);
      out << format_summary_table(suite.summary);
      for (const auto& r : suite.runs)
        if (r.outcome != Outcome::completed) err << r.name << ": " << r.message << '\n';
      return suite.any_numeric_failure() ? kExitNumeric : kExitOk;
    }
    if (summarize->parsed()) {
      auto rows = summarize_dir(summary_dir);
      out << format_summary_table(rows);
      return kExitOk;
    }
    if (selftest->parsed()) {
      bool ok = true;
      for (const auto& r : run_selftest()) {
        out << (r.passed ? "PASS " : "FAIL ") << r.name;
        if (!r.detail.empty()) out << " (" << r.detail << ')';
        out << '\n';
        ok = ok && r.passed;
      }
      return ok ? kExitOk : kExitNumeric;
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitConfig;
}

}  // namespace psga::bench
