#pragma once

#include "psga/bench/methods.hpp"
#include "psga/bench/summary.hpp"
#include "psga/metrics.hpp"

#include <atomic>
#include <chrono>
#include <map>
#include <set>
#include <thread>

namespace psga::bench {

struct RunResult {
  RunConfig config;
  // Unique within the output directory; also the trace file stem.
  std::string name;
  Outcome outcome = Outcome::completed;
  std::string message;
  std::vector<TraceRecord> trace;
};

inline ParseOptions parse_options_for(const RunConfig& c) {
  return {c.problem == Problem::logistic, c.n_features};
}

inline LossKind loss_kind(Problem p) {
  return p == Problem::logistic ? LossKind::logistic : LossKind::least_squares;
}

/// Runs one configuration to its stopping rule. Metric evaluation happens
/// off the clock, and never touches the optimizer state or its random
/// streams.
inline RunResult run_one(const RunConfig& c, std::shared_ptr<const Dataset> data) {
  using clock = std::chrono::steady_clock;
  RunResult result{c, c.name, Outcome::completed, {}, {}};
  const SmoothLoss loss(loss_kind(c.problem), std::move(data));
  const L1Norm reg(c.lambda);

  std::unique_ptr<Method> method;
  try {
    method = make_method(c, loss, reg);
  } catch (const MemoryBudgetExceeded& e) {
    result.outcome = Outcome::memory_refused;
    result.message = e.what();
    return result;
  }

  double elapsed = 0.0;
  for (std::uint64_t k = 1; k <= c.max_iters; ++k) {
    const auto t0 = clock::now();
    try {
      method->advance();
    } catch (const NumericFailure& e) {
      result.outcome = Outcome::numeric_failure;
      result.message = e.what();
      break;
    }
    elapsed += std::chrono::duration<double>(clock::now() - t0).count();
    const bool out_of_time = elapsed >= c.max_seconds;
    if (k % c.log_every == 0 || k == c.max_iters || out_of_time) {
      TraceRecord r;
      r.iter = k;
      r.elapsed_s = c.timing ? elapsed : 0.0;
      r.f_val = objective(loss, reg, method->iterate());
      r.grad_err = grad_estimation_error(method->estimate(), loss, method->estimate_point());
      r.stationarity = stationarity(loss, reg, method->iterate());
      r.eta = method->step_size();
      r.branch = method->branch();
      if (!std::isfinite(r.f_val)) {
        result.outcome = Outcome::numeric_failure;
        result.message = "non-finite objective at iteration " + std::to_string(k);
        break;
      }
      result.trace.push_back(std::move(r));
    }
    if (out_of_time) break;
  }
  return result;
}

struct SuiteOptions {
  std::size_t jobs = 1;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> max_iters;
  std::optional<std::string> output_dir;
  // false keeps everything in memory.
  bool write_files = true;
};

struct SuiteResult {
  std::vector<RunResult> runs;
  std::vector<SummaryRow> summary;

  bool any_numeric_failure() const {
    return std::any_of(runs.begin(), runs.end(), [](const RunResult& r) {
      return r.outcome == Outcome::numeric_failure;
    });
  }
};

inline RunInfo run_info(const RunResult& r) {
  RunInfo info;
  info.name = r.name;
  info.dataset = r.config.dataset_name();
  info.problem = std::string(to_string(r.config.problem));
  info.lambda = r.config.lambda;
  info.algorithm = std::string(to_string(r.config.algorithm));
  info.seed = r.config.seed;
  info.best_tol = r.config.best_tol;
  info.outcome = r.outcome;
  info.trace_file = r.outcome == Outcome::memory_refused ? "" : r.name + ".csv";
  info.message = r.message;
  return info;
}

namespace detail {

using DatasetKey = std::tuple<std::string, bool, std::size_t>;

inline std::map<DatasetKey, std::shared_ptr<const Dataset>> load_datasets(
    const std::vector<RunConfig>& configs) {
  std::map<DatasetKey, std::shared_ptr<const Dataset>> out;
  for (const auto& c : configs) {
    const auto opts = parse_options_for(c);
    DatasetKey key{c.dataset_path, opts.remap_binary, opts.n_features};
    if (out.contains(key)) continue;
    if (!std::filesystem::exists(c.dataset_path))
      throw ConfigError("dataset not found: " + c.dataset_path);
    try {
      out.emplace(key, std::make_shared<const Dataset>(load_libsvm(c.dataset_path, opts)));
    } catch (const ParseError& e) {
      throw ConfigError(c.dataset_path + ": " + e.what());
    } catch (const std::exception& e) {
      throw ConfigError(c.dataset_path + ": " + e.what());
    }
  }
  return out;
}

inline void preflight(const RunConfig& c, const std::shared_ptr<const Dataset>& data) {
  try {
    const SmoothLoss loss(loss_kind(c.problem), data);
    if (c.algorithm == Algorithm::psga) {
      PsgaParams p{c.batch_size, c.m, c.eta0, c.clamp_to_theory, c.eps_curvature};
      p.validate(loss.lipschitz_bound());
    }
    if (c.alpha < 0.0 || !(c.zeta > 0.0) || !(c.gamma > 0.0))
      throw std::invalid_argument("alpha, zeta and gamma must be positive");
  } catch (const std::invalid_argument& e) {
    throw ConfigError(c.dataset_name() + "/" + std::string(to_string(c.algorithm)) + ": " +
                      e.what());
  }
}

inline void assign_names(std::vector<RunConfig>& configs) {
  std::map<std::string, std::set<std::string>> used;
  for (auto& c : configs) {
    std::string base = c.name.empty() ? c.dataset_name() + "_" +
                                            std::string(to_string(c.algorithm)) + "_s" +
                                            std::to_string(c.seed)
                                      : c.name;
    std::string name = base;
    for (int i = 2; used[c.output_dir].contains(name); ++i) name = base + "_" + std::to_string(i);
    used[c.output_dir].insert(name);
    c.name = name;
  }
}

}  // namespace detail

/// Runs every configuration, resolves f* per (dataset, problem, lambda) as the
/// smallest f_best across the suite, backfills rel_subopt and, unless
/// disabled, writes traces, manifest.csv, summary.csv and summary.txt into
/// each output directory.
inline SuiteResult run_suite(std::vector<RunConfig> configs, const SuiteOptions& opts = {}) {
  if (configs.empty()) throw ConfigError("empty suite");
  for (auto& c : configs) {
    if (opts.seed) c.seed = *opts.seed;
    if (opts.max_iters) c.max_iters = *opts.max_iters;
    if (opts.output_dir) c.output_dir = *opts.output_dir;
    c.validate();
  }
  detail::assign_names(configs);
  const auto datasets = detail::load_datasets(configs);
  auto data_for = [&](const RunConfig& c) {
    const auto o = parse_options_for(c);
    return datasets.at({c.dataset_path, o.remap_binary, o.n_features});
  };
  for (const auto& c : configs) detail::preflight(c, data_for(c));

  SuiteResult suite;
  suite.runs.resize(configs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < configs.size(); i = next++)
      suite.runs[i] = run_one(configs[i], data_for(configs[i]));
  };
  const std::size_t jobs = std::max<std::size_t>(1, std::min(opts.jobs, configs.size()));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t j = 0; j < jobs; ++j) pool.emplace_back(worker);
  }

  using GroupKey = std::tuple<std::string, Problem, double, std::size_t>;
  std::map<GroupKey, double> f_star;
  auto group_of = [](const RunConfig& c) {
    return GroupKey{c.dataset_path, c.problem, c.lambda, c.n_features};
  };
  for (const auto& r : suite.runs) {
    for (const auto& rec : r.trace) {
      auto [it, fresh] = f_star.try_emplace(group_of(r.config), rec.f_val);
      if (!fresh) it->second = std::min(it->second, rec.f_val);
    }
  }
  for (auto& r : suite.runs) {
    auto it = f_star.find(group_of(r.config));
    if (it == f_star.end() || !(it->second > 0.0)) continue;
    for (auto& rec : r.trace) rec.rel_subopt = rel_subopt(rec.f_val, it->second);
  }

  std::map<std::string, std::vector<const RunResult*>> by_dir;
  for (const auto& r : suite.runs) {
    suite.summary.push_back(summarize_run(run_info(r), r.trace));
    by_dir[r.config.output_dir].push_back(&r);
  }
  sort_summary(suite.summary);

  if (opts.write_files) {
    for (const auto& [dir, runs] : by_dir) {
      std::filesystem::create_directories(dir);
      std::vector<RunInfo> infos;
      for (const auto* r : runs) {
        infos.push_back(run_info(*r));
        if (!infos.back().trace_file.empty())
          write_trace(std::filesystem::path(dir) / infos.back().trace_file, r->trace);
      }
      write_manifest(std::filesystem::path(dir) / "manifest.csv", infos);
      summarize_dir(dir);
    }
  }
  return suite;
}

}  // namespace psga::bench
