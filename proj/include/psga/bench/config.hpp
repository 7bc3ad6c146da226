#pragma once

#include "psga/errors.hpp"

#include <toml.hpp>

#include <cctype>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace psga::bench {

enum class Algorithm { psga, pstorm, spstorm, proxsvrg, saga, rda };
enum class Problem { logistic, lasso };

inline constexpr Algorithm kAllAlgorithms[] = {Algorithm::psga,     Algorithm::pstorm,
                                               Algorithm::proxsvrg, Algorithm::rda,
                                               Algorithm::saga,     Algorithm::spstorm};

inline std::string_view to_string(Algorithm a) {
  switch (a) {
    case Algorithm::psga: return "PSGA";
    case Algorithm::pstorm: return "PStorm";
    case Algorithm::spstorm: return "SPStorm";
    case Algorithm::proxsvrg: return "ProxSVRG";
    case Algorithm::saga: return "SAGA";
    case Algorithm::rda: return "RDA";
  }
  return "?";
}

inline std::string_view to_string(Problem p) {
  return p == Problem::logistic ? "logistic" : "lasso";
}

namespace detail {
inline std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  std::erase(out, '-');
  std::erase(out, '_');
  return out;
}
}  // namespace detail

inline Algorithm parse_algorithm(std::string_view name) {
  const auto key = detail::lower(name);
  for (auto a : kAllAlgorithms)
    if (detail::lower(to_string(a)) == key) return a;
  throw ConfigError("unknown algorithm '" + std::string(name) + "'");
}

inline Problem parse_problem(std::string_view name) {
  const auto key = detail::lower(name);
  if (key == "logistic") return Problem::logistic;
  if (key == "lasso" || key == "leastsquares") return Problem::lasso;
  throw ConfigError("unknown problem '" + std::string(name) + "'");
}

struct RunConfig {
  std::string name;
  std::string dataset_path;
  Problem problem = Problem::logistic;
  double lambda = 1e-5;
  Algorithm algorithm = Algorithm::psga;
  std::uint64_t seed = 0;
  std::uint64_t max_iters = 1000;
  double max_seconds = 600.0;
  std::uint64_t log_every = 1;
  std::string output_dir = "out";
  // 0 keeps the largest index seen in the file.
  std::size_t n_features = 0;
  // iters_to_best is the first logged iteration within best_tol of f_best.
  double best_tol = 5e-5;
  // false writes 0 for every elapsed time so traces are byte-reproducible.
  bool timing = true;

  std::size_t batch_size = 256;
  // PSGA
  std::size_t m = 10;
  double eta0 = 0.0;
  bool clamp_to_theory = false;
  double eps_curvature = 1e-12;
  // S-PStorm, ProxSVRG, SAGA: 0 selects 0.1/L
  double alpha = 0.0;
  double zeta = 1.0;
  // RDA
  double gamma = 1e-2;
  // ProxSVRG: 0 selects 2N
  std::uint64_t epoch_length = 0;
  // SAGA
  std::uint64_t memory_budget_mb = 8192;

  std::string dataset_name() const {
    return std::filesystem::path(dataset_path).filename().string();
  }

  void validate() const {
    if (dataset_path.empty()) throw ConfigError("dataset_path is required");
    if (max_iters < 1) throw ConfigError("max_iters must be >= 1");
    if (log_every < 1) throw ConfigError("log_every must be >= 1");
    if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
    if (m < 2) throw ConfigError("m must be >= 2");
    if (!(lambda >= 0.0)) throw ConfigError("lambda must be >= 0");
    if (!(max_seconds > 0.0)) throw ConfigError("max_seconds must be > 0");
  }
};

namespace detail {

template <typename T>
T get(const toml::node& node, std::string_view key) {
  if constexpr (std::is_same_v<T, std::string>) {
    if (auto v = node.value<std::string>()) return *v;
  } else if constexpr (std::is_same_v<T, bool>) {
    if (auto v = node.value<bool>()) return *v;
  } else if constexpr (std::is_floating_point_v<T>) {
    if (auto v = node.value<double>()) return static_cast<T>(*v);
  } else {
    if (auto v = node.value<std::int64_t>(); v && *v >= 0) return static_cast<T>(*v);
  }
  throw ConfigError("bad value for '" + std::string(key) + "'");
}

inline void apply(RunConfig& c, const toml::table& tbl, const std::filesystem::path& base) {
  for (const auto& [k, node] : tbl) {
    const std::string_view key = k.str();
    if (key == "name") c.name = get<std::string>(node, key);
    else if (key == "dataset_path") {
      std::filesystem::path p = get<std::string>(node, key);
      c.dataset_path = (p.is_relative() ? base / p : p).lexically_normal().string();
    } else if (key == "problem") c.problem = parse_problem(get<std::string>(node, key));
    else if (key == "lambda") c.lambda = get<double>(node, key);
    else if (key == "algorithm") c.algorithm = parse_algorithm(get<std::string>(node, key));
    else if (key == "seed") c.seed = get<std::uint64_t>(node, key);
    else if (key == "max_iters") c.max_iters = get<std::uint64_t>(node, key);
    else if (key == "max_seconds") c.max_seconds = get<double>(node, key);
    else if (key == "log_every") c.log_every = get<std::uint64_t>(node, key);
    else if (key == "output_dir") {
      std::filesystem::path p = get<std::string>(node, key);
      c.output_dir = (p.is_relative() ? base / p : p).lexically_normal().string();
    } else if (key == "n_features") c.n_features = get<std::size_t>(node, key);
    else if (key == "best_tol") c.best_tol = get<double>(node, key);
    else if (key == "timing") c.timing = get<bool>(node, key);
    else if (key == "batch_size") c.batch_size = get<std::size_t>(node, key);
    else if (key == "m") c.m = get<std::size_t>(node, key);
    else if (key == "eta0") c.eta0 = get<double>(node, key);
    else if (key == "clamp_to_theory") c.clamp_to_theory = get<bool>(node, key);
    else if (key == "eps_curvature") c.eps_curvature = get<double>(node, key);
    else if (key == "alpha") c.alpha = get<double>(node, key);
    else if (key == "zeta") c.zeta = get<double>(node, key);
    else if (key == "gamma") c.gamma = get<double>(node, key);
    else if (key == "epoch_length") c.epoch_length = get<std::uint64_t>(node, key);
    else if (key == "memory_budget_mb") c.memory_budget_mb = get<std::uint64_t>(node, key);
    else throw ConfigError("unknown key '" + std::string(key) + "'");
  }
}

}  // namespace detail

/// Parses a suite file: an optional [defaults] table merged under every
/// [[run]] entry. Relative paths resolve against `base_dir`.
inline std::vector<RunConfig> parse_suite(std::string_view text,
                                          const std::filesystem::path& base_dir = ".") {
  toml::table root;
  try {
    root = toml::parse(text);
  } catch (const toml::parse_error& e) {
    throw ConfigError(std::string("TOML: ") + std::string(e.description()));
  }
  RunConfig defaults;
  for (const auto& [k, node] : root) {
    if (k.str() == "defaults") {
      if (!node.is_table()) throw ConfigError("[defaults] must be a table");
      detail::apply(defaults, *node.as_table(), base_dir);
    } else if (k.str() != "run") {
      throw ConfigError("unknown top-level key '" + std::string(k.str()) + "'");
    }
  }
  std::vector<RunConfig> runs;
  const toml::node* run_node = root.get("run");
  if (!run_node) throw ConfigError("no [[run]] entries");
  auto add = [&](const toml::table& t) {
    RunConfig c = defaults;
    detail::apply(c, t, base_dir);
    c.validate();
    runs.push_back(std::move(c));
  };
  if (auto* arr = run_node->as_array()) {
    for (const auto& el : *arr) {
      if (!el.is_table()) throw ConfigError("[[run]] entries must be tables");
      add(*el.as_table());
    }
  } else if (auto* t = run_node->as_table()) {
    add(*t);
  } else {
    throw ConfigError("'run' must be a table");
  }
  return runs;
}

inline std::vector<RunConfig> load_suite(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_suite(buf.str(), path.parent_path().empty() ? "." : path.parent_path());
}

}  // namespace psga::bench
