#pragma once

#include "psga/bench/trace_io.hpp"

#include <algorithm>
#include <iomanip>
#include <limits>
#include <map>
#include <optional>
#include <tuple>

namespace psga::bench {

enum class Outcome { completed, memory_refused, numeric_failure };

inline std::string_view to_string(Outcome o) {
  switch (o) {
    case Outcome::completed: return "completed";
    case Outcome::memory_refused: return "memory_refused";
    case Outcome::numeric_failure: return "numeric_failure";
  }
  return "?";
}

inline Outcome parse_outcome(std::string_view s) {
  if (s == "completed") return Outcome::completed;
  if (s == "memory_refused") return Outcome::memory_refused;
  if (s == "numeric_failure") return Outcome::numeric_failure;
  throw std::runtime_error("unknown outcome '" + std::string(s) + "'");
}

/// One row of the manifest written next to the traces.
struct RunInfo {
  std::string name;
  std::string dataset;
  std::string problem;
  double lambda = 0.0;
  std::string algorithm;
  std::uint64_t seed = 0;
  double best_tol = 0.0;
  Outcome outcome = Outcome::completed;
  std::string trace_file;
  std::string message;
};

inline constexpr std::string_view kManifestHeader =
    "name,dataset,problem,lambda,algorithm,seed,best_tol,outcome,trace_file,message";

struct SummaryRow {
  RunInfo run;
  std::optional<double> f_best;
  std::uint64_t iters_to_best = 0;
  double seconds_to_best = 0.0;
};

struct BestPoint {
  double f_best = std::numeric_limits<double>::infinity();
  std::uint64_t iters = 0;
  double seconds = 0.0;
};

/// f_best is the minimum logged objective; the reported iteration and time
/// are those of the first row within best_tol of it.
inline std::optional<BestPoint> best_point(const std::vector<TraceRecord>& trace,
                                           double best_tol) {
  if (trace.empty()) return std::nullopt;
  BestPoint b;
  for (const auto& r : trace) b.f_best = std::min(b.f_best, r.f_val);
  for (const auto& r : trace) {
    if (r.f_val <= b.f_best + best_tol) {
      b.iters = r.iter;
      b.seconds = r.elapsed_s;
      break;
    }
  }
  return b;
}

inline std::string sanitize_cell(std::string s) {
  for (auto& c : s)
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  return s;
}

inline void write_manifest(const std::filesystem::path& path, const std::vector<RunInfo>& runs) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << kManifestHeader << '\n';
  for (const auto& r : runs) {
    out << sanitize_cell(r.name) << ',' << sanitize_cell(r.dataset) << ',' << r.problem << ','
        << format_real(r.lambda) << ',' << r.algorithm << ',' << r.seed << ','
        << format_real(r.best_tol) << ',' << to_string(r.outcome) << ','
        << sanitize_cell(r.trace_file) << ',' << sanitize_cell(r.message) << '\n';
  }
}

inline std::vector<RunInfo> read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != kManifestHeader)
    throw std::runtime_error(path.string() + ": unexpected manifest header");
  std::vector<RunInfo> runs;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto c = split_csv(line);
    if (c.size() != 10) throw std::runtime_error(path.string() + ": bad row '" + line + "'");
    RunInfo r;
    r.name = c[0];
    r.dataset = c[1];
    r.problem = c[2];
    r.lambda = std::stod(c[3]);
    r.algorithm = c[4];
    r.seed = std::stoull(c[5]);
    r.best_tol = std::stod(c[6]);
    r.outcome = parse_outcome(c[7]);
    r.trace_file = c[8];
    r.message = c[9];
    runs.push_back(std::move(r));
  }
  return runs;
}

inline SummaryRow summarize_run(const RunInfo& info, const std::vector<TraceRecord>& trace) {
  SummaryRow row{info, std::nullopt, 0, 0.0};
  if (auto b = best_point(trace, info.best_tol)) {
    row.f_best = b->f_best;
    row.iters_to_best = b->iters;
    row.seconds_to_best = b->seconds;
  }
  return row;
}

inline void sort_summary(std::vector<SummaryRow>& rows) {
  std::stable_sort(rows.begin(), rows.end(), [](const SummaryRow& a, const SummaryRow& b) {
    return std::tie(a.run.dataset, a.run.problem, a.run.lambda, a.run.algorithm, a.run.seed,
                    a.run.name) < std::tie(b.run.dataset, b.run.problem, b.run.lambda,
                                           b.run.algorithm, b.run.seed, b.run.name);
  });
}

inline constexpr std::string_view kSummaryHeader =
    "dataset,problem,lambda,algorithm,seed,name,f_best,iters_to_best,seconds_to_best,outcome";

inline void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows) {
  out << kSummaryHeader << '\n';
  for (const auto& r : rows) {
    out << sanitize_cell(r.run.dataset) << ',' << r.run.problem << ','
        << format_real(r.run.lambda) << ',' << r.run.algorithm << ',' << r.run.seed << ','
        << sanitize_cell(r.run.name) << ',' << (r.f_best ? format_real(*r.f_best) : "-")
        << ',' << (r.f_best ? std::to_string(r.iters_to_best) : "-") << ','
        << (r.f_best ? format_real(r.seconds_to_best) : "-") << ',' << to_string(r.run.outcome)
        << '\n';
  }
}

/// Aligned text table, one block per (dataset, problem, lambda).
inline std::string format_summary_table(const std::vector<SummaryRow>& rows) {
  std::ostringstream out;
  std::tuple<std::string, std::string, double> current{"", "", -1.0};
  bool first = true;
  for (const auto& r : rows) {
    std::tuple<std::string, std::string, double> key{r.run.dataset, r.run.problem, r.run.lambda};
    if (first || key != current) {
      if (!first) out << '\n';
      out << r.run.dataset << " (" << r.run.problem << ", lambda=" << r.run.lambda << ")\n";
      out << std::left << std::setw(12) << "Algorithm" << std::right << std::setw(12)
          << "f(best)" << std::setw(8) << "Iter." << std::setw(12) << "Time (s)" << "  outcome\n";
      current = key;
      first = false;
    }
    out << std::left << std::setw(12) << r.run.algorithm << std::right;
    if (r.f_best) {
      out << std::setw(12) << std::fixed << std::setprecision(6) << *r.f_best << std::setw(8)
          << r.iters_to_best << std::setw(12) << std::setprecision(2) << r.seconds_to_best;
      out.unsetf(std::ios::floatfield);
    } else {
      out << std::setw(12) << "--" << std::setw(8) << "--" << std::setw(12) << "--";
    }
    out << "  " << to_string(r.run.outcome) << '\n';
  }
  return out.str();
}

/// Rebuilds summary.csv and summary.txt from manifest.csv and the traces in
/// `dir`. Reads nothing else and never touches the traces.
inline std::vector<SummaryRow> summarize_dir(const std::filesystem::path& dir) {
  const auto runs = read_manifest(dir / "manifest.csv");
  std::vector<SummaryRow> rows;
  for (const auto& info : runs) {
    std::vector<TraceRecord> trace;
    if (!info.trace_file.empty()) trace = read_trace(dir / info.trace_file);
    rows.push_back(summarize_run(info, trace));
  }
  sort_summary(rows);
  {
    std::ofstream out(dir / "summary.csv", std::ios::binary);
    if (!out) throw std::runtime_error("cannot write summary.csv");
    write_summary_csv(out, rows);
  }
  std::ofstream txt(dir / "summary.txt", std::ios::binary);
  txt << format_summary_table(rows);
  return rows;
}

}  // namespace psga::bench
