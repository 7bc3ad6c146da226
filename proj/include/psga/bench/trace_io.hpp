#pragma once

#include "psga/errors.hpp"
#include "psga/metrics.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace psga::bench {

inline constexpr std::string_view kTraceHeader =
    "iter,elapsed_s,f_val,rel_subopt,grad_err,stationarity,eta,branch";

inline std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

inline void write_trace(std::ostream& out, const std::vector<TraceRecord>& trace) {
  out << kTraceHeader << '\n';
  for (const auto& r : trace) {
    out << r.iter << ',' << format_real(r.elapsed_s) << ',' << format_real(r.f_val) << ','
        << (r.rel_subopt ? format_real(*r.rel_subopt) : "-") << ','
        << format_real(r.grad_err) << ',' << format_real(r.stationarity) << ','
        << (r.eta ? format_real(*r.eta) : "-") << ','
        << (r.branch.empty() ? "-" : r.branch) << '\n';
  }
}

inline void write_trace(const std::filesystem::path& path,
                        const std::vector<TraceRecord>& trace) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_trace(out, trace);
}

inline std::vector<TraceRecord> read_trace(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != kTraceHeader)
    throw std::runtime_error(path.string() + ": unexpected trace header");
  std::vector<TraceRecord> trace;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto cells = split_csv(line);
    if (cells.size() != 8) throw std::runtime_error(path.string() + ": bad row '" + line + "'");
    TraceRecord r;
    r.iter = std::stoull(cells[0]);
    r.elapsed_s = std::stod(cells[1]);
    r.f_val = std::stod(cells[2]);
    if (cells[3] != "-") r.rel_subopt = std::stod(cells[3]);
    r.grad_err = std::stod(cells[4]);
    r.stationarity = std::stod(cells[5]);
    if (cells[6] != "-") r.eta = std::stod(cells[6]);
    if (cells[7] != "-") r.branch = cells[7];
    trace.push_back(std::move(r));
  }
  return trace;
}

}  // namespace psga::bench
