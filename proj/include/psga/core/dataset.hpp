#pragma once

#include "psga/core/sparse.hpp"
#include "psga/errors.hpp"

#include <zlib.h>

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <memory>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace psga {

/// Immutable design matrix plus labels. Rows are shared read-only between
/// every optimizer running on the same data.
class Dataset {
 public:
  Dataset(std::vector<SparseVec> rows, std::vector<double> labels,
          std::size_t n_features = 0)
      : rows_(std::move(rows)), labels_(std::move(labels)) {
    if (rows_.empty()) throw std::invalid_argument("dataset has no rows");
    if (rows_.size() != labels_.size())
      throw std::invalid_argument("row and label counts differ");
    std::size_t extent = 0;
    for (const auto& r : rows_) {
      if (!r.well_formed())
        throw std::invalid_argument("row indices must be strictly increasing");
      extent = std::max(extent, r.extent());
      max_row_sq_norm_ = std::max(max_row_sq_norm_, r.squared_norm());
      nnz_ += r.nnz();
    }
    if (n_features != 0 && n_features < extent)
      throw std::invalid_argument("feature dimension below largest index");
    n_features_ = std::max(n_features, extent);
  }

  std::size_t n_samples() const noexcept { return rows_.size(); }
  std::size_t n_features() const noexcept { return n_features_; }
  std::size_t nnz() const noexcept { return nnz_; }
  double max_row_sq_norm() const noexcept { return max_row_sq_norm_; }

  const SparseVec& row(std::size_t j) const { return rows_[j]; }
  double label(std::size_t j) const { return labels_[j]; }
  const std::vector<SparseVec>& rows() const noexcept { return rows_; }
  const std::vector<double>& labels() const noexcept { return labels_; }

  // Same rows, wider feature space (train/test dimension alignment).
  Dataset with_features(std::size_t n_features) const {
    return Dataset(rows_, labels_, std::max(n_features, n_features_));
  }

  friend bool operator==(const Dataset& a, const Dataset& b) {
    return a.n_features_ == b.n_features_ && a.labels_ == b.labels_ &&
           a.rows_ == b.rows_;
  }

 private:
  std::vector<SparseVec> rows_;
  std::vector<double> labels_;
  std::size_t n_features_ = 0;
  std::size_t nnz_ = 0;
  double max_row_sq_norm_ = 0.0;
};

struct ParseOptions {
  // Map a label set contained in {0, 1} onto {-1, +1}.
  bool remap_binary = true;
  // Lower bound on the feature dimension; 0 keeps the largest index.
  std::size_t n_features = 0;
};

namespace detail {

inline bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r'; }

template <typename T>
T parse_number(std::string_view tok, std::size_t line, const char* what) {
  T value{};
  if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc{} || ptr != tok.data() + tok.size())
    throw ParseError(line, std::string("malformed ") + what + " '" +
                               std::string(tok) + "'");
  return value;
}

inline void parse_line(std::string_view text, std::size_t line,
                       std::vector<SparseVec>& rows,
                       std::vector<double>& labels) {
  if (auto hash = text.find('#'); hash != std::string_view::npos)
    text = text.substr(0, hash);

  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    std::size_t start = i;
    while (i < text.size() && !is_space(text[i])) ++i;
    if (i > start) tokens.push_back(text.substr(start, i - start));
  }
  if (tokens.empty()) return;

  labels.push_back(parse_number<double>(tokens[0], line, "label"));
  SparseVec row;
  row.indices.reserve(tokens.size() - 1);
  row.values.reserve(tokens.size() - 1);
  for (std::size_t t = 1; t < tokens.size(); ++t) {
    auto tok = tokens[t];
    auto colon = tok.find(':');
    if (colon == std::string_view::npos)
      throw ParseError(line, "expected idx:val, got '" + std::string(tok) + "'");
    auto idx = parse_number<long long>(tok.substr(0, colon), line, "index");
    if (idx <= 0)
      throw ParseError(line, "feature indices are 1-based, got " +
                                 std::to_string(idx));
    if (idx > static_cast<long long>(UINT32_MAX))
      throw ParseError(line, "feature index too large");
    auto zero_based = static_cast<std::uint32_t>(idx - 1);
    if (!row.indices.empty() && zero_based <= row.indices.back())
      throw ParseError(line, "feature indices must be strictly increasing");
    row.indices.push_back(zero_based);
    row.values.push_back(parse_number<double>(tok.substr(colon + 1), line, "value"));
  }
  rows.push_back(std::move(row));
}

inline void remap_binary_labels(std::vector<double>& labels) {
  bool binary01 = std::all_of(labels.begin(), labels.end(),
                              [](double y) { return y == 0.0 || y == 1.0; });
  if (!binary01) return;
  for (auto& y : labels) y = (y == 0.0) ? -1.0 : 1.0;
}

}  // namespace detail

/// Parses LIBSVM text (`<label> <idx>:<val> ...`, 1-based indices).
inline Dataset parse_libsvm(std::istream& in, const ParseOptions& opts = {}) {
  std::vector<SparseVec> rows;
  std::vector<double> labels;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    detail::parse_line(line, lineno, rows, labels);
  }
  if (rows.empty()) throw ParseError(lineno, "no data rows");
  if (opts.remap_binary) detail::remap_binary_labels(labels);
  return Dataset(std::move(rows), std::move(labels), opts.n_features);
}

inline Dataset parse_libsvm(std::string_view text, const ParseOptions& opts = {}) {
  std::istringstream in{std::string(text)};
  return parse_libsvm(in, opts);
}

namespace detail {
inline bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() &&
         s.substr(s.size() - suffix.size()) == suffix;
}

inline std::string read_gzip(const std::string& path) {
  gzFile f = gzopen(path.c_str(), "rb");
  if (!f) throw std::runtime_error("cannot open " + path);
  std::unique_ptr<gzFile_s, int (*)(gzFile)> guard(f, gzclose);
  std::string out;
  char buf[1 << 16];
  int n = 0;
  while ((n = gzread(f, buf, sizeof(buf))) > 0) out.append(buf, n);
  if (n < 0) throw std::runtime_error("corrupt gzip stream in " + path);
  return out;
}
}  // namespace detail

/// Loads a LIBSVM file; `.gz` paths are decompressed transparently.
inline Dataset load_libsvm(const std::string& path, const ParseOptions& opts = {}) {
  if (detail::ends_with(path, ".gz")) {
    std::istringstream in(detail::read_gzip(path));
    return parse_libsvm(in, opts);
  }
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return parse_libsvm(in, opts);
}

inline void write_libsvm(std::ostream& out, const Dataset& data) {
  char buf[64];
  for (std::size_t j = 0; j < data.n_samples(); ++j) {
    std::snprintf(buf, sizeof(buf), "%.17g", data.label(j));
    out << buf;
    const auto& r = data.row(j);
    for (std::size_t i = 0; i < r.nnz(); ++i) {
      std::snprintf(buf, sizeof(buf), " %u:%.17g", r.indices[i] + 1, r.values[i]);
      out << buf;
    }
    out << '\n';
  }
}

inline std::string to_libsvm(const Dataset& data) {
  std::ostringstream out;
  write_libsvm(out, data);
  return out.str();
}

}  // namespace psga
