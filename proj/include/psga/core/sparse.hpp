#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace psga {

using Vector = Eigen::VectorXd;

/// One data row in index/value form. Indices are 0-based and strictly
/// increasing.
struct SparseVec {
  std::vector<std::uint32_t> indices;
  std::vector<double> values;

  std::size_t nnz() const noexcept { return indices.size(); }
  bool empty() const noexcept { return indices.empty(); }

  // One past the largest index, 0 for an empty row.
  std::size_t extent() const noexcept {
    return indices.empty() ? 0 : std::size_t{indices.back()} + 1;
  }

  double squared_norm() const noexcept {
    double s = 0.0;
    for (double v : values) s += v * v;
    return s;
  }

  bool well_formed() const noexcept {
    if (indices.size() != values.size()) return false;
    for (std::size_t i = 1; i < indices.size(); ++i)
      if (indices[i] <= indices[i - 1]) return false;
    return true;
  }

  Vector to_dense(std::size_t dim) const {
    Vector out = Vector::Zero(static_cast<Eigen::Index>(dim));
    for (std::size_t i = 0; i < indices.size(); ++i) out[indices[i]] = values[i];
    return out;
  }

  friend bool operator==(const SparseVec&, const SparseVec&) = default;
};

namespace detail {
inline void check_extent(const SparseVec& a, const Vector& x) {
  if (a.extent() > static_cast<std::size_t>(x.size()))
    throw std::invalid_argument("sparse index exceeds dense dimension");
}
}  // namespace detail

inline double dot(const SparseVec& a, const Vector& x) {
  detail::check_extent(a, x);
  double s = 0.0;
  for (std::size_t i = 0; i < a.indices.size(); ++i)
    s += a.values[i] * x[a.indices[i]];
  return s;
}

// x += alpha * a
inline void axpy(double alpha, const SparseVec& a, Vector& x) {
  detail::check_extent(a, x);
  for (std::size_t i = 0; i < a.indices.size(); ++i)
    x[a.indices[i]] += alpha * a.values[i];
}

inline double norm2(const Vector& x) { return x.norm(); }

inline bool all_finite(const Vector& x) {
  for (Eigen::Index i = 0; i < x.size(); ++i)
    if (!std::isfinite(x[i])) return false;
  return true;
}

}  // namespace psga
