#pragma once

#include "psga/core/dataset.hpp"
#include "psga/core/rng.hpp"

#include <cmath>
#include <numbers>

namespace psga::synthetic {

// Box-Muller on RngStream draws; std::normal_distribution is not
// reproducible across standard libraries.
inline double gaussian(RngStream& rng) {
  double u1 = rng.uniform();
  while (u1 <= 0.0) u1 = rng.uniform();
  const double u2 = rng.uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

// Each feature is present with probability `density`; every row keeps at
// least one entry.
inline SparseVec random_sparse_row(RngStream& rng, std::size_t dim, double density) {
  SparseVec row;
  for (std::size_t i = 0; i < dim; ++i) {
    if (rng.uniform() < density) {
      row.indices.push_back(static_cast<std::uint32_t>(i));
      row.values.push_back(gaussian(rng));
    }
  }
  if (row.empty()) {
    row.indices.push_back(static_cast<std::uint32_t>(rng.below(dim)));
    row.values.push_back(gaussian(rng) + 1.0);
  }
  return row;
}

/// Binary classification rows labeled by a random hyperplane with 10% label
/// noise.
inline Dataset logistic(std::size_t n, std::size_t dim, double density,
                        std::uint64_t seed) {
  RngStream rng(seed);
  Vector w(static_cast<Eigen::Index>(dim));
  for (Eigen::Index i = 0; i < w.size(); ++i) w[i] = gaussian(rng);
  std::vector<SparseVec> rows;
  std::vector<double> labels;
  rows.reserve(n);
  labels.reserve(n);
  for (std::size_t j = 0; j < n; ++j) {
    rows.push_back(random_sparse_row(rng, dim, density));
    double y = dot(rows.back(), w) >= 0.0 ? 1.0 : -1.0;
    if (rng.uniform() < 0.1) y = -y;
    labels.push_back(y);
  }
  return Dataset(std::move(rows), std::move(labels), dim);
}

struct LassoInstance {
  Dataset data;
  Vector x_star;
};

/// Dense Gaussian design, `support` nonzero generating coefficients, labels
/// y = A x_star + noise * N(0, 1).
inline LassoInstance lasso(std::size_t n, std::size_t dim, std::size_t support,
                           double noise, std::uint64_t seed) {
  RngStream rng(seed);
  Vector x_star = Vector::Zero(static_cast<Eigen::Index>(dim));
  for (std::size_t s = 0; s < std::min(support, dim); ++s) {
    std::size_t i;
    do {
      i = rng.below(dim);
    } while (x_star[static_cast<Eigen::Index>(i)] != 0.0);
    x_star[static_cast<Eigen::Index>(i)] = (rng.uniform() < 0.5 ? -1.0 : 1.0) * (1.0 + rng.uniform());
  }
  std::vector<SparseVec> rows;
  std::vector<double> labels;
  for (std::size_t j = 0; j < n; ++j) {
    SparseVec row;
    for (std::size_t i = 0; i < dim; ++i) {
      row.indices.push_back(static_cast<std::uint32_t>(i));
      row.values.push_back(gaussian(rng) / std::sqrt(static_cast<double>(dim)));
    }
    labels.push_back(dot(row, x_star) + noise * gaussian(rng));
    rows.push_back(std::move(row));
  }
  return {Dataset(std::move(rows), std::move(labels), dim), x_star};
}

}  // namespace psga::synthetic
