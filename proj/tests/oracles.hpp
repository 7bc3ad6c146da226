#pragma once

// Independent reference computations used as test oracles. Nothing here
// calls into the optimizers it checks.

#include "psga/core/dataset.hpp"
#include "psga/core/rng.hpp"
#include "psga/synthetic.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <vector>

namespace oracle {

using psga::Vector;

inline Vector random_vector(psga::RngStream& rng, std::size_t dim, double scale = 1.0) {
  Vector v(static_cast<Eigen::Index>(dim));
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = scale * psga::synthetic::gaussian(rng);
  return v;
}

inline Eigen::MatrixXd dense_matrix(const psga::Dataset& d) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(d.n_samples()),
                                            static_cast<Eigen::Index>(d.n_features()));
  for (std::size_t j = 0; j < d.n_samples(); ++j) {
    const auto& r = d.row(j);
    for (std::size_t i = 0; i < r.nnz(); ++i)
      a(static_cast<Eigen::Index>(j), r.indices[i]) = r.values[i];
  }
  return a;
}

// Dense per-sample losses written from the textbook formulas.
inline double logistic_sample(const Eigen::MatrixXd& a, const std::vector<double>& y,
                              const Vector& x, std::size_t j) {
  const double t = a.row(static_cast<Eigen::Index>(j)).dot(x);
  return std::log(1.0 + std::exp(-y[j] * t));
}

inline double lsq_sample(const Eigen::MatrixXd& a, const std::vector<double>& y,
                         const Vector& x, std::size_t j) {
  const double r = y[j] - a.row(static_cast<Eigen::Index>(j)).dot(x);
  return 0.5 * r * r;
}

inline Vector central_difference(const std::function<double(const Vector&)>& f,
                                 const Vector& x, double h = 1e-6) {
  Vector g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    Vector xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    g[i] = (f(xp) - f(xm)) / (2.0 * h);
  }
  return g;
}

// argmin over a uniform grid on [lo, hi].
inline double grid_argmin(const std::function<double(double)>& f, double lo, double hi,
                          double step) {
  double best_u = lo, best = std::numeric_limits<double>::infinity();
  const auto n = static_cast<long>(std::llround((hi - lo) / step));
  for (long i = 0; i <= n; ++i) {
    const double u = lo + static_cast<double>(i) * step;
    const double v = f(u);
    if (v < best) {
      best = v;
      best_u = u;
    }
  }
  return best_u;
}

inline double grid_min(const std::function<double(double)>& f, double lo, double hi,
                       double step) {
  return f(grid_argmin(f, lo, hi, step));
}

}  // namespace oracle
