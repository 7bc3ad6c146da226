#pragma once

#include "psga/problems.hpp"
#include "psga/regularizers.hpp"

#include <optional>
#include <string>

namespace psga {

/// One logged row of a convergence trace.
struct TraceRecord {
  std::uint64_t iter = 0;
  double elapsed_s = 0.0;
  double f_val = 0.0;
  // Filled once the suite-wide f* is known.
  std::optional<double> rel_subopt;
  double grad_err = 0.0;
  double stationarity = 0.0;
  std::optional<double> eta;
  // Step-size rule name for PSGA, empty otherwise.
  std::string branch;
};

// F(x) = f(x) + r(x)
inline double objective(const SmoothLoss& loss, const L1Norm& reg, const Vector& x) {
  return loss.loss_value(x) + reg.value(x);
}

inline double rel_subopt(double f_val, double f_star) {
  if (!(f_star > 0.0)) throw std::invalid_argument("f_star must be > 0");
  return std::abs(f_val - f_star) / f_star;
}

// ||d - grad f(x)||
inline double grad_estimation_error(const Vector& d, const SmoothLoss& loss,
                                    const Vector& x) {
  return (d - loss.full_grad(x)).norm();
}

// dist(0, dF(x))
inline double stationarity(const SmoothLoss& loss, const L1Norm& reg, const Vector& x) {
  return reg.subdiff_dist(loss.full_grad(x), x);
}

}  // namespace psga
