#pragma once

#include "psga/baselines/common.hpp"

#include <cmath>

namespace psga {

struct RdaState {
  std::uint64_t k = 1;
  Vector g_bar;
  Vector x;
  double gamma = 1e-2;
  Vector g;
  Vector g_point;
};

inline RdaState rda_init(const Vector& x0, double gamma = 1e-2) {
  if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be > 0");
  return {1, Vector::Zero(x0.size()), x0, gamma, Vector::Zero(x0.size()), x0};
}

/// argmin_x <g_bar, x> + lambda ||x||_1 + (gamma / sqrt(k)) ||x||^2 / 2,
/// componentwise -(sqrt(k)/gamma) * soft_threshold(g_bar_i, lambda).
inline Vector rda_primal(const Vector& g_bar, std::uint64_t k, double gamma,
                         const L1Norm& reg) {
  const double scale = std::sqrt(static_cast<double>(k)) / gamma;
  Vector x(g_bar.size());
  for (Eigen::Index i = 0; i < g_bar.size(); ++i)
    x[i] = -scale * L1Norm::soft_threshold(g_bar[i], reg.lambda());
  return x;
}

/// l1 regularized dual averaging with step sqrt(k)/gamma.
inline RdaState rda_step(RdaState s, const SmoothLoss& loss, const L1Norm& reg,
                         std::size_t batch_size, const RngStream& rng) {
  const std::uint64_t k = s.k;
  const Batch batch = detail::batch_at(rng, k, loss.n_samples(), batch_size);
  Vector g = loss.batch_mean_grad(s.x, batch);
  const double kk = static_cast<double>(k);
  s.g_bar = ((kk - 1.0) / kk) * s.g_bar + g / kk;

  Vector x_next = rda_primal(s.g_bar, k, s.gamma, reg);
  detail::require_finite(x_next, k, "RDA iterate");

  s.g_point = std::move(s.x);
  s.x = std::move(x_next);
  s.g = std::move(g);
  s.k = k + 1;
  return s;
}

}  // namespace psga
