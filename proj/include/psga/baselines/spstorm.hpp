#pragma once

#include "psga/baselines/common.hpp"

namespace psga {

struct SPstormParams {
  std::size_t batch_size = 256;
  // Fixed step; 0 selects 0.1/L.
  double alpha = 0.0;
  double zeta = 1.0;

  double resolved_alpha(double lipschitz) const {
    return alpha > 0.0 ? alpha : 0.1 / lipschitz;
  }
};

struct SPstormState {
  std::uint64_t k = 1;
  Vector x_prev;
  Vector x;
  // Estimate formed at x_prev by the last step.
  Vector d;
  double alpha = 0.0;
  double zeta = 1.0;
};

inline SPstormState spstorm_init(const Vector& x0, double alpha, double zeta = 1.0) {
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be > 0");
  if (!(zeta > 0.0)) throw std::invalid_argument("zeta must be > 0");
  return {1, x0, x0, Vector::Zero(x0.size()), alpha, zeta};
}

inline double spstorm_beta(std::uint64_t k) { return 1.0 / static_cast<double>(k + 1); }

// d = v + (1 - beta) (d_prev - u)
inline Vector storm_update(const Vector& v, const Vector& u, const Vector& d_prev,
                           double beta) {
  return v + (1.0 - beta) * (d_prev - u);
}

/// Stabilized proximal STORM: fixed step alpha, relaxed move
/// x+ = x + zeta beta_k (y - x) with beta_k = 1/(k+1). The first step uses
/// d_1 = v_1.
template <Surrogate Reg>
SPstormState spstorm_step(SPstormState s, const SmoothLoss& loss, const Reg& reg,
                          std::size_t batch_size, const RngStream& rng) {
  const std::uint64_t k = s.k;
  const Batch batch = detail::batch_at(rng, k, loss.n_samples(), batch_size);
  const Vector v = loss.batch_mean_grad(s.x, batch);
  const double beta = spstorm_beta(k);
  Vector d = (k == 1) ? v : storm_update(v, loss.batch_mean_grad(s.x_prev, batch), s.d, beta);

  Vector y = s.x - s.alpha * d;
  reg.prox_inplace(y, s.alpha, s.x);
  Vector x_next = s.x + s.zeta * beta * (y - s.x);
  detail::require_finite(x_next, k, "S-PStorm iterate");

  s.x_prev = std::move(s.x);
  s.x = std::move(x_next);
  s.d = std::move(d);
  s.k = k + 1;
  return s;
}

}  // namespace psga
