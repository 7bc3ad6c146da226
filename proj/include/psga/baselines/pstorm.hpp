#pragma once

#include "psga/baselines/common.hpp"
#include "psga/baselines/spstorm.hpp"

#include <cmath>

namespace psga {

/// eta_k = (4^{1/3} / (8L)) / (k+4)^{1/3}
inline double pstorm_eta(std::uint64_t k, double lipschitz) {
  return (std::cbrt(4.0) / (8.0 * lipschitz)) / std::cbrt(static_cast<double>(k) + 4.0);
}

/// beta_k = (1 + 24 eta_k^2 L^2 - eta_{k+1}/eta_k) / (1 + 4 eta_k^2 L^2)
inline double pstorm_beta(std::uint64_t k, double lipschitz) {
  const double eta = pstorm_eta(k, lipschitz);
  const double eta_next = pstorm_eta(k + 1, lipschitz);
  const double e2l2 = eta * eta * lipschitz * lipschitz;
  return (1.0 + 24.0 * e2l2 - eta_next / eta) / (1.0 + 4.0 * e2l2);
}

struct PstormState {
  std::uint64_t k = 1;
  Vector x_prev;
  Vector x;
  Vector d;
  double eta = 0.0;
};

inline PstormState pstorm_init(const Vector& x0) {
  return {1, x0, x0, Vector::Zero(x0.size()), 0.0};
}

/// Proximal STORM with the diminishing schedule above and a full proximal
/// move x+ = y. The estimate at step k mixes with beta_{k-1}; d_1 = v_1.
template <Surrogate Reg>
PstormState pstorm_step(PstormState s, const SmoothLoss& loss, const Reg& reg,
                        std::size_t batch_size, const RngStream& rng) {
  const std::uint64_t k = s.k;
  const double lip = loss.lipschitz_bound();
  const Batch batch = detail::batch_at(rng, k, loss.n_samples(), batch_size);
  const Vector v = loss.batch_mean_grad(s.x, batch);
  Vector d = (k == 1) ? v
                      : storm_update(v, loss.batch_mean_grad(s.x_prev, batch), s.d,
                                     pstorm_beta(k - 1, lip));

  const double eta = pstorm_eta(k, lip);
  Vector x_next = s.x - eta * d;
  reg.prox_inplace(x_next, eta, s.x);
  detail::require_finite(x_next, k, "PStorm iterate");

  s.x_prev = std::move(s.x);
  s.x = std::move(x_next);
  s.d = std::move(d);
  s.eta = eta;
  s.k = k + 1;
  return s;
}

}  // namespace psga
