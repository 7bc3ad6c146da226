#pragma once

#include "psga/baselines/common.hpp"

namespace psga {

struct ProxSvrgState {
  Vector x_tilde;
  Vector v_tilde;
  Vector x;
  // Inner steps taken in the current epoch; 0 means a snapshot is due.
  std::uint64_t inner = 0;
  // Inner steps taken overall; indexes the sampling stream.
  std::uint64_t t = 0;
  std::uint64_t epoch_length = 0;
  double alpha = 0.0;
  // Last variance-reduced gradient and the point it was formed at.
  Vector v;
  Vector v_point;
};

inline ProxSvrgState proxsvrg_init(const Vector& x0, double alpha,
                                   std::uint64_t epoch_length) {
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be > 0");
  if (epoch_length == 0) throw std::invalid_argument("epoch_length must be >= 1");
  ProxSvrgState s;
  s.x_tilde = x0;
  s.v_tilde = Vector::Zero(x0.size());
  s.x = x0;
  s.epoch_length = epoch_length;
  s.alpha = alpha;
  s.v = Vector::Zero(x0.size());
  s.v_point = x0;
  return s;
}

// v = grad_i(x) - grad_i(x_tilde) + v_tilde, uniform sampling.
inline Vector svrg_direction(const SmoothLoss& loss, const Vector& x,
                             const Vector& x_tilde, const Vector& v_tilde,
                             std::size_t i) {
  Vector v = v_tilde;
  axpy(loss.sample_coef(x, i) - loss.sample_coef(x_tilde, i), loss.data().row(i), v);
  return v;
}

/// One inner step. At an epoch boundary the snapshot is moved to x and its
/// full gradient recomputed first.
template <Surrogate Reg>
ProxSvrgState proxsvrg_step(ProxSvrgState s, const SmoothLoss& loss, const Reg& reg,
                            const RngStream& rng) {
  if (s.inner == 0) {
    s.x_tilde = s.x;
    s.v_tilde = loss.full_grad(s.x_tilde);
  }
  const auto i = detail::index_at(rng, s.t, loss.n_samples());
  Vector v = svrg_direction(loss, s.x, s.x_tilde, s.v_tilde, i);

  Vector x_next = s.x - s.alpha * v;
  reg.prox_inplace(x_next, s.alpha, s.x);
  detail::require_finite(x_next, s.t + 1, "ProxSVRG iterate");

  s.v_point = std::move(s.x);
  s.x = std::move(x_next);
  s.v = std::move(v);
  ++s.t;
  s.inner = (s.inner + 1) % s.epoch_length;
  return s;
}

}  // namespace psga
