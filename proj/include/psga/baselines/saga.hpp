#pragma once

#include "psga/baselines/common.hpp"

#include <vector>

namespace psga {

/// Bytes a dense N x n gradient table would take.
inline std::uint64_t saga_dense_table_bytes(const Dataset& data) {
  return static_cast<std::uint64_t>(data.n_samples()) *
         static_cast<std::uint64_t>(data.n_features()) * sizeof(double);
}

inline constexpr std::uint64_t kDefaultSagaBudget = std::uint64_t{8} << 30;

/// Per-sample gradients are multiples of their data rows, so the table keeps
/// one coefficient per sample; entry j is coefs[j] * d_j.
struct SagaState {
  std::vector<double> coefs;
  Vector table_mean;
  Vector x;
  std::uint64_t t = 0;
  std::uint64_t since_rebuild = 0;
  double alpha = 0.0;
  Vector v;
  Vector v_point;
};

inline Vector saga_table_mean(const SmoothLoss& loss, const std::vector<double>& coefs) {
  Vector mean = Vector::Zero(static_cast<Eigen::Index>(loss.dim()));
  for (std::size_t j = 0; j < coefs.size(); ++j) axpy(coefs[j], loss.data().row(j), mean);
  mean /= static_cast<double>(coefs.size());
  return mean;
}

/// Fills the table at x0. Throws MemoryBudgetExceeded when the dense N x n
/// table would exceed budget_bytes.
inline SagaState saga_init(const SmoothLoss& loss, const Vector& x0, double alpha,
                           std::uint64_t budget_bytes = kDefaultSagaBudget) {
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be > 0");
  const auto need = saga_dense_table_bytes(loss.data());
  if (need > budget_bytes) throw MemoryBudgetExceeded(need, budget_bytes);
  SagaState s;
  s.coefs.resize(loss.n_samples());
  for (std::size_t j = 0; j < s.coefs.size(); ++j) s.coefs[j] = loss.sample_coef(x0, j);
  s.table_mean = saga_table_mean(loss, s.coefs);
  s.x = x0;
  s.alpha = alpha;
  s.v = s.table_mean;
  s.v_point = x0;
  return s;
}

template <Surrogate Reg>
SagaState saga_step(SagaState s, const SmoothLoss& loss, const Reg& reg,
                    const RngStream& rng) {
  const std::size_t n = loss.n_samples();
  const auto i = detail::index_at(rng, s.t, n);
  const auto& row = loss.data().row(i);
  const double c_new = loss.sample_coef(s.x, i);
  const double delta = c_new - s.coefs[i];

  Vector v = s.table_mean;
  axpy(delta, row, v);

  s.coefs[i] = c_new;
  if (++s.since_rebuild >= n) {
    s.table_mean = saga_table_mean(loss, s.coefs);
    s.since_rebuild = 0;
  } else {
    axpy(delta / static_cast<double>(n), row, s.table_mean);
  }

  Vector x_next = s.x - s.alpha * v;
  reg.prox_inplace(x_next, s.alpha, s.x);
  detail::require_finite(x_next, s.t + 1, "SAGA iterate");

  s.v_point = std::move(s.x);
  s.x = std::move(x_next);
  s.v = std::move(v);
  ++s.t;
  return s;
}

}  // namespace psga
