#pragma once

#include "psga/core/rng.hpp"
#include "psga/errors.hpp"
#include "psga/problems.hpp"
#include "psga/regularizers.hpp"

#include <cmath>
#include <optional>
#include <string_view>

namespace psga {

/// Which rule of the adaptive step size fired.
///   expand: tau >= eta_prev            eta = (1 + 1/tau) eta_prev
///   adopt:  eta_prev/2 < tau < eta_prev eta = tau
///   shrink: tau <= eta_prev/2          eta = eta_prev / sqrt(2)
///   hold:   curvature pair degenerate  eta = eta_prev
enum class StepBranch { expand, adopt, shrink, hold };

inline std::string_view to_string(StepBranch b) {
  switch (b) {
    case StepBranch::expand: return "expand";
    case StepBranch::adopt: return "adopt";
    case StepBranch::shrink: return "shrink";
    case StepBranch::hold: return "hold";
  }
  return "?";
}

struct PsgaParams {
  std::size_t batch_size = 256;
  // Full-gradient refresh happens with probability 1/m.
  std::size_t m = 10;
  // Initial step; 0 selects 1/L.
  double eta0 = 0.0;
  // Cap eta_k at (k+1) / (4 (sqrt(m)+1) k L).
  bool clamp_to_theory = false;
  double eps_curvature = 1e-12;

  double resolved_eta0(double lipschitz) const {
    return eta0 > 0.0 ? eta0 : 1.0 / lipschitz;
  }

  void validate(double lipschitz) const {
    if (batch_size < 1) throw std::invalid_argument("batch_size must be >= 1");
    if (m < 2) throw std::invalid_argument("m must be >= 2");
    if (resolved_eta0(lipschitz) * lipschitz < 1.0 - 1e-12)
      throw std::invalid_argument("eta0 must be >= 1/L");
    if (!(eps_curvature >= 0.0)) throw std::invalid_argument("eps_curvature < 0");
  }
};

struct PsgaState {
  std::uint64_t k = 1;
  Vector x_prev;
  Vector x;
  // Gradient estimate formed at the previous call, i.e. at x_prev.
  Vector d;
  double eta = 0.0;
  StepBranch last_branch = StepBranch::hold;
  std::optional<double> last_tau;
  bool refreshed = false;
};

inline PsgaState psga_init(const Vector& x0, double eta0) {
  PsgaState s;
  s.x_prev = x0;
  s.x = x0;
  s.d = Vector::Zero(x0.size());
  s.eta = eta0;
  return s;
}

/// Short BB step on a mini-batch secant pair:
/// <mu - nu, x - x_prev> / ||mu - nu||^2, or nullopt when ||mu - nu||^2 <= eps.
inline std::optional<double> compute_tau(const Vector& mu, const Vector& nu,
                                         const Vector& x, const Vector& x_prev,
                                         double eps) {
  if (mu.size() != nu.size() || x.size() != x_prev.size() || mu.size() != x.size())
    throw std::invalid_argument("dimension mismatch");
  const Vector dg = mu - nu;
  const double denom = dg.squaredNorm();
  if (!(denom > eps)) return std::nullopt;
  return dg.dot(x - x_prev) / denom;
}

struct StepSizeUpdate {
  double eta;
  StepBranch branch;
};

inline StepSizeUpdate update_step_size(double eta_prev, std::optional<double> tau) {
  if (!(eta_prev > 0.0)) throw std::invalid_argument("eta_prev must be > 0");
  if (!tau) return {eta_prev, StepBranch::hold};
  const double t = *tau;
  if (t >= eta_prev) return {(1.0 + 1.0 / t) * eta_prev, StepBranch::expand};
  if (t > eta_prev / 2.0) return {t, StepBranch::adopt};
  return {eta_prev / std::sqrt(2.0), StepBranch::shrink};
}

struct GradientEstimate {
  Vector d;
  bool refreshed = false;
};

/// Momentum estimator with probabilistic full refresh. mu and nu are batch
/// means at state.x and state.x_prev over the same batch; state.d holds the
/// previous estimate.
inline GradientEstimate estimate_gradient(const PsgaState& state, const Vector& mu,
                                          const Vector& nu, const SmoothLoss& loss,
                                          const RngStream& rng, std::size_t m) {
  if (state.k == 1) return {mu, false};
  RngStream coin = rng.child(stream::kRefresh).child(state.k);
  if (coin.bernoulli(1.0 / static_cast<double>(m)))
    return {loss.full_grad(state.x), true};
  const double theta = 1.0 / static_cast<double>(state.k + 1);
  return {mu + (1.0 - theta) * (state.d - nu), false};
}

/// One PSGA iteration. The batch for iteration k comes from
/// rng.child(stream::kBatch).child(k) and the refresh coin from
/// rng.child(stream::kRefresh).child(k); rng itself is never advanced.
template <Surrogate Reg>
PsgaState psga_step(PsgaState state, const SmoothLoss& loss, const Reg& reg,
                    const PsgaParams& params, const RngStream& rng) {
  const std::uint64_t k = state.k;
  RngStream batch_rng = rng.child(stream::kBatch).child(k);
  const Batch batch = sample_batch(batch_rng, loss.n_samples(), params.batch_size);

  const Vector mu = loss.batch_mean_grad(state.x, batch);
  const Vector nu = loss.batch_mean_grad(state.x_prev, batch);

  GradientEstimate est = estimate_gradient(state, mu, nu, loss, rng, params.m);

  const auto tau = compute_tau(mu, nu, state.x, state.x_prev, params.eps_curvature);
  auto [eta, branch] = update_step_size(state.eta, tau);
  if (params.clamp_to_theory) {
    const double kk = static_cast<double>(k);
    const double cap = (kk + 1.0) / (4.0 * (std::sqrt(static_cast<double>(params.m)) + 1.0) *
                                     kk * loss.lipschitz_bound());
    eta = std::min(eta, cap);
  }

  Vector y = state.x - eta * est.d;
  reg.prox_inplace(y, eta, state.x);

  // x_{k+1} = x_k + delta_k theta_k (y_k - x_k), delta_k theta_k = k/(k+1)
  const double weight = static_cast<double>(k) / static_cast<double>(k + 1);
  Vector x_next = state.x + weight * (y - state.x);

  if (!std::isfinite(eta) || !all_finite(x_next) || !all_finite(est.d))
    throw NumericFailure(k, "PSGA iterate");

  state.x_prev = std::move(state.x);
  state.x = std::move(x_next);
  state.d = std::move(est.d);
  state.eta = eta;
  state.last_branch = branch;
  state.last_tau = tau;
  state.refreshed = est.refreshed;
  state.k = k + 1;
  return state;
}

struct BbSteps {
  std::optional<double> bb1;
  std::optional<double> bb2;
};

/// Classical Barzilai-Borwein steps for secant pair (s, y):
/// bb1 = ||s||^2 / s^T y, bb2 = s^T y / ||y||^2.
inline BbSteps bb_reference_steps(const Vector& s, const Vector& y) {
  if (s.size() != y.size()) throw std::invalid_argument("dimension mismatch");
  const double sy = s.dot(y);
  const double yy = y.squaredNorm();
  BbSteps out;
  if (sy != 0.0) out.bb1 = s.squaredNorm() / sy;
  if (yy > 0.0) out.bb2 = sy / yy;
  return out;
}

}  // namespace psga
