#pragma once

#include "psga/baselines/pstorm.hpp"
#include "psga/baselines/proxsvrg.hpp"
#include "psga/baselines/rda.hpp"
#include "psga/baselines/saga.hpp"
#include "psga/baselines/spstorm.hpp"
#include "psga/bench/config.hpp"
#include "psga/psga.hpp"

#include <memory>

namespace psga::bench {

/// Uniform driver over the six optimizers. advance() performs one logical
/// iteration: one mini-batch step for PSGA, PStorm, S-PStorm and RDA, one
/// epoch (snapshot plus epoch_length inner steps) for ProxSVRG, and N inner
/// steps for SAGA.
class Method {
 public:
  virtual ~Method() = default;
  virtual void advance() = 0;
  virtual const Vector& iterate() const = 0;
  // Latest gradient estimate and the point it was formed at.
  virtual const Vector& estimate() const = 0;
  virtual const Vector& estimate_point() const = 0;
  virtual double step_size() const = 0;
  virtual std::string branch() const { return {}; }
};

namespace detail {

using Reg = TrivialSurrogate<L1Norm>;

class PsgaMethod final : public Method {
 public:
  PsgaMethod(const RunConfig& c, const SmoothLoss& loss, const L1Norm& reg, RngStream rng)
      : loss_(loss), reg_(reg), rng_(rng) {
    params_.batch_size = c.batch_size;
    params_.m = c.m;
    params_.eta0 = c.eta0;
    params_.clamp_to_theory = c.clamp_to_theory;
    params_.eps_curvature = c.eps_curvature;
    params_.validate(loss.lipschitz_bound());
    state_ = psga_init(Vector::Zero(loss.dim()), params_.resolved_eta0(loss.lipschitz_bound()));
  }
  void advance() override { state_ = psga_step(std::move(state_), loss_, reg_, params_, rng_); }
  const Vector& iterate() const override { return state_.x; }
  const Vector& estimate() const override { return state_.d; }
  const Vector& estimate_point() const override { return state_.x_prev; }
  double step_size() const override { return state_.eta; }
  std::string branch() const override { return std::string(to_string(state_.last_branch)); }

 private:
  const SmoothLoss& loss_;
  Reg reg_;
  RngStream rng_;
  PsgaParams params_;
  PsgaState state_;
};

class SPstormMethod final : public Method {
 public:
  SPstormMethod(const RunConfig& c, const SmoothLoss& loss, const L1Norm& reg, RngStream rng)
      : loss_(loss), reg_(reg), rng_(rng), batch_(c.batch_size) {
    SPstormParams p{c.batch_size, c.alpha, c.zeta};
    state_ = spstorm_init(Vector::Zero(loss.dim()), p.resolved_alpha(loss.lipschitz_bound()),
                          c.zeta);
  }
  void advance() override { state_ = spstorm_step(std::move(state_), loss_, reg_, batch_, rng_); }
  const Vector& iterate() const override { return state_.x; }
  const Vector& estimate() const override { return state_.d; }
  const Vector& estimate_point() const override { return state_.x_prev; }
  double step_size() const override { return state_.alpha; }

 private:
  const SmoothLoss& loss_;
  Reg reg_;
  RngStream rng_;
  std::size_t batch_;
  SPstormState state_;
};

class PstormMethod final : public Method {
 public:
  PstormMethod(const RunConfig& c, const SmoothLoss& loss, const L1Norm& reg, RngStream rng)
      : loss_(loss), reg_(reg), rng_(rng), batch_(c.batch_size),
        state_(pstorm_init(Vector::Zero(loss.dim()))) {}
  void advance() override { state_ = pstorm_step(std::move(state_), loss_, reg_, batch_, rng_); }
  const Vector& iterate() const override { return state_.x; }
  const Vector& estimate() const override { return state_.d; }
  const Vector& estimate_point() const override { return state_.x_prev; }
  double step_size() const override { return state_.eta; }

 private:
  const SmoothLoss& loss_;
  Reg reg_;
  RngStream rng_;
  std::size_t batch_;
  PstormState state_;
};

class ProxSvrgMethod final : public Method {
 public:
  ProxSvrgMethod(const RunConfig& c, const SmoothLoss& loss, const L1Norm& reg, RngStream rng)
      : loss_(loss), reg_(reg), rng_(rng) {
    const double alpha = c.alpha > 0.0 ? c.alpha : 0.1 / loss.lipschitz_bound();
    const auto epoch = c.epoch_length > 0 ? c.epoch_length : 2 * loss.n_samples();
    state_ = proxsvrg_init(Vector::Zero(loss.dim()), alpha, epoch);
  }
  void advance() override {
    do {
      state_ = proxsvrg_step(std::move(state_), loss_, reg_, rng_);
    } while (state_.inner != 0);
  }
  const Vector& iterate() const override { return state_.x; }
  const Vector& estimate() const override { return state_.v; }
  const Vector& estimate_point() const override { return state_.v_point; }
  double step_size() const override { return state_.alpha; }

 private:
  const SmoothLoss& loss_;
  Reg reg_;
  RngStream rng_;
  ProxSvrgState state_;
};

class SagaMethod final : public Method {
 public:
  SagaMethod(const RunConfig& c, const SmoothLoss& loss, const L1Norm& reg, RngStream rng)
      : loss_(loss), reg_(reg), rng_(rng) {
    const double alpha = c.alpha > 0.0 ? c.alpha : 0.1 / loss.lipschitz_bound();
    state_ = saga_init(loss, Vector::Zero(loss.dim()), alpha, c.memory_budget_mb << 20);
  }
  void advance() override {
    for (std::size_t i = 0; i < loss_.n_samples(); ++i)
      state_ = saga_step(std::move(state_), loss_, reg_, rng_);
  }
  const Vector& iterate() const override { return state_.x; }
  const Vector& estimate() const override { return state_.v; }
  const Vector& estimate_point() const override { return state_.v_point; }
  double step_size() const override { return state_.alpha; }

 private:
  const SmoothLoss& loss_;
  Reg reg_;
  RngStream rng_;
  SagaState state_;
};

class RdaMethod final : public Method {
 public:
  RdaMethod(const RunConfig& c, const SmoothLoss& loss, const L1Norm& reg, RngStream rng)
      : loss_(loss), reg_(reg), rng_(rng), batch_(c.batch_size),
        state_(rda_init(Vector::Zero(loss.dim()), c.gamma)) {}
  void advance() override { state_ = rda_step(std::move(state_), loss_, reg_, batch_, rng_); }
  const Vector& iterate() const override { return state_.x; }
  const Vector& estimate() const override { return state_.g; }
  const Vector& estimate_point() const override { return state_.g_point; }
  double step_size() const override {
    return std::sqrt(static_cast<double>(state_.k - 1)) / state_.gamma;
  }

 private:
  const SmoothLoss& loss_;
  L1Norm reg_;
  RngStream rng_;
  std::size_t batch_;
  RdaState state_;
};

}  // namespace detail

/// Throws MemoryBudgetExceeded for SAGA above its budget.
inline std::unique_ptr<Method> make_method(const RunConfig& c, const SmoothLoss& loss,
                                           const L1Norm& reg) {
  RngStream rng(c.seed);
  switch (c.algorithm) {
    case Algorithm::psga: return std::make_unique<detail::PsgaMethod>(c, loss, reg, rng);
    case Algorithm::pstorm: return std::make_unique<detail::PstormMethod>(c, loss, reg, rng);
    case Algorithm::spstorm: return std::make_unique<detail::SPstormMethod>(c, loss, reg, rng);
    case Algorithm::proxsvrg: return std::make_unique<detail::ProxSvrgMethod>(c, loss, reg, rng);
    case Algorithm::saga: return std::make_unique<detail::SagaMethod>(c, loss, reg, rng);
    case Algorithm::rda: return std::make_unique<detail::RdaMethod>(c, loss, reg, rng);
  }
  throw std::logic_error("unhandled algorithm");
}

}  // namespace psga::bench
