#pragma once

#include "psga/baselines/proxsvrg.hpp"
#include "psga/baselines/saga.hpp"
#include "psga/psga.hpp"
#include "psga/synthetic.hpp"

#include <functional>
#include <string>
#include <vector>

namespace psga::bench {

struct SelftestResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

namespace detail {

inline Vector random_vector(RngStream& rng, std::size_t dim, double scale = 1.0) {
  Vector v(static_cast<Eigen::Index>(dim));
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = scale * synthetic::gaussian(rng);
  return v;
}

inline SelftestResult check_gradients() {
  RngStream rng(11);
  double worst = 0.0;
  for (auto kind : {LossKind::logistic, LossKind::least_squares}) {
    auto data = std::make_shared<const Dataset>(synthetic::logistic(7, 5, 0.8, 3));
    SmoothLoss loss(kind, data);
    for (int probe = 0; probe < 10; ++probe) {
      Vector x = random_vector(rng, 5);
      Vector g = loss.full_grad(x);
      for (Eigen::Index i = 0; i < x.size(); ++i) {
        const double h = 1e-6;
        Vector xp = x, xm = x;
        xp[i] += h;
        xm[i] -= h;
        const double fd = (loss.loss_value(xp) - loss.loss_value(xm)) / (2 * h);
        worst = std::max(worst, std::abs(fd - g[i]) / std::max(1.0, std::abs(g[i])));
      }
    }
  }
  return {"gradient vs central difference", worst <= 1e-5, "max rel err " + std::to_string(worst)};
}

inline SelftestResult check_prox() {
  RngStream rng(12);
  bool ok = true;
  for (int c = 0; c < 50 && ok; ++c) {
    L1Norm reg(rng.uniform());
    Vector v = random_vector(rng, 4);
    const double t = 0.1 + rng.uniform();
    Vector u = reg.prox(v, t);
    auto obj = [&](const Vector& w) { return t * reg.value(w) + 0.5 * (w - v).squaredNorm(); };
    for (int p = 0; p < 100; ++p)
      if (obj(u + random_vector(rng, 4, 1e-3)) < obj(u) - 1e-12) ok = false;
  }
  return {"prox optimality under perturbation", ok, ""};
}

inline SelftestResult check_step_floor() {
  auto data = std::make_shared<const Dataset>(synthetic::logistic(300, 10, 0.5, 5));
  SmoothLoss loss(LossKind::logistic, data);
  TrivialSurrogate reg{L1Norm(1e-4)};
  PsgaParams params;
  params.batch_size = 32;
  const double L = loss.lipschitz_bound();
  double min_eta = 1e300, min_tau = 1e300;
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    RngStream rng(seed);
    auto s = psga_init(Vector::Zero(loss.dim()), 1.0 / L);
    for (int k = 0; k < 200; ++k) {
      s = psga_step(std::move(s), loss, reg, params, rng);
      min_eta = std::min(min_eta, s.eta);
      if (s.last_tau) min_tau = std::min(min_tau, *s.last_tau);
    }
  }
  const bool ok = min_eta >= 0.5 / L - 1e-12 && min_tau >= 1.0 / L - 1e-9;
  return {"step size floor 1/(2L) and tau >= 1/L", ok,
          "min eta*L " + std::to_string(min_eta * L) + ", min tau*L " + std::to_string(min_tau * L)};
}

inline SelftestResult check_unbiased() {
  auto data = std::make_shared<const Dataset>(synthetic::logistic(6, 4, 0.9, 7));
  SmoothLoss loss(LossKind::logistic, data);
  RngStream rng(13);
  const Vector x = random_vector(rng, 4);
  const Vector x_tilde = random_vector(rng, 4);
  const Vector v_tilde = loss.full_grad(x_tilde);
  Vector mean = Vector::Zero(4);
  for (std::size_t i = 0; i < loss.n_samples(); ++i)
    mean += svrg_direction(loss, x, x_tilde, v_tilde, i);
  mean /= static_cast<double>(loss.n_samples());
  const double err = (mean - loss.full_grad(x)).norm();
  return {"variance-reduced gradients unbiased", err <= 1e-12, "err " + std::to_string(err)};
}

inline SelftestResult check_determinism() {
  RngStream a(99), b(99);
  const auto ba = sample_batch(a, 100, 50);
  const auto bb = sample_batch(b, 100, 50);
  return {"seeded sampling reproducible", ba.sample_ids == bb.sample_ids, ""};
}

}  // namespace detail

inline std::vector<SelftestResult> run_selftest() {
  return {detail::check_gradients(), detail::check_prox(), detail::check_step_floor(),
          detail::check_unbiased(), detail::check_determinism()};
}

}  // namespace psga::bench
