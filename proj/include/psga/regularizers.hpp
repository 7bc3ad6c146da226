#pragma once

#include "psga/core/sparse.hpp"

#include <cmath>
#include <concepts>
#include <stdexcept>

namespace psga {

/// r(x) = lambda * ||x||_1.
class L1Norm {
 public:
  explicit L1Norm(double lambda = 1e-5) : lambda_(lambda) {
    if (!(lambda >= 0.0)) throw std::invalid_argument("lambda must be >= 0");
  }

  double lambda() const noexcept { return lambda_; }

  double value(const Vector& x) const { return lambda_ * x.lpNorm<1>(); }

  static double soft_threshold(double v, double threshold) noexcept {
    const double mag = std::abs(v) - threshold;
    if (mag <= 0.0) return 0.0;
    return v > 0.0 ? mag : -mag;
  }

  // argmin_u  t*lambda*||u||_1 + ||u - v||^2 / 2
  Vector prox(const Vector& v, double t) const {
    Vector u = v;
    prox_inplace(u, t);
    return u;
  }

  void prox_inplace(Vector& v, double t) const {
    if (!(t > 0.0)) throw std::invalid_argument("prox step must be > 0");
    const double thr = t * lambda_;
    if (thr == 0.0) return;
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = soft_threshold(v[i], thr);
  }

  // dist(0, g + lambda * d||.||_1(x)) with g the smooth gradient at x.
  double subdiff_dist(const Vector& g, const Vector& x) const {
    if (g.size() != x.size()) throw std::invalid_argument("dimension mismatch");
    double s = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      double r;
      if (x[i] != 0.0)
        r = g[i] + (x[i] > 0.0 ? lambda_ : -lambda_);
      else
        r = std::max(std::abs(g[i]) - lambda_, 0.0);
      s += r * r;
    }
    return std::sqrt(s);
  }

 private:
  double lambda_;
};

/// A surrogate D(., anchor) for the regularizer: D(y, y) = r(y) and
/// D(x, y) >= r(x). The proximal step is taken on D(., anchor).
template <typename S>
concept Surrogate = requires(const S& s, const Vector& x, const Vector& y,
                             Vector& v, double t) {
  { s.value(x, y) } -> std::convertible_to<double>;
  { s.regularizer_value(x) } -> std::convertible_to<double>;
  { s.prox_inplace(v, t, y) };
};

/// D(x, y) = r(x).
template <typename Reg = L1Norm>
class TrivialSurrogate {
 public:
  explicit TrivialSurrogate(Reg reg) : reg_(std::move(reg)) {}

  const Reg& base() const noexcept { return reg_; }

  double value(const Vector& x, const Vector& /*anchor*/) const { return reg_.value(x); }
  double regularizer_value(const Vector& x) const { return reg_.value(x); }

  void prox_inplace(Vector& v, double t, const Vector& /*anchor*/) const {
    reg_.prox_inplace(v, t);
  }

 private:
  Reg reg_;
};

template <typename Reg>
TrivialSurrogate(Reg) -> TrivialSurrogate<Reg>;

static_assert(Surrogate<TrivialSurrogate<L1Norm>>);

}  // namespace psga
