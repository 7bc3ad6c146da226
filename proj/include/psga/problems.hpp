#pragma once

#include "psga/core/dataset.hpp"
#include "psga/core/rng.hpp"

#include <cmath>
#include <memory>
#include <stdexcept>
#include <string_view>

namespace psga {

enum class LossKind { logistic, least_squares };

inline std::string_view to_string(LossKind k) {
  return k == LossKind::logistic ? "logistic" : "least_squares";
}

/// f(x) = (1/N) sum_j loss(d_j^T x; y_j).
///
/// Every per-sample gradient is a scalar multiple of its data row, so the
/// class works with that scalar (the margin derivative) and only expands to
/// vectors where a caller needs one.
///   logistic:      loss(t; y) = log(1 + exp(-y t)),  loss' = -y sigmoid(-y t)
///   least squares: loss(t; y) = (y - t)^2 / 2,       loss' = t - y
class SmoothLoss {
 public:
  SmoothLoss(LossKind kind, std::shared_ptr<const Dataset> data)
      : kind_(kind), data_(std::move(data)) {
    if (!data_) throw std::invalid_argument("null dataset");
    lipschitz_ = per_sample_bound();
    if (!(lipschitz_ > 0.0))
      throw std::invalid_argument("dataset has only zero rows; L would be 0");
  }

  LossKind kind() const noexcept { return kind_; }
  const Dataset& data() const noexcept { return *data_; }
  std::shared_ptr<const Dataset> data_ptr() const noexcept { return data_; }
  std::size_t dim() const noexcept { return data_->n_features(); }
  std::size_t n_samples() const noexcept { return data_->n_samples(); }

  // Max per-sample smoothness constant: max_j ||d_j||^2 / 4 (logistic),
  // max_j ||a_j||^2 (least squares), scaled by y^2 for logistic labels.
  double lipschitz_bound() const noexcept { return lipschitz_; }

  double sample_value(const Vector& x, std::size_t j) const {
    check_sample(j);
    const double t = dot(data_->row(j), x);
    const double y = data_->label(j);
    if (kind_ == LossKind::logistic) return log1p_exp(-y * t);
    const double r = y - t;
    return 0.5 * r * r;
  }

  // d loss / d margin at x for sample j.
  double sample_coef(const Vector& x, std::size_t j) const {
    check_sample(j);
    return margin_derivative(dot(data_->row(j), x), data_->label(j));
  }

  SparseVec sample_grad(const Vector& x, std::size_t j) const {
    const double c = sample_coef(x, j);
    SparseVec g = data_->row(j);
    for (auto& v : g.values) v *= c;
    return g;
  }

  Vector batch_mean_grad(const Vector& x, const Batch& batch) const {
    if (batch.empty()) throw std::invalid_argument("empty batch");
    check_dim(x);
    Vector g = Vector::Zero(x.size());
    for (auto j : batch.sample_ids) axpy(sample_coef(x, j), data_->row(j), g);
    g /= static_cast<double>(batch.size());
    return g;
  }

  Vector full_grad(const Vector& x) const {
    check_dim(x);
    Vector g = Vector::Zero(x.size());
    const std::size_t n = n_samples();
    for (std::size_t j = 0; j < n; ++j) axpy(sample_coef(x, j), data_->row(j), g);
    g /= static_cast<double>(n);
    return g;
  }

  double loss_value(const Vector& x) const {
    check_dim(x);
    double s = 0.0;
    const std::size_t n = n_samples();
    for (std::size_t j = 0; j < n; ++j) s += sample_value(x, j);
    return s / static_cast<double>(n);
  }

  double margin_derivative(double t, double y) const noexcept {
    if (kind_ == LossKind::logistic) return -y * sigmoid(-y * t);
    return t - y;
  }

  // log(1 + e^z) without overflow.
  static double log1p_exp(double z) noexcept {
    return std::max(0.0, z) + std::log1p(std::exp(-std::abs(z)));
  }

  static double sigmoid(double z) noexcept {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
  }

 private:
  double per_sample_bound() const {
    if (kind_ == LossKind::least_squares) return data_->max_row_sq_norm();
    double best = 0.0;
    for (std::size_t j = 0; j < n_samples(); ++j) {
      const double y = data_->label(j);
      best = std::max(best, y * y * data_->row(j).squared_norm() / 4.0);
    }
    return best;
  }

  void check_sample(std::size_t j) const {
    if (j >= n_samples()) throw std::invalid_argument("sample id out of range");
  }

  void check_dim(const Vector& x) const {
    if (static_cast<std::size_t>(x.size()) != dim())
      throw std::invalid_argument("iterate dimension does not match dataset");
  }

  LossKind kind_;
  std::shared_ptr<const Dataset> data_;
  double lipschitz_ = 0.0;
};

}  // namespace psga
