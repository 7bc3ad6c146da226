#include "oracles.hpp"
#include "scalar_oracles.hpp"

#include "psga/baselines/pstorm.hpp"
#include "psga/baselines/proxsvrg.hpp"
#include "psga/baselines/rda.hpp"
#include "psga/baselines/saga.hpp"
#include "psga/baselines/spstorm.hpp"
#include "psga/bench/methods.hpp"
#include "psga/metrics.hpp"

#include <gtest/gtest.h>

using namespace psga;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

std::shared_ptr<const Dataset> scalar_data(const scalar::Problem& p) {
  std::vector<SparseVec> rows;
  for (double a : p.a) rows.push_back(SparseVec{{0}, {a}});
  return std::make_shared<const Dataset>(Dataset(rows, p.y, 1));
}

std::shared_ptr<const Dataset> small_data(std::size_t n, std::size_t dim, std::uint64_t seed) {
  return std::make_shared<const Dataset>(synthetic::logistic(n, dim, 0.8, seed));
}

void expect_trajectory(const std::vector<double>& got, const std::vector<double>& want) {
  ASSERT_EQ(got.size(), want.size());
  for (std::size_t k = 0; k < got.size(); ++k)
    EXPECT_LE(std::abs(got[k] - want[k]), 1e-12 * std::max(1.0, std::abs(want[k])))
        << "step " << k + 1 << ": " << got[k] << " vs " << want[k];
}

const scalar::Problem kScalar[] = {
    {{1.0, -2.0, 0.5}, {1.0, -1.0, 1.0}, false, 0.05},
    {{1.0, -2.0, 0.5}, {1.0, -1.0, 1.0}, true, 0.01},
};

LossKind kind_of(const scalar::Problem& p) {
  return p.logistic ? LossKind::logistic : LossKind::least_squares;
}

const TrivialSurrogate<L1Norm> kNoReg{L1Norm(0.0)};

}  // namespace

// ---------------------------------------------------------------- S-PStorm

TEST(SPstorm, MomentumUpdateExample) {
  const Vector d = storm_update(vec({0.5, 0}), vec({0.8, 0}), vec({1, 0}), 1.0 / 3.0);
  EXPECT_NEAR(d[0], 0.5 + (2.0 / 3.0) * 0.2, 1e-15);
  EXPECT_EQ(d[1], 0.0);
}

TEST(SPstorm, FullRelaxationLandsOnTrialPoint) {
  SmoothLoss loss(LossKind::logistic, small_data(30, 4, 1));
  TrivialSurrogate reg{L1Norm(0.01)};
  // zeta * beta_1 = 2 * 1/2 = 1
  auto s = spstorm_init(vec({0.1, -0.2, 0.3, 0.0}), 0.5, 2.0);
  const Vector x = s.x;
  s = spstorm_step(std::move(s), loss, reg, 8, RngStream(2));
  Vector y = x - 0.5 * s.d;
  reg.prox_inplace(y, 0.5, x);
  EXPECT_LE((s.x - y).norm(), 1e-15);
}

TEST(SPstorm, ScalarTrajectoryMatchesTranscription) {
  for (const auto& p : kScalar) {
    SmoothLoss loss(kind_of(p), scalar_data(p));
    TrivialSurrogate reg{L1Norm(p.lambda)};
    const double alpha = 0.1 / p.lipschitz();
    for (double zeta : {1.0, 3.0}) {
      auto s = spstorm_init(vec({0.7}), alpha, zeta);
      std::vector<double> got;
      for (int k = 0; k < 50; ++k) {
        s = spstorm_step(std::move(s), loss, reg, 2, RngStream(9));
        got.push_back(s.x[0]);
      }
      expect_trajectory(got, scalar::spstorm(p, 0.7, alpha, zeta, 2, 9, 50));
    }
  }
}

TEST(SPstorm, InvalidParameters) {
  EXPECT_THROW(spstorm_init(vec({0}), 0.0), std::invalid_argument);
  EXPECT_THROW(spstorm_init(vec({0}), 0.1, 0.0), std::invalid_argument);
}

// ---------------------------------------------------------------- PStorm

TEST(PStorm, FirstStepSizeAtUnitL) {
  // (4^{1/3}/8) / 5^{1/3} = (4/5)^{1/3} / 8, evaluated through a different
  // route than the library's cbrt-based formula.
  const double expected = std::pow(0.8, 1.0 / 3.0) / 8.0;
  EXPECT_NEAR(pstorm_eta(1, 1.0), expected, 1e-15);
  EXPECT_NEAR(pstorm_eta(1, 1.0), 0.11604, 5e-6);
}

TEST(PStorm, StepSizesStrictlyDecrease) {
  for (std::uint64_t k = 1; k < 100000; ++k) ASSERT_LT(pstorm_eta(k + 1, 2.0), pstorm_eta(k, 2.0));
}

TEST(PStorm, MomentumWeightsInUnitInterval) {
  for (double L : {0.1, 1.0, 10.0}) {
    for (std::uint64_t k = 1; k <= 1000000; ++k) {
      const double b = pstorm_beta(k, L);
      ASSERT_GT(b, 0.0) << "k=" << k << " L=" << L;
      ASSERT_LT(b, 1.0) << "k=" << k << " L=" << L;
    }
  }
}

TEST(PStorm, ScalarTrajectoryMatchesTranscription) {
  for (const auto& p : kScalar) {
    SmoothLoss loss(kind_of(p), scalar_data(p));
    TrivialSurrogate reg{L1Norm(p.lambda)};
    auto s = pstorm_init(vec({0.7}));
    std::vector<double> got;
    for (int k = 0; k < 50; ++k) {
      s = pstorm_step(std::move(s), loss, reg, 2, RngStream(10));
      got.push_back(s.x[0]);
    }
    expect_trajectory(got, scalar::pstorm(p, 0.7, 2, 10, 50));
  }
}

// ---------------------------------------------------------------- ProxSVRG

TEST(ProxSvrg, AtSnapshotDirectionIsSnapshotGradient) {
  SmoothLoss loss(LossKind::logistic, small_data(12, 5, 3));
  RngStream rng(4);
  const Vector x = oracle::random_vector(rng, 5);
  const Vector v_tilde = loss.full_grad(x);
  for (std::size_t i = 0; i < 12; ++i)
    EXPECT_EQ(svrg_direction(loss, x, x, v_tilde, i), v_tilde);
}

TEST(ProxSvrg, SingleSampleDirectionIsFullGradient) {
  SmoothLoss loss(LossKind::logistic, small_data(1, 4, 5));
  RngStream rng(6);
  for (int c = 0; c < 20; ++c) {
    const Vector x = oracle::random_vector(rng, 4), xt = oracle::random_vector(rng, 4);
    EXPECT_LE((svrg_direction(loss, x, xt, loss.full_grad(xt), 0) - loss.full_grad(x)).norm(),
              1e-15);
  }
}

TEST(ProxSvrg, UnbiasedByEnumeration) {
  SmoothLoss loss(LossKind::logistic, small_data(6, 4, 7));
  RngStream rng(8);
  for (int c = 0; c < 20; ++c) {
    const Vector x = oracle::random_vector(rng, 4), xt = oracle::random_vector(rng, 4);
    const Vector vt = loss.full_grad(xt);
    Vector mean = Vector::Zero(4);
    for (std::size_t i = 0; i < 6; ++i) mean += svrg_direction(loss, x, xt, vt, i);
    mean /= 6.0;
    EXPECT_LE((mean - loss.full_grad(x)).norm(), 1e-15);
  }
}

TEST(ProxSvrg, SnapshotGradientRefreshedEveryEpoch) {
  SmoothLoss loss(LossKind::logistic, small_data(20, 4, 9));
  TrivialSurrogate reg{L1Norm(1e-3)};
  auto s = proxsvrg_init(Vector::Zero(4), 0.1 / loss.lipschitz_bound(), 7);
  for (int t = 0; t < 50; ++t) {
    const bool boundary = s.inner == 0;
    const Vector x_before = s.x;
    s = proxsvrg_step(std::move(s), loss, reg, RngStream(10));
    if (boundary) {
      EXPECT_EQ(s.x_tilde, x_before);
      EXPECT_EQ(s.v_tilde, loss.full_grad(s.x_tilde));
    }
  }
  EXPECT_EQ(s.t, 50u);
  EXPECT_EQ(s.inner, 50u % 7u);
}

TEST(ProxSvrg, ScalarTrajectoryMatchesTranscription) {
  for (const auto& p : kScalar) {
    SmoothLoss loss(kind_of(p), scalar_data(p));
    TrivialSurrogate reg{L1Norm(p.lambda)};
    const double alpha = 0.1 / p.lipschitz();
    auto s = proxsvrg_init(vec({0.7}), alpha, 4);
    std::vector<double> got;
    for (int t = 0; t < 50; ++t) {
      s = proxsvrg_step(std::move(s), loss, reg, RngStream(11));
      got.push_back(s.x[0]);
    }
    expect_trajectory(got, scalar::proxsvrg(p, 0.7, alpha, 4, 11, 50));
  }
}

// ---------------------------------------------------------------- SAGA

TEST(Saga, FreshTableDirectionIsTableMean) {
  SmoothLoss loss(LossKind::logistic, small_data(15, 5, 12));
  auto s = saga_init(loss, Vector::Zero(5), 0.1);
  EXPECT_EQ(s.table_mean, loss.full_grad(Vector::Zero(5)));
  // alpha tiny and lambda 0: x stays put to first order, but the direction
  // at the very first step uses the untouched table exactly.
  auto next = saga_step(s, loss, kNoReg, RngStream(13));
  EXPECT_EQ(next.v, s.table_mean);
}

TEST(Saga, UnbiasedByEnumeration) {
  SmoothLoss loss(LossKind::logistic, small_data(6, 4, 14));
  RngStream rng(15);
  auto s = saga_init(loss, oracle::random_vector(rng, 4), 0.1);
  for (int c = 0; c < 20; ++c) {
    const Vector x = oracle::random_vector(rng, 4);
    Vector mean = Vector::Zero(4);
    for (std::size_t i = 0; i < 6; ++i) {
      Vector v = s.table_mean;
      axpy(loss.sample_coef(x, i) - s.coefs[i], loss.data().row(i), v);
      mean += v;
    }
    mean /= 6.0;
    EXPECT_LE((mean - loss.full_grad(x)).norm(), 1e-15);
  }
}

TEST(Saga, RunningMeanTracksTable) {
  for (std::size_t n : {37u, 5000u}) {
    SmoothLoss loss(LossKind::logistic, small_data(n, 6, 16));
    TrivialSurrogate reg{L1Norm(1e-3)};
    auto s = saga_init(loss, Vector::Zero(6), 0.1 / loss.lipschitz_bound());
    for (int t = 0; t < 1000; ++t) s = saga_step(std::move(s), loss, reg, RngStream(17));
    Vector direct = Vector::Zero(6);
    for (std::size_t j = 0; j < n; ++j) direct += loss.data().row(j).to_dense(6) * s.coefs[j];
    direct /= static_cast<double>(n);
    EXPECT_LE((s.table_mean - direct).norm(), 1e-10);
  }
}

TEST(Saga, RefusesAboveMemoryBudget) {
  SmoothLoss loss(LossKind::logistic, small_data(100, 50, 18));
  EXPECT_EQ(saga_dense_table_bytes(loss.data()), 100u * 50u * 8u);
  EXPECT_THROW(saga_init(loss, Vector::Zero(50), 0.1, 39999), MemoryBudgetExceeded);
  EXPECT_NO_THROW(saga_init(loss, Vector::Zero(50), 0.1, 40000));
}

TEST(Saga, ScalarTrajectoryMatchesTranscription) {
  for (const auto& p : kScalar) {
    SmoothLoss loss(kind_of(p), scalar_data(p));
    TrivialSurrogate reg{L1Norm(p.lambda)};
    const double alpha = 0.1 / p.lipschitz();
    auto s = saga_init(loss, vec({0.7}), alpha);
    std::vector<double> got;
    for (int t = 0; t < 50; ++t) {
      s = saga_step(std::move(s), loss, reg, RngStream(19));
      got.push_back(s.x[0]);
    }
    expect_trajectory(got, scalar::saga(p, 0.7, alpha, 19, 50));
  }
}

// ---------------------------------------------------------------- RDA

TEST(Rda, SmallAverageGradientShrinksToZero) {
  const Vector x = rda_primal(vec({0.1, -0.05, 0.0}), 9, 0.01, L1Norm(0.1));
  EXPECT_EQ(x, Vector::Zero(3));
}

TEST(Rda, UnregularizedFirstStepIsNegativeAverage) {
  const Vector g = vec({0.3, -1.2});
  EXPECT_EQ(rda_primal(g, 1, 1.0, L1Norm(0.0)), -g);
}

TEST(Rda, ClosedFormMatchesGridMinimisation) {
  RngStream rng(20);
  for (int c = 0; c < 10; ++c) {
    const double lambda = 0.5 * rng.uniform();
    const std::uint64_t k = 1 + rng.below(8);
    const double gamma = 1.0;
    const Vector g = oracle::random_vector(rng, 3, 0.8);
    const Vector x = rda_primal(g, k, gamma, L1Norm(lambda));
    for (Eigen::Index i = 0; i < 3; ++i) {
      auto f = [&](double u) {
        return g[i] * u + lambda * std::abs(u) +
               (gamma / std::sqrt(static_cast<double>(k))) * 0.5 * u * u;
      };
      EXPECT_NEAR(x[i], oracle::grid_argmin(f, -8.0, 8.0, 5e-5), 1e-4);
    }
  }
}

TEST(Rda, AverageGradientIsRunningMean) {
  SmoothLoss loss(LossKind::logistic, small_data(40, 5, 21));
  L1Norm reg(1e-3);
  auto s = rda_init(Vector::Zero(5), 1.0);
  Vector sum = Vector::Zero(5);
  for (int k = 1; k <= 30; ++k) {
    s = rda_step(std::move(s), loss, reg, 4, RngStream(22));
    sum += s.g;
    EXPECT_LE((s.g_bar - sum / k).norm(), 1e-14);
  }
}

TEST(Rda, ScalarTrajectoryMatchesTranscription) {
  for (const auto& p : kScalar) {
    SmoothLoss loss(kind_of(p), scalar_data(p));
    auto s = rda_init(vec({0.7}), 2.0);
    std::vector<double> got;
    for (int k = 0; k < 50; ++k) {
      s = rda_step(std::move(s), loss, L1Norm(p.lambda), 2, RngStream(23));
      got.push_back(s.x[0]);
    }
    expect_trajectory(got, scalar::rda(p, 0.7, 2.0, 2, 23, 50));
  }
}

// ---------------------------------------------------------------- shared

namespace {

double reference_objective(const SmoothLoss& loss, const L1Norm& reg) {
  const double L = loss.lipschitz_bound();
  Vector x = Vector::Zero(static_cast<Eigen::Index>(loss.dim()));
  for (int i = 0; i < 100000; ++i) x = reg.prox(x - loss.full_grad(x) / L, 1.0 / L);
  return objective(loss, reg, x);
}

double final_gap(bench::Algorithm a, const SmoothLoss& loss, const L1Norm& reg, double f_ref,
                 double zeta = 1.0) {
  bench::RunConfig c;
  c.algorithm = a;
  c.seed = 3;
  c.zeta = zeta;
  auto m = bench::make_method(c, loss, reg);
  for (int k = 0; k < 5000; ++k) m->advance();
  return objective(loss, reg, m->iterate()) - f_ref;
}

}  // namespace

TEST(Baselines, ConvergeOnSyntheticLasso) {
  auto inst = synthetic::lasso(200, 50, 5, 0.1, 1);
  SmoothLoss loss(LossKind::least_squares, std::make_shared<const Dataset>(inst.data));
  L1Norm reg(1e-3);
  const double f_ref = reference_objective(loss, reg);
  for (auto a : {bench::Algorithm::proxsvrg, bench::Algorithm::saga, bench::Algorithm::rda})
    EXPECT_LE(final_gap(a, loss, reg, f_ref), 1e-4) << to_string(a);
}

TEST(Baselines, StormVariantsConvergeOnWellConditionedLasso) {
  RngStream rng(5);
  std::vector<SparseVec> rows;
  std::vector<double> y;
  for (int j = 0; j < 500; ++j) {
    const Vector a = oracle::random_vector(rng, 2).normalized();
    rows.push_back(SparseVec{{0, 1}, {a[0], a[1]}});
    y.push_back(a[0] - 0.5 * a[1] + 0.1 * synthetic::gaussian(rng));
  }
  SmoothLoss loss(LossKind::least_squares, std::make_shared<const Dataset>(Dataset(rows, y, 2)));
  L1Norm reg(1e-3);
  const double f_ref = reference_objective(loss, reg);
  EXPECT_LE(final_gap(bench::Algorithm::pstorm, loss, reg, f_ref), 1e-4);
  EXPECT_LE(final_gap(bench::Algorithm::spstorm, loss, reg, f_ref, 10.0), 1e-4);
}

TEST(Baselines, FixedSeedGivesIdenticalIterates) {
  SmoothLoss loss(LossKind::logistic, small_data(64, 6, 24));
  L1Norm reg(1e-3);
  for (auto a : bench::kAllAlgorithms) {
    bench::RunConfig c;
    c.algorithm = a;
    c.seed = 77;
    c.batch_size = 8;
    auto m1 = bench::make_method(c, loss, reg);
    auto m2 = bench::make_method(c, loss, reg);
    for (int k = 0; k < 20; ++k) {
      m1->advance();
      m2->advance();
    }
    EXPECT_EQ(m1->iterate(), m2->iterate()) << to_string(a);
  }
}

TEST(Baselines, NonFiniteIterateAborts) {
  SmoothLoss loss(LossKind::logistic, small_data(10, 3, 25));
  TrivialSurrogate reg{L1Norm(0.0)};
  const Vector bad = vec({std::nan(""), 0.0, 0.0});
  EXPECT_THROW(spstorm_step(spstorm_init(bad, 0.1), loss, reg, 2, RngStream(0)), NumericFailure);
  EXPECT_THROW(pstorm_step(pstorm_init(bad), loss, reg, 2, RngStream(0)), NumericFailure);
  EXPECT_THROW(proxsvrg_step(proxsvrg_init(bad, 0.1, 4), loss, reg, RngStream(0)), NumericFailure);
  EXPECT_THROW(saga_step(saga_init(loss, bad, 0.1), loss, reg, RngStream(0)), NumericFailure);
}
