#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "mesmoc/gp.hpp"
#include "mesmoc/problem.hpp"
#include "mesmoc/rng.hpp"
#include "support/oracles.hpp"
#include "support/properties.hpp"

using namespace mesmoc;

namespace {

KernelHyperparams unit_hp(int d, double ell, double s2, double noise) {
  KernelHyperparams hp;
  hp.lengthscales = Vector::Constant(d, ell);
  hp.signal_variance = s2;
  hp.noise_variance = noise;
  return hp;
}

Dataset dataset_1d(const Vector& xs, const Vector& ys) {
  Dataset data;
  for (Eigen::Index i = 0; i < xs.size(); ++i) {
    Observation obs;
    obs.x = Vector::Constant(1, xs[i]);
    obs.y.objectives = Vector::Constant(2, ys[i]);  // duplicate across two outputs
    obs.y.constraints = Vector(0);
    data.append(std::move(obs));
  }
  return data;
}

}  // namespace

TEST_CASE("se_kernel hand values") {
  const KernelHyperparams hp = unit_hp(2, 1.0, 1.0, 0.0);
  Vector a(2), b(2);
  a << 0.0, 0.0;
  b << 1.0, 1.0;
  CHECK(se_kernel(a, a, hp) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(se_kernel(a, b, hp) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
  const KernelHyperparams wide = unit_hp(2, 2.0, 3.0, 0.0);
  CHECK(se_kernel(a, b, wide) == doctest::Approx(3.0 * std::exp(-0.25)).epsilon(1e-14));
  b << 100.0, 100.0;
  CHECK(se_kernel(a, b, hp) == doctest::Approx(0.0));
}

TEST_CASE("prior model has zero mean and full variance") {
  const KernelHyperparams hp = unit_hp(2, 0.7, 2.5, 1e-6);
  const GpModel model = GpModel::condition(hp, Matrix(0, 2), Vector(0), Vector::Zero(2),
                                           Vector::Ones(2));
  Vector x(2);
  x << 0.3, 0.9;
  const PosteriorMoments m = model.posterior(x);
  CHECK(m.mean == doctest::Approx(0.0));
  CHECK(m.variance == doctest::Approx(2.5).epsilon(1e-12));
  CHECK(model.size() == 0);
}

TEST_CASE("single observation log marginal likelihood matches the closed form") {
  const double noise = 0.3;
  const KernelHyperparams hp = unit_hp(1, 1.0, 1.0, noise);
  Matrix X(1, 1);
  X << 0.5;
  Vector y(1);
  y << 0.0;
  const GpModel model = GpModel::condition(hp, X, y, Vector::Zero(1), Vector::Ones(1));
  const double expected = -0.5 * std::log(2.0 * M_PI * (1.0 + noise));
  CHECK(model.log_marginal_likelihood() == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("conditioned posterior matches a dense eigendecomposition oracle") {
  Rng rng(77);
  CHECK(properties::battery_gp_oracle(rng, 40, 1e-8, 40, 4) == 0);
}

TEST_CASE("posterior variance never increases when data are added") {
  Rng rng(78);
  CHECK(properties::battery_gp_variance_monotone(rng, 60, 1e-7) == 0);
}

TEST_CASE("near-noiseless model interpolates its training targets") {
  Rng rng(5150);
  Vector xs(6), ys(6);
  xs << 0.0, 0.9, 2.2, 3.1, 4.4, 5.0;
  for (Eigen::Index i = 0; i < 6; ++i) ys[i] = std::sin(xs[i]);
  const KernelHyperparams hp = unit_hp(1, 1.2, 1.0, 1e-10);
  Matrix X(6, 1);
  X.col(0) = xs;
  const GpModel model =
      GpModel::condition(hp, X, ys, Vector::Constant(1, 0.0), Vector::Constant(1, 5.0));
  for (Eigen::Index i = 0; i < 6; ++i) {
    const PosteriorMoments m = model.posterior(Vector::Constant(1, xs[i]));
    CHECK(m.mean == doctest::Approx(ys[i]).epsilon(1e-4));
    CHECK(m.variance >= 0.0);
    CHECK(m.variance <= 1e-6);
  }
}

TEST_CASE("fit recovers the lengthscale of a known generator") {
  Rng rng(424242);
  const int n = 200;
  const double true_ell = 0.5;
  Matrix X(n, 1);
  for (int i = 0; i < n; ++i) X(i, 0) = rng.uniform(0.0, 5.0);
  const KernelHyperparams gen = unit_hp(1, true_ell, 1.0, 0.0);
  Matrix K(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      K(i, j) = se_kernel(X.row(i).transpose(), X.row(j).transpose(), gen);
  K.diagonal().array() += 1e-8;
  const Eigen::LLT<Matrix> llt(K);
  REQUIRE(llt.info() == Eigen::Success);
  Vector z(n);
  for (int i = 0; i < n; ++i) z[i] = rng.normal();
  Vector f = llt.matrixL() * z;
  Dataset data;
  for (int i = 0; i < n; ++i) {
    Observation obs;
    obs.x = X.row(i).transpose();
    obs.y.objectives = Vector::Constant(2, f[i] + 1e-2 * rng.normal());
    obs.y.constraints = Vector(0);
    data.append(std::move(obs));
  }
  GpFitConfig cfg;
  cfg.restarts = 3;
  cfg.max_search_iters = 30;
  Rng fit_rng(9);
  const GpModel model = GpModel::fit(data, 0, cfg, fit_rng);
  const KernelHyperparams hp = model.hyperparams();
  CHECK(hp.lengthscales[0] >= 0.35);
  CHECK(hp.lengthscales[0] <= 0.70);
  CHECK(hp.signal_variance > 0.1);
  CHECK(hp.noise_variance < 0.05);
}

TEST_CASE("duplicate inputs with conflicting targets force noise away from zero") {
  Vector xs(8), ys(8);
  xs << 0.3, 0.3, 1.0, 1.0, 2.0, 2.0, 3.0, 3.0;
  ys << 1.0, -1.0, 0.5, -0.5, 1.0, -1.0, 0.2, -0.2;
  Dataset data = dataset_1d(xs, ys);
  GpFitConfig cfg;
  Rng rng(31);
  const GpModel model = GpModel::fit(data, 0, cfg, rng);
  CHECK(model.hyperparams().noise_variance > 1e-4);
  CHECK(std::isfinite(model.log_marginal_likelihood()));
}

TEST_CASE("fit works at the minimum dataset size") {
  Vector xs(2), ys(2);
  xs << 0.0, 1.0;
  ys << 0.0, 1.0;
  Dataset data = dataset_1d(xs, ys);
  GpFitConfig cfg;
  cfg.restarts = 2;
  cfg.max_search_iters = 15;
  Rng rng(8);
  const GpModel model = GpModel::fit(data, 1, cfg, rng);
  CHECK(model.size() == 2);
  const PosteriorMoments m = model.posterior(Vector::Constant(1, 0.5));
  CHECK(std::isfinite(m.mean));
  CHECK(m.variance >= 0.0);
}

TEST_CASE("reconditioned keeps hyperparameters and interpolates new data") {
  Rng rng(555);
  Vector xs(12), ys(12);
  for (Eigen::Index i = 0; i < 12; ++i) {
    xs[i] = 0.5 * static_cast<double>(i);
    ys[i] = std::cos(xs[i]);
  }
  Dataset data = dataset_1d(xs, ys);
  GpFitConfig cfg;
  cfg.restarts = 2;
  cfg.max_search_iters = 25;
  const GpModel model = GpModel::fit(data, 0, cfg, rng);
  const KernelHyperparams before = model.hyperparams();

  Dataset extended = data;
  Observation extra;
  extra.x = Vector::Constant(1, 5.75);
  extra.y.objectives = Vector::Constant(2, std::cos(5.75));
  extra.y.constraints = Vector(0);
  extended.append(std::move(extra));

  const GpModel updated = model.reconditioned(extended, 0);
  CHECK(updated.size() == 13);
  const KernelHyperparams after = updated.hyperparams();
  CHECK(after.lengthscales[0] == doctest::Approx(before.lengthscales[0]).epsilon(1e-12));
  CHECK(after.signal_variance == doctest::Approx(before.signal_variance).epsilon(1e-12));
  CHECK(after.noise_variance == doctest::Approx(before.noise_variance).epsilon(1e-12));
  // The refreshed model actually uses the new observation.
  const PosteriorMoments at_new = updated.posterior(Vector::Constant(1, 5.75));
  const PosteriorMoments old_at_new = model.posterior(Vector::Constant(1, 5.75));
  CHECK(at_new.variance < old_at_new.variance);
}

TEST_CASE("batched posterior equals the scalar path") {
  Rng rng(91);
  Vector xs(10), ys(10);
  for (Eigen::Index i = 0; i < 10; ++i) {
    xs[i] = rng.uniform(0.0, 3.0);
    ys[i] = std::sin(2.0 * xs[i]) + 0.1 * rng.normal();
  }
  Dataset data = dataset_1d(xs, ys);
  GpFitConfig cfg;
  cfg.restarts = 2;
  cfg.max_search_iters = 20;
  const GpModel model = GpModel::fit(data, 0, cfg, rng);
  Matrix Q(25, 1);
  for (int i = 0; i < 25; ++i) Q(i, 0) = 3.0 * i / 24.0;
  Vector mean, variance;
  model.posterior(Q, mean, variance);
  for (int i = 0; i < 25; ++i) {
    const PosteriorMoments m = model.posterior(Q.row(i).transpose());
    CHECK(mean[i] == doctest::Approx(m.mean).epsilon(1e-11));
    CHECK(variance[i] == doctest::Approx(m.variance).epsilon(1e-11));
  }
}

TEST_CASE("sampled functions are deterministic in the seed") {
  const KernelHyperparams hp = unit_hp(2, 0.8, 1.5, 1e-4);
  Rng data_rng(3);
  Matrix X(6, 2);
  Vector y(6);
  for (int i = 0; i < 6; ++i) {
    X(i, 0) = data_rng.uniform();
    X(i, 1) = data_rng.uniform();
    y[i] = data_rng.normal();
  }
  const GpModel model = GpModel::condition(hp, X, y, Vector::Zero(2), Vector::Ones(2));
  Rng r1(1001), r2(1001), r3(1002);
  const SampledFunction f1 = model.sample_posterior_function(64, r1);
  const SampledFunction f2 = model.sample_posterior_function(64, r2);
  const SampledFunction f3 = model.sample_posterior_function(64, r3);
  CHECK((f1.weights - f2.weights).cwiseAbs().maxCoeff() == 0.0);
  CHECK((f1.frequencies - f2.frequencies).cwiseAbs().maxCoeff() == 0.0);
  CHECK((f1.phases - f2.phases).cwiseAbs().maxCoeff() == 0.0);
  CHECK(f1.amplitude == f2.amplitude);
  CHECK((f1.weights - f3.weights).cwiseAbs().maxCoeff() > 0.0);
  // Batched evaluation agrees with the scalar call and the free function.
  Matrix Q(5, 2);
  Rng qr(17);
  for (int i = 0; i < 5; ++i) {
    Q(i, 0) = qr.uniform();
    Q(i, 1) = qr.uniform();
  }
  const Vector batched = f1.at(Q);
  for (int i = 0; i < 5; ++i) {
    const Vector q = Q.row(i).transpose();
    CHECK(batched[i] == doctest::Approx(f1(q)).epsilon(1e-12));
    CHECK(evaluate_sampled(f1, q) == f1(q));
  }
}

TEST_CASE("posterior samples stay close to the data they were conditioned on") {
  const KernelHyperparams hp = unit_hp(1, 1.0, 1.0, 1e-4);
  Rng data_rng(12);
  const int n = 10;
  Matrix X(n, 1);
  Vector y(n);
  for (int i = 0; i < n; ++i) {
    X(i, 0) = 5.0 * i / (n - 1.0);
    y[i] = std::sin(X(i, 0)) + 0.01 * data_rng.normal();
  }
  const GpModel model =
      GpModel::condition(hp, X, y, Vector::Constant(1, 0.0), Vector::Constant(1, 5.0));
  Vector mean, variance;
  model.posterior(X, mean, variance);
  Rng rng(2026);
  const int draws = 1000;
  int within = 0;
  int total = 0;
  for (int s = 0; s < draws; ++s) {
    const SampledFunction f = model.sample_posterior_function(500, rng);
    const Vector vals = f.at(X);
    for (int i = 0; i < n; ++i) {
      const double sd = std::sqrt(variance[i] + hp.noise_variance);
      if (std::abs(vals[i] - y[i]) <= 3.0 * sd) ++within;
      ++total;
    }
  }
  CHECK(static_cast<double>(within) / total >= 0.99);
}

TEST_CASE("sampled prior covariance approximates the kernel") {
  const KernelHyperparams hp = unit_hp(2, 1.0, 1.0, 1e-6);
  const GpModel prior = GpModel::condition(hp, Matrix(0, 2), Vector(0), Vector::Zero(2),
                                           Vector::Constant(2, 2.0));
  Vector a(2), b(2);
  a << 0.4, 1.2;
  b << 1.0, 0.6;
  const double k_ab = se_kernel(a, b, hp);
  Rng rng(33);
  const int draws = 4000;
  double sum_a = 0.0, sum_b = 0.0, sum_ab = 0.0;
  Matrix Q(2, 2);
  Q.row(0) = a.transpose();
  Q.row(1) = b.transpose();
  for (int s = 0; s < draws; ++s) {
    const SampledFunction f = prior.sample_posterior_function(500, rng);
    const Vector v = f.at(Q);
    sum_a += v[0];
    sum_b += v[1];
    sum_ab += v[0] * v[1];
  }
  const double cov = sum_ab / draws - (sum_a / draws) * (sum_b / draws);
  CHECK(cov == doctest::Approx(k_ab).epsilon(0.15));
}
