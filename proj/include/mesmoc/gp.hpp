#pragma once

#include <Eigen/Dense>

#include "mesmoc/problem.hpp"
#include "mesmoc/rng.hpp"

namespace mesmoc {

struct KernelHyperparams {
  Vector lengthscales;          // size d, strictly positive
  double signal_variance = 1.0;
  double noise_variance = 1e-6;
};

// Squared-exponential kernel with per-dimension lengthscales.
double se_kernel(const Vector& x1, const Vector& x2, const KernelHyperparams& hp);

struct PosteriorMoments {
  double mean = 0.0;
  double variance = 0.0;
};

struct GpFitConfig {
  int restarts = 5;           // multi-start count for the likelihood ascent
  int max_search_iters = 60;  // pattern-search sweeps per restart
};

// Trigonometric finite-basis function: amplitude * sum_f w_f cos(omega_f . x + b_f),
// with frequencies in the raw input space. Immutable and deterministic.
struct SampledFunction {
  Matrix frequencies;  // F x d
  Vector phases;       // F
  Vector weights;      // F
  double amplitude = 1.0;

  double operator()(const Vector& x) const;
  Vector at(const Matrix& X) const;  // batched, one row per point
};

double evaluate_sampled(const SampledFunction& fn, const Vector& x);

// One zero-mean squared-exponential GP over a single scalar output.
//
// Inputs are affinely mapped to the unit hypercube and targets standardized
// before fitting; hyperparameters exposed through hyperparams() are reported
// back in raw units. The Cholesky factor of (K + noise I) and the solved
// targets are cached at construction.
class GpModel {
 public:
  // Maximizes log marginal likelihood by multi-start pattern search in
  // log-hyperparameter space. Requires at least two observations.
  static GpModel fit(const Dataset& data, int output_index, const GpFitConfig& cfg, Rng& rng);

  // Conditions on the given data with fixed raw-unit hyperparameters and no
  // target standardization. Accepts n = 0 (prior model).
  static GpModel condition(const KernelHyperparams& hp, const Matrix& X, const Vector& y,
                           const Vector& lower, const Vector& upper);

  // Same transforms and hyperparameters, refreshed data (the every-iteration
  // model update between hyperparameter re-estimations).
  GpModel reconditioned(const Dataset& data, int output_index) const;

  PosteriorMoments posterior(const Vector& x) const;

  // Batched predictive moments, one row of X per query point.
  void posterior(const Matrix& X, Vector& mean, Vector& variance) const;

  double log_marginal_likelihood() const;

  // Draws one function approximately distributed as the GP posterior, using
  // num_features random Fourier features with exact Bayesian linear-regression
  // weights. Returned function evaluates in raw input/output units.
  SampledFunction sample_posterior_function(int num_features, Rng& rng) const;

  KernelHyperparams hyperparams() const;  // raw units
  int size() const { return static_cast<int>(y_.size()); }
  Matrix train_inputs() const;  // raw units, one row per observation

  // Internal (unit-cube / standardized) view, used by diagnostics and tests.
  const KernelHyperparams& internal_hyperparams() const { return hp_; }
  const Matrix& unit_inputs() const { return X_; }
  const Vector& standardized_targets() const { return y_; }
  const Matrix& kernel_factor() const { return chol_; }
  double jitter() const { return jitter_; }
  double target_mean() const { return y_mean_; }
  double target_scale() const { return y_scale_; }

 private:
  GpModel() = default;
  void factorize();  // builds chol_ and alpha_, escalating jitter as needed

  KernelHyperparams hp_;  // unit-cube lengthscales, standardized variances
  Matrix X_;              // n x d, unit cube
  Vector y_;              // n, standardized
  Matrix chol_;           // lower factor of K + noise I (+ jitter)
  Vector alpha_;          // (K + noise I)^-1 y
  double jitter_ = 0.0;
  Vector lower_, upper_;  // input scaling box
  double y_mean_ = 0.0;
  double y_scale_ = 1.0;
};

}  // namespace mesmoc
