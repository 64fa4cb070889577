#include "mesmoc/gp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace mesmoc {

namespace {

constexpr double kLog2Pi = 1.8378770664093454835606594728112;

// Hyperparameter bounds in internal (unit-cube, standardized) units.
constexpr double kMinLengthscale = 1e-3;
constexpr double kMaxLengthscale = 10.0;
constexpr double kMinSignalVar = 1e-4;
constexpr double kMaxSignalVar = 1e4;
constexpr double kMinNoiseVar = 1e-8;
constexpr double kMaxNoiseVar = 1.0;

Vector box_widths(const Vector& lower, const Vector& upper) {
  Vector w = upper - lower;
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    if (!(w[i] > 0.0)) w[i] = 1.0;
  }
  return w;
}

Matrix to_unit(const Matrix& X, const Vector& lower, const Vector& widths) {
  Matrix U = X;
  U.rowwise() -= lower.transpose();
  U.array().rowwise() /= widths.transpose().array();
  return U;
}

Vector to_unit(const Vector& x, const Vector& lower, const Vector& widths) {
  return ((x - lower).array() / widths.array()).matrix();
}

Matrix kernel_matrix(const Matrix& U, const KernelHyperparams& hp) {
  const Eigen::Index n = U.rows();
  Matrix S = U.array().rowwise() / hp.lengthscales.transpose().array();
  Vector sq = S.rowwise().squaredNorm();
  Matrix D = sq.replicate(1, n) + sq.transpose().replicate(n, 1) - 2.0 * S * S.transpose();
  return hp.signal_variance * (-0.5 * D.array().max(0.0)).exp().matrix();
}

Matrix cross_kernel(const Matrix& U, const Matrix& V, const KernelHyperparams& hp) {
  Matrix SU = U.array().rowwise() / hp.lengthscales.transpose().array();
  Matrix SV = V.array().rowwise() / hp.lengthscales.transpose().array();
  Vector su = SU.rowwise().squaredNorm();
  Vector sv = SV.rowwise().squaredNorm();
  Matrix D = su.replicate(1, SV.rows()) + sv.transpose().replicate(SU.rows(), 1) -
             2.0 * SU * SV.transpose();
  return hp.signal_variance * (-0.5 * D.array().max(0.0)).exp().matrix();
}

// Cholesky with escalating diagonal jitter; returns the achieved jitter or
// throws if the matrix is not factorizable even at the largest level.
double robust_llt(const Matrix& K, Eigen::LLT<Matrix>& llt) {
  llt.compute(K);
  if (llt.info() == Eigen::Success) return 0.0;
  for (double jitter = 1e-10; jitter <= 1e-4; jitter *= 10.0) {
    Matrix Kj = K;
    Kj.diagonal().array() += jitter;
    llt.compute(Kj);
    if (llt.info() == Eigen::Success) return jitter;
  }
  throw std::runtime_error("gp: kernel matrix is not positive definite even with jitter");
}

struct LogParams {
  Vector theta;  // [log l_1..l_d, log s2, log noise]
};

KernelHyperparams unpack(const Vector& theta, int d) {
  KernelHyperparams hp;
  hp.lengthscales = theta.head(d).array().exp().matrix();
  hp.signal_variance = std::exp(theta[d]);
  hp.noise_variance = std::exp(theta[d + 1]);
  return hp;
}

void clamp_theta(Vector& theta, int d) {
  for (int i = 0; i < d; ++i) {
    theta[i] = std::clamp(theta[i], std::log(kMinLengthscale), std::log(kMaxLengthscale));
  }
  theta[d] = std::clamp(theta[d], std::log(kMinSignalVar), std::log(kMaxSignalVar));
  theta[d + 1] = std::clamp(theta[d + 1], std::log(kMinNoiseVar), std::log(kMaxNoiseVar));
}

double lml_for(const Matrix& U, const Vector& y, const KernelHyperparams& hp) {
  const Eigen::Index n = U.rows();
  Matrix K = kernel_matrix(U, hp);
  K.diagonal().array() += hp.noise_variance;
  Eigen::LLT<Matrix> llt;
  try {
    robust_llt(K, llt);
  } catch (const std::runtime_error&) {
    return -std::numeric_limits<double>::infinity();
  }
  Vector alpha = llt.solve(y);
  double log_det_half = Matrix(llt.matrixL()).diagonal().array().log().sum();
  return -0.5 * y.dot(alpha) - log_det_half - 0.5 * static_cast<double>(n) * kLog2Pi;
}

}  // namespace

double se_kernel(const Vector& x1, const Vector& x2, const KernelHyperparams& hp) {
  double q = ((x1 - x2).array() / hp.lengthscales.array()).square().sum();
  return hp.signal_variance * std::exp(-0.5 * q);
}

double SampledFunction::operator()(const Vector& x) const {
  return amplitude * ((frequencies * x + phases).array().cos() * weights.array()).sum();
}

Vector SampledFunction::at(const Matrix& X) const {
  Matrix arg = X * frequencies.transpose();
  arg.rowwise() += phases.transpose();
  return amplitude * (arg.array().cos().matrix() * weights);
}

double evaluate_sampled(const SampledFunction& fn, const Vector& x) { return fn(x); }

GpModel GpModel::fit(const Dataset& data, int output_index, const GpFitConfig& cfg, Rng& rng) {
  Matrix X = data.inputs();
  Vector y = data.targets(output_index);
  const int n = static_cast<int>(X.rows());
  const int d = static_cast<int>(X.cols());
  if (n < 2) throw std::invalid_argument("gp: need at least two observations to fit");

  GpModel model;
  model.lower_ = X.colwise().minCoeff().transpose();
  model.upper_ = X.colwise().maxCoeff().transpose();
  Vector widths = box_widths(model.lower_, model.upper_);
  model.X_ = to_unit(X, model.lower_, widths);

  model.y_mean_ = y.mean();
  double var = (y.array() - model.y_mean_).square().sum() / static_cast<double>(n);
  model.y_scale_ = var > 1e-24 ? std::sqrt(var) : 1.0;
  model.y_ = (y.array() - model.y_mean_).matrix() / model.y_scale_;

  Vector best_theta(d + 2);
  double best_lml = -std::numeric_limits<double>::infinity();
  for (int restart = 0; restart < std::max(1, cfg.restarts); ++restart) {
    Vector theta(d + 2);
    if (restart == 0) {
      theta.head(d).setConstant(std::log(0.5));
      theta[d] = 0.0;
      theta[d + 1] = std::log(1e-4);
    } else {
      for (int i = 0; i < d; ++i) theta[i] = rng.uniform(std::log(0.05), std::log(2.0));
      theta[d] = rng.uniform(std::log(0.1), std::log(10.0));
      theta[d + 1] = rng.uniform(std::log(1e-6), std::log(1e-1));
    }
    clamp_theta(theta, d);
    double value = lml_for(model.X_, model.y_, unpack(theta, d));

    double step = 0.5;
    for (int iter = 0; iter < cfg.max_search_iters && step >= 1e-3; ++iter) {
      bool improved = false;
      for (int i = 0; i < d + 2; ++i) {
        for (double dir : {+1.0, -1.0}) {
          Vector cand = theta;
          cand[i] += dir * step;
          clamp_theta(cand, d);
          double v = lml_for(model.X_, model.y_, unpack(cand, d));
          if (v > value) {
            value = v;
            theta = cand;
            improved = true;
          }
        }
      }
      if (!improved) step *= 0.5;
    }
    if (value > best_lml) {
      best_lml = value;
      best_theta = theta;
    }
  }
  if (!std::isfinite(best_lml)) {
    throw std::runtime_error("gp: hyperparameter search failed to find a usable model");
  }
  model.hp_ = unpack(best_theta, d);
  model.factorize();
  return model;
}

GpModel GpModel::condition(const KernelHyperparams& hp, const Matrix& X, const Vector& y,
                           const Vector& lower, const Vector& upper) {
  if (X.rows() != y.size()) throw std::invalid_argument("gp: X/y size mismatch");
  GpModel model;
  model.lower_ = lower;
  model.upper_ = upper;
  Vector widths = box_widths(lower, upper);
  model.hp_ = hp;
  model.hp_.lengthscales = (hp.lengthscales.array() / widths.array()).matrix();
  model.X_ = to_unit(X, lower, widths);
  model.y_ = y;
  model.y_mean_ = 0.0;
  model.y_scale_ = 1.0;
  model.factorize();
  return model;
}

GpModel GpModel::reconditioned(const Dataset& data, int output_index) const {
  GpModel model = *this;
  Matrix X = data.inputs();
  Vector y = data.targets(output_index);
  Vector widths = box_widths(model.lower_, model.upper_);
  model.X_ = to_unit(X, model.lower_, widths);
  model.y_ = (y.array() - model.y_mean_).matrix() / model.y_scale_;
  model.factorize();
  return model;
}

void GpModel::factorize() {
  const Eigen::Index n = X_.rows();
  if (n == 0) {
    chol_.resize(0, 0);
    alpha_.resize(0);
    jitter_ = 0.0;
    return;
  }
  Matrix K = kernel_matrix(X_, hp_);
  K.diagonal().array() += hp_.noise_variance;
  Eigen::LLT<Matrix> llt;
  jitter_ = robust_llt(K, llt);
  chol_ = llt.matrixL();
  alpha_ = llt.solve(y_);
}

PosteriorMoments GpModel::posterior(const Vector& x) const {
  Vector widths = box_widths(lower_, upper_);
  Vector u = to_unit(x, lower_, widths);
  PosteriorMoments out;
  if (X_.rows() == 0) {
    out.mean = y_mean_;
    out.variance = hp_.signal_variance * y_scale_ * y_scale_;
    return out;
  }
  Vector k(X_.rows());
  for (Eigen::Index i = 0; i < X_.rows(); ++i) {
    double q = ((X_.row(i).transpose() - u).array() / hp_.lengthscales.array()).square().sum();
    k[i] = hp_.signal_variance * std::exp(-0.5 * q);
  }
  double mean_std = k.dot(alpha_);
  Vector v = chol_.triangularView<Eigen::Lower>().solve(k);
  double var_std = std::max(0.0, hp_.signal_variance - v.squaredNorm());
  out.mean = y_mean_ + y_scale_ * mean_std;
  out.variance = y_scale_ * y_scale_ * var_std;
  return out;
}

void GpModel::posterior(const Matrix& X, Vector& mean, Vector& variance) const {
  Vector widths = box_widths(lower_, upper_);
  Matrix U = to_unit(X, lower_, widths);
  const Eigen::Index m = U.rows();
  if (X_.rows() == 0) {
    mean = Vector::Constant(m, y_mean_);
    variance = Vector::Constant(m, hp_.signal_variance * y_scale_ * y_scale_);
    return;
  }
  Matrix Kx = cross_kernel(X_, U, hp_);  // n x m
  mean = (y_mean_ + y_scale_ * (Kx.transpose() * alpha_).array()).matrix();
  Matrix V = chol_.triangularView<Eigen::Lower>().solve(Kx);
  variance = (hp_.signal_variance - V.colwise().squaredNorm().transpose().array())
                 .max(0.0)
                 .matrix() *
             (y_scale_ * y_scale_);
}

double GpModel::log_marginal_likelihood() const {
  const Eigen::Index n = X_.rows();
  if (n == 0) return 0.0;
  double log_det_half = chol_.diagonal().array().log().sum();
  return -0.5 * y_.dot(alpha_) - log_det_half - 0.5 * static_cast<double>(n) * kLog2Pi;
}

SampledFunction GpModel::sample_posterior_function(int num_features, Rng& rng) const {
  if (num_features < 1) throw std::invalid_argument("gp: need at least one feature");
  const int d = static_cast<int>(lower_.size());
  const int F = num_features;
  Vector widths = box_widths(lower_, upper_);

  // Spectral draw for the squared-exponential kernel in unit-cube coordinates.
  Matrix freq_unit(F, d);
  for (int f = 0; f < F; ++f) {
    for (int i = 0; i < d; ++i) freq_unit(f, i) = rng.normal() / hp_.lengthscales[i];
  }
  Vector phases_unit(F);
  for (int f = 0; f < F; ++f) phases_unit[f] = rng.uniform(0.0, 2.0 * M_PI);
  const double feature_scale = std::sqrt(2.0 * hp_.signal_variance / static_cast<double>(F));

  Vector w(F);
  for (int f = 0; f < F; ++f) w[f] = rng.normal();  // prior weights
  const Eigen::Index n = X_.rows();
  if (n > 0) {
    // Exact Bayesian linear-regression update of the prior weight draw: solve
    // against the n x n feature Gram matrix, which keeps the cost cubic in the
    // number of observations rather than the number of features.
    Matrix arg = X_ * freq_unit.transpose();
    arg.rowwise() += phases_unit.transpose();
    Matrix Phi = feature_scale * arg.array().cos().matrix();  // n x F
    Vector noise(n);
    const double noise_sd = std::sqrt(hp_.noise_variance);
    for (Eigen::Index i = 0; i < n; ++i) noise[i] = noise_sd * rng.normal();
    Matrix G = Phi * Phi.transpose();
    G.diagonal().array() += hp_.noise_variance;
    Eigen::LLT<Matrix> llt;
    robust_llt(G, llt);
    Vector resid = y_ - Phi * w - noise;
    w += Phi.transpose() * llt.solve(resid);
  }

  SampledFunction fn;
  fn.amplitude = y_scale_ * feature_scale;
  fn.frequencies.resize(F + 1, d);
  fn.phases.resize(F + 1);
  fn.weights.resize(F + 1);
  // Express the features directly in raw inputs: omega_unit . u(x) equals
  // (omega_unit / widths) . x minus a constant which folds into the phase.
  for (int f = 0; f < F; ++f) {
    fn.frequencies.row(f) = (freq_unit.row(f).transpose().array() / widths.array()).transpose();
    fn.phases[f] =
        phases_unit[f] - (freq_unit.row(f).transpose().array() * lower_.array() / widths.array()).sum();
    fn.weights[f] = w[f];
  }
  // Constant feature restores the target mean removed by standardization.
  fn.frequencies.row(F).setZero();
  fn.phases[F] = 0.0;
  fn.weights[F] = y_mean_ / fn.amplitude;
  return fn;
}

KernelHyperparams GpModel::hyperparams() const {
  Vector widths = box_widths(lower_, upper_);
  KernelHyperparams hp;
  hp.lengthscales = (hp_.lengthscales.array() * widths.array()).matrix();
  hp.signal_variance = hp_.signal_variance * y_scale_ * y_scale_;
  hp.noise_variance = hp_.noise_variance * y_scale_ * y_scale_;
  return hp;
}

Matrix GpModel::train_inputs() const {
  Vector widths = box_widths(lower_, upper_);
  Matrix X = X_;
  X.array().rowwise() *= widths.transpose().array();
  X.rowwise() += lower_.transpose();
  return X;
}

}  // namespace mesmoc
