#include "mesmoc/acquisition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "mesmoc/normal.hpp"

namespace mesmoc {

namespace {

constexpr double kHalfLog2PiPlusHalf = 1.4189385332046727417803297364056;  // (1+ln 2pi)/2
constexpr double kMinVariance = 1e-18;  // floor only for acquisition scoring

double checked_sigma(const PosteriorMoments& m) {
  if (!(m.variance > 0.0)) throw std::domain_error("acquisition: non-positive variance");
  return std::sqrt(m.variance);
}

struct Scored {
  Vector x;
  double acq = -std::numeric_limits<double>::infinity();
  double violation = std::numeric_limits<double>::infinity();
};

// Feasible-first lexicographic preference used by the candidate selection.
bool better(const Scored& a, const Scored& b) {
  const bool a_feas = a.violation <= 0.0;
  const bool b_feas = b.violation <= 0.0;
  if (a_feas != b_feas) return a_feas;
  if (!a_feas && a.violation != b.violation) return a.violation < b.violation;
  return a.acq > b.acq;
}

// Scores every row of X: acquisition value plus total posterior-mean
// constraint violation, with all model posteriors evaluated in one batch.
std::vector<Scored> score_batch(const Matrix& X, const AcquisitionState& state) {
  const int m = static_cast<int>(X.rows());
  const int width = state.num_objectives + state.num_constraints;
  Matrix means(m, width), variances(m, width);
  for (int j = 0; j < width; ++j) {
    Vector mu, var;
    state.models[static_cast<size_t>(j)].posterior(X, mu, var);
    means.col(j) = mu;
    variances.col(j) = var;
  }
  std::vector<Scored> out(static_cast<size_t>(m));
  for (int i = 0; i < m; ++i) {
    Scored& s = out[static_cast<size_t>(i)];
    s.x = X.row(i).transpose();
    double acq = 0.0;
    for (const auto& sample : state.maxima_samples) {
      for (int j = 0; j < width; ++j) {
        const double sigma = std::sqrt(std::max(variances(i, j), kMinVariance));
        acq += truncated_entropy_term((sample.maxima[j] - means(i, j)) / sigma);
      }
    }
    s.acq = acq / static_cast<double>(state.num_samples());
    s.violation = 0.0;
    for (int c = 0; c < state.num_constraints; ++c) {
      s.violation += std::max(0.0, -means(i, state.num_objectives + c));
    }
  }
  return out;
}

Scored score_point(const Vector& x, const AcquisitionState& state) {
  Matrix X(1, x.size());
  X.row(0) = x.transpose();
  return score_batch(X, state)[0];
}

}  // namespace

void AcquisitionState::validate() const {
  if (num_objectives < 1 || num_constraints < 0) {
    throw std::invalid_argument("acquisition: bad output counts");
  }
  if (static_cast<int>(models.size()) != num_objectives + num_constraints) {
    throw std::invalid_argument("acquisition: model count must be K+L");
  }
  if (maxima_samples.empty()) throw std::invalid_argument("acquisition: need at least one sample");
  for (const auto& s : maxima_samples) {
    if (s.maxima.size() != static_cast<Eigen::Index>(models.size()) || !s.maxima.allFinite()) {
      throw std::invalid_argument("acquisition: malformed maxima sample");
    }
  }
}

double gaussian_entropy(const std::vector<PosteriorMoments>& moments) {
  double h = 0.0;
  for (const auto& m : moments) h += kHalfLog2PiPlusHalf + std::log(checked_sigma(m));
  return h;
}

double truncated_entropy_term(double gamma) {
  return 0.5 * gamma * norm_hazard(gamma) - norm_log_cdf(gamma);
}

double conditional_entropy(const std::vector<PosteriorMoments>& moments,
                           const MaximaSample& sample) {
  if (sample.maxima.size() != static_cast<Eigen::Index>(moments.size())) {
    throw std::invalid_argument("acquisition: moments/maxima size mismatch");
  }
  double h = 0.0;
  for (size_t j = 0; j < moments.size(); ++j) {
    const double sigma = checked_sigma(moments[j]);
    const double gamma = (sample.maxima[static_cast<Eigen::Index>(j)] - moments[j].mean) / sigma;
    h += kHalfLog2PiPlusHalf + std::log(sigma) - truncated_entropy_term(gamma);
  }
  return h;
}

double acquisition_from_moments(const std::vector<PosteriorMoments>& moments,
                                const std::vector<MaximaSample>& samples) {
  if (samples.empty()) throw std::invalid_argument("acquisition: need at least one sample");
  double total = 0.0;
  for (const auto& sample : samples) {
    if (sample.maxima.size() != static_cast<Eigen::Index>(moments.size())) {
      throw std::invalid_argument("acquisition: moments/maxima size mismatch");
    }
    for (size_t j = 0; j < moments.size(); ++j) {
      const double sigma = std::sqrt(std::max(moments[j].variance, kMinVariance));
      total += truncated_entropy_term(
          (sample.maxima[static_cast<Eigen::Index>(j)] - moments[j].mean) / sigma);
    }
  }
  return total / static_cast<double>(samples.size());
}

double mesmoc_acquisition(const Vector& x, const AcquisitionState& state) {
  state.validate();
  std::vector<PosteriorMoments> moments;
  moments.reserve(state.models.size());
  for (const auto& model : state.models) moments.push_back(model.posterior(x));
  return acquisition_from_moments(moments, state.maxima_samples);
}

std::vector<MaximaSample> sample_maxima(const std::vector<GpModel>& models,
                                        const ProblemSpec& spec, int num_samples,
                                        int rff_features, const NsgaConfig& cheap_cfg, Rng& rng) {
  if (num_samples < 1) throw std::invalid_argument("acquisition: need at least one sample");
  if (static_cast<int>(models.size()) != spec.num_outputs()) {
    throw std::invalid_argument("acquisition: model count must be K+L");
  }
  std::vector<MaximaSample> out;
  out.reserve(static_cast<size_t>(num_samples));
  for (int s = 0; s < num_samples; ++s) {
    Rng stream = rng.spawn(static_cast<uint64_t>(s));
    std::vector<SampledFunction> objectives, constraints;
    for (int j = 0; j < spec.num_objectives; ++j) {
      objectives.push_back(models[static_cast<size_t>(j)].sample_posterior_function(rff_features, stream));
    }
    for (int c = 0; c < spec.num_constraints; ++c) {
      constraints.push_back(models[static_cast<size_t>(spec.num_objectives + c)]
                                .sample_posterior_function(rff_features, stream));
    }
    ParetoFrontSample front = nsga2(objectives, constraints, spec, cheap_cfg, stream);
    out.push_back(MaximaSample{front.maxima, front.feasible});
  }
  return out;
}

AcquisitionChoice optimize_acquisition(const AcquisitionState& state, const ProblemSpec& spec,
                                       const OptimizerConfig& cfg, Rng& rng) {
  state.validate();
  spec.validate();

  Scored best;
  if (spec.discrete()) {
    const Matrix seen = state.models.front().train_inputs();
    std::vector<Eigen::Index> fresh;
    for (Eigen::Index g = 0; g < spec.grid.rows(); ++g) {
      bool evaluated = false;
      for (Eigen::Index i = 0; i < seen.rows() && !evaluated; ++i) {
        evaluated = (spec.grid.row(g) - seen.row(i)).cwiseAbs().maxCoeff() < 1e-12;
      }
      if (!evaluated) fresh.push_back(g);
    }
    if (fresh.empty()) throw std::runtime_error("acquisition: grid exhausted");
    if (static_cast<long>(fresh.size()) > cfg.grid_limit) {
      // Uniform subsample without replacement (partial Fisher-Yates).
      for (long i = 0; i < cfg.grid_limit; ++i) {
        const uint64_t j =
            static_cast<uint64_t>(i) + rng.uniform_int(fresh.size() - static_cast<uint64_t>(i));
        std::swap(fresh[static_cast<size_t>(i)], fresh[static_cast<size_t>(j)]);
      }
      fresh.resize(static_cast<size_t>(cfg.grid_limit));
    }
    Matrix X(static_cast<Eigen::Index>(fresh.size()), spec.dim);
    for (size_t i = 0; i < fresh.size(); ++i) X.row(static_cast<Eigen::Index>(i)) = spec.grid.row(fresh[i]);
    for (const Scored& s : score_batch(X, state)) {
      if (better(s, best)) best = s;
    }
  } else {
    const int probes = std::max(1, cfg.probes);
    Matrix X(probes, spec.dim);
    for (int i = 0; i < probes; ++i) {
      for (int j = 0; j < spec.dim; ++j) X(i, j) = rng.uniform(spec.lower[j], spec.upper[j]);
    }
    std::vector<Scored> scored = score_batch(X, state);
    std::stable_sort(scored.begin(), scored.end(), better);
    best = scored.front();

    const Vector span = spec.upper - spec.lower;
    const int starts = std::min<int>(std::max(1, cfg.restarts), static_cast<int>(scored.size()));
    for (int r = 0; r < starts; ++r) {
      Scored cur = scored[static_cast<size_t>(r)];
      double step = 0.1;
      for (int iter = 0; iter < cfg.max_iters && step >= 1e-4; ++iter) {
        bool improved = false;
        for (int j = 0; j < spec.dim; ++j) {
          for (double dir : {+1.0, -1.0}) {
            Vector x = cur.x;
            x[j] = std::clamp(x[j] + dir * step * span[j], spec.lower[j], spec.upper[j]);
            Scored cand = score_point(x, state);
            if (better(cand, cur)) {
              cur = cand;
              improved = true;
            }
          }
        }
        if (!improved) step *= 0.5;
      }
      if (better(cur, best)) best = cur;
    }
  }

  AcquisitionChoice choice;
  choice.x = best.x;
  choice.acquisition = best.acq;
  choice.mean_feasible = best.violation <= 0.0;
  return choice;
}

}  // namespace mesmoc
