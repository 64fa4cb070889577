#pragma once

#include <vector>

#include "mesmoc/gp.hpp"
#include "mesmoc/moo.hpp"
#include "mesmoc/problem.hpp"
#include "mesmoc/rng.hpp"

namespace mesmoc {

// Per-output maxima of one sampled Pareto front (objectives then constraints).
struct MaximaSample {
  Vector maxima;  // K+L entries
  bool feasible = true;
};

// Everything the acquisition needs at one iteration: the K+L independent
// posteriors and the Monte-Carlo front samples. Immutable once built.
struct AcquisitionState {
  std::vector<GpModel> models;  // objectives first, then constraints
  std::vector<MaximaSample> maxima_samples;
  int num_objectives = 0;
  int num_constraints = 0;

  int num_samples() const { return static_cast<int>(maxima_samples.size()); }
  void validate() const;  // throws std::invalid_argument
};

// Joint differential entropy of K+L independent Gaussians:
// (K+L)(1+ln 2pi)/2 + sum ln sigma. Throws std::domain_error on sigma <= 0.
double gaussian_entropy(const std::vector<PosteriorMoments>& moments);

// Entropy reduction from conditioning a unit Gaussian to lie below gamma:
// gamma*phi(gamma)/(2*Phi(gamma)) - ln Phi(gamma), stable for all finite gamma.
double truncated_entropy_term(double gamma);

// Entropy of the output vector conditioned on one sampled front's maxima:
// per output, (1+ln 2pi)/2 + ln sigma + ln Phi(gamma) - gamma*phi(gamma)/(2*Phi(gamma))
// with gamma = (max - mu)/sigma. Throws std::domain_error on sigma <= 0.
double conditional_entropy(const std::vector<PosteriorMoments>& moments,
                           const MaximaSample& sample);

// Monte-Carlo information gain for given posterior moments:
// (1/S) sum_s sum_outputs truncated_entropy_term(gamma_s).
double acquisition_from_moments(const std::vector<PosteriorMoments>& moments,
                                const std::vector<MaximaSample>& samples);

double mesmoc_acquisition(const Vector& x, const AcquisitionState& state);

// Draws one posterior function per output, solves the cheap multi-objective
// problem, and records the per-output maxima; repeated for S independent
// sample streams split off the given generator.
std::vector<MaximaSample> sample_maxima(const std::vector<GpModel>& models,
                                        const ProblemSpec& spec, int num_samples,
                                        int rff_features, const NsgaConfig& cheap_cfg, Rng& rng);

struct OptimizerConfig {
  int probes = 1000;     // uniform candidates seeding the continuous search
  int restarts = 5;      // local refinements started from the best probes
  int max_iters = 60;    // pattern-search sweeps per restart
  long grid_limit = 100000;  // grids larger than this are uniformly subsampled
};

struct AcquisitionChoice {
  Vector x;
  double acquisition = 0.0;
  bool mean_feasible = true;  // all posterior constraint means >= 0 at x
};

// Maximizes the acquisition subject to the posterior-mean feasibility filter.
// With no mean-feasible candidate, falls back to the candidate of least total
// posterior-mean violation (ties by acquisition). On discrete problems the
// models' training inputs are excluded from the candidate grid; an exhausted
// grid raises std::runtime_error.
AcquisitionChoice optimize_acquisition(const AcquisitionState& state, const ProblemSpec& spec,
                                       const OptimizerConfig& cfg, Rng& rng);

}  // namespace mesmoc
