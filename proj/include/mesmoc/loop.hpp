#pragma once

#include <functional>
#include <vector>

#include "mesmoc/acquisition.hpp"
#include "mesmoc/gp.hpp"
#include "mesmoc/moo.hpp"
#include "mesmoc/problem.hpp"
#include "mesmoc/rng.hpp"

namespace mesmoc {

struct LoopConfig {
  int initial_points = 5;    // N0: random evaluations before the first selection
  int max_evaluations = 60;  // total expensive-evaluation budget, N0 included
  int refit_every = 5;       // hyperparameter re-estimation period
  int num_front_samples = 10;  // S: Monte-Carlo Pareto-front samples
  int rff_features = 500;      // basis size of each posterior function draw
  NsgaConfig cheap;            // cheap multi-objective solver settings
  OptimizerConfig optimizer;   // acquisition maximizer settings
  GpFitConfig gp;
  uint64_t seed = 0;

  void validate() const;  // throws std::invalid_argument
};

// One row of the evaluation trace. Initialization rows carry NaN acquisition.
struct IterationRecord {
  int iteration = 0;  // 1-based evaluation index
  Vector x;
  OutputVector y;
  bool feasible = false;
  double acquisition = 0.0;
  double hypervolume = 0.0;  // feasible-front hypervolume after this evaluation
  double wall_ms = 0.0;
};

struct RunTrace {
  std::vector<IterationRecord> records;
  Dataset data;
  std::vector<Observation> final_front;  // feasible nondominated subset of data
};

// Incremental persistence hook, invoked once per completed record.
using RecordSink = std::function<void(const IterationRecord&)>;

// N0 uniform random points (distinct on grids), each evaluated.
Dataset initialize(Blackbox& fn, const ProblemSpec& spec, int n0, Rng& rng);

// The random initial design without evaluations.
std::vector<Vector> initial_design(const ProblemSpec& spec, int n0, Rng& rng);

// Feasible-front hypervolume of everything observed so far; 0 with no
// feasible point, NaN when no reference point is supplied (size 0).
double feasible_front_hypervolume(const Dataset& data, const Vector& reference);

// Feasible constraint-nondominated subset of the dataset.
std::vector<Observation> extract_front(const Dataset& data);

// Full optimization loop: random initialization, then per iteration refit or
// recondition the K+L models, sample S Pareto fronts, maximize the
// acquisition under the posterior-mean feasibility filter, evaluate, append.
// Evaluator exceptions propagate after all completed records reached `sink`.
RunTrace run(Blackbox& fn, const ProblemSpec& spec, const LoopConfig& cfg,
             const Vector& hv_reference, const RecordSink& sink = {});

}  // namespace mesmoc
