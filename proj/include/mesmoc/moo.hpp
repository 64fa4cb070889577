#pragma once

#include <functional>
#include <vector>

#include "mesmoc/gp.hpp"
#include "mesmoc/problem.hpp"
#include "mesmoc/rng.hpp"

namespace mesmoc {

struct Individual {
  Vector x;            // point in the raw input space
  int grid_index = -1; // genome for discrete spaces, -1 for continuous
  OutputVector y;
  double violation = 0.0;
  int rank = -1;
  double crowding = 0.0;
};

// One sampled Pareto front: nondominated points of a cheap multi-objective
// solve, with the per-output maxima used by the acquisition function.
struct ParetoFrontSample {
  Matrix inputs;  // m x d
  Matrix points;  // m x (K+L), objectives then constraints, canonical form
  Vector maxima;  // K+L column-wise maxima over points
  bool feasible = true;  // false when the solve never found a feasible point
};

struct NsgaConfig {
  int population = 100;
  int generations = 100;
  double crossover_prob = 0.9;
  double crossover_eta = 15.0;
  double mutation_eta = 20.0;
  double mutation_prob = -1.0;  // < 0 selects the 1/d default
  // Hard cap on evaluator calls (initial population included); < 0 = no cap.
  // The final generation is truncated so the cap is hit exactly.
  long max_evaluations = -1;
  // Observed after initialization (generation 0) and each survivor selection.
  std::function<void(int generation, const std::vector<Individual>&)> on_generation;
};

// Batched canonical evaluator: rows of X are points, rows of the result are
// the K maximized objectives followed by the L constraints.
using BatchEvaluator = std::function<Matrix(const Matrix&)>;

// Deb's fast non-dominated sort under constraint-domination. Assigns ranks
// in place and returns the fronts as index lists, best first.
std::vector<std::vector<int>> non_dominated_sort(std::vector<Individual>& pop);

// Assigns crowding distances to the members of one front (objectives only).
void crowding_distance(std::vector<Individual>& pop, const std::vector<int>& front);

// Core constrained NSGA-II; returns the final population with ranks and
// crowding assigned.
std::vector<Individual> nsga2_population(const ProblemSpec& spec, const BatchEvaluator& evaluate,
                                         const NsgaConfig& cfg, Rng& rng);

// Extracts the rank-0 front (deduplicated in output space) with maxima.
ParetoFrontSample front_from_population(std::vector<Individual> pop, int num_objectives);

// Cheap multi-objective solve over one posterior sample per output.
ParetoFrontSample nsga2(const std::vector<SampledFunction>& objectives,
                        const std::vector<SampledFunction>& constraints, const ProblemSpec& spec,
                        const NsgaConfig& cfg, Rng& rng);

// Constraint-nondominated feasible subset; empty when nothing is feasible.
std::vector<int> pareto_filter_indices(const std::vector<OutputVector>& points);
std::vector<OutputVector> pareto_filter(const std::vector<OutputVector>& points);

}  // namespace mesmoc
