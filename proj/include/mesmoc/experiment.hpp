#pragma once

#include <string>
#include <vector>

#include "mesmoc/benchmarks.hpp"
#include "mesmoc/loop.hpp"
#include "mesmoc/problem.hpp"

namespace mesmoc {

struct ExperimentConfig {
  std::string problem;            // registry name, or "external"
  std::string external_command;   // required when problem == "external"
  ProblemSpec external_spec;      // domain contract of the external evaluator
  std::string algorithm = "mesmoc";  // mesmoc | random | nsga2-direct
  LoopConfig loop;
  std::vector<uint64_t> seeds;  // empty => loop.seed, loop.seed+1, ... (repetitions entries)
  int repetitions = 1;
  std::string output_dir = ".";
  int direct_population = 10;  // population of the nsga2-direct baseline
  Vector hv_reference;         // overrides the benchmark default when nonempty

  std::vector<uint64_t> resolved_seeds() const;
  void validate() const;  // throws std::invalid_argument
};

// Uniform-random selection with the same trace schema (distinct points on
// grids). Acquisition column is NaN throughout.
RunTrace baseline_random(Blackbox& fn, const ProblemSpec& spec, const LoopConfig& cfg,
                         const Vector& hv_reference, const RecordSink& sink = {});

// NSGA-II applied directly to the expensive evaluator, budgeted to exactly
// cfg.max_evaluations expensive calls; every evaluation is logged in order.
RunTrace baseline_nsga2_direct(Blackbox& fn, const ProblemSpec& spec, const LoopConfig& cfg,
                               int population, const Vector& hv_reference,
                               const RecordSink& sink = {});

// Builds the named benchmark or wraps the external command.
Benchmark resolve_problem(const ExperimentConfig& cfg);

// Dispatches on cfg.algorithm with a fresh per-run seed.
RunTrace run_algorithm(const ExperimentConfig& cfg, Benchmark& bench, uint64_t seed,
                       const Vector& hv_reference, const RecordSink& sink = {});

struct ExperimentSummary {
  std::string problem;
  std::string algorithm;
  std::vector<uint64_t> seeds;
  int iterations = 0;
  Vector hv_mean;                 // per iteration, across seeds
  Vector hv_std;                  // sample standard deviation (0 for one seed)
  std::vector<double> final_hv;   // per seed: feasible-front hypervolume
  std::vector<double> final_hv_scored;  // per seed: strict/lenient scoring rule
  std::vector<double> feasible_fraction;  // per seed, post-initialization rows
  std::vector<std::string> trace_files;
  std::string summary_file;
};

// CSV schema: iter,x_0..x_{d-1},f_0..f_{K-1},c_0..c_{L-1},feasible,acq,hv,wall_ms
// with canonical (maximized) objective values and %.17g floats.
std::string trace_header(const ProblemSpec& spec);
std::string trace_row(const IterationRecord& rec);

// Runs every seed, writes one trace CSV per run and one summary JSON.
// Evaluator failures propagate after flushing partial traces.
ExperimentSummary run_experiment(const ExperimentConfig& cfg);

}  // namespace mesmoc
