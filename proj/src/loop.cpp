#include "mesmoc/loop.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "mesmoc/metrics.hpp"

namespace mesmoc {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

IterationRecord make_record(int iteration, const Vector& x, const OutputVector& y,
                            double acquisition, const Dataset& data, const Vector& hv_ref,
                            Clock::time_point start) {
  IterationRecord rec;
  rec.iteration = iteration;
  rec.x = x;
  rec.y = y;
  rec.feasible = is_feasible(y);
  rec.acquisition = acquisition;
  rec.hypervolume = feasible_front_hypervolume(data, hv_ref);
  rec.wall_ms = elapsed_ms(start);
  return rec;
}

}  // namespace

void LoopConfig::validate() const {
  if (initial_points < 2) throw std::invalid_argument("loop: need at least two initial points");
  if (max_evaluations < initial_points) {
    throw std::invalid_argument("loop: evaluation budget below the initial design size");
  }
  if (refit_every < 1) throw std::invalid_argument("loop: refit period must be positive");
  if (num_front_samples < 1) throw std::invalid_argument("loop: need at least one front sample");
  if (rff_features < 1) throw std::invalid_argument("loop: need at least one basis feature");
}

std::vector<Vector> initial_design(const ProblemSpec& spec, int n0, Rng& rng) {
  spec.validate();
  if (n0 < 2) throw std::invalid_argument("loop: need at least two initial points");
  std::vector<Vector> design;
  design.reserve(static_cast<size_t>(n0));
  if (spec.discrete()) {
    const Eigen::Index g = spec.grid.rows();
    if (g < n0) throw std::invalid_argument("loop: grid smaller than the initial design");
    // Partial Fisher-Yates for distinct indices.
    std::vector<Eigen::Index> idx(static_cast<size_t>(g));
    for (Eigen::Index i = 0; i < g; ++i) idx[static_cast<size_t>(i)] = i;
    for (int i = 0; i < n0; ++i) {
      const uint64_t j = static_cast<uint64_t>(i) +
                         rng.uniform_int(static_cast<uint64_t>(g) - static_cast<uint64_t>(i));
      std::swap(idx[static_cast<size_t>(i)], idx[static_cast<size_t>(j)]);
      design.push_back(spec.grid.row(idx[static_cast<size_t>(i)]).transpose());
    }
  } else {
    for (int i = 0; i < n0; ++i) {
      Vector x(spec.dim);
      for (int j = 0; j < spec.dim; ++j) x[j] = rng.uniform(spec.lower[j], spec.upper[j]);
      design.push_back(std::move(x));
    }
  }
  return design;
}

Dataset initialize(Blackbox& fn, const ProblemSpec& spec, int n0, Rng& rng) {
  Dataset data;
  for (const Vector& x : initial_design(spec, n0, rng)) {
    data.append(Observation{x, evaluate(fn, spec, x)});
  }
  return data;
}

double feasible_front_hypervolume(const Dataset& data, const Vector& reference) {
  if (reference.size() == 0) return std::numeric_limits<double>::quiet_NaN();
  std::vector<OutputVector> outputs;
  outputs.reserve(static_cast<size_t>(data.size()));
  for (const auto& obs : data.observations()) outputs.push_back(obs.y);
  const std::vector<int> front = pareto_filter_indices(outputs);
  if (front.empty()) return 0.0;
  Matrix objectives(static_cast<Eigen::Index>(front.size()), reference.size());
  for (size_t i = 0; i < front.size(); ++i) {
    objectives.row(static_cast<Eigen::Index>(i)) =
        outputs[static_cast<size_t>(front[i])].objectives.transpose();
  }
  return hypervolume(objectives, reference).value;
}

std::vector<Observation> extract_front(const Dataset& data) {
  std::vector<OutputVector> outputs;
  outputs.reserve(static_cast<size_t>(data.size()));
  for (const auto& obs : data.observations()) outputs.push_back(obs.y);
  std::vector<Observation> front;
  for (int idx : pareto_filter_indices(outputs)) front.push_back(data[idx]);
  return front;
}

RunTrace run(Blackbox& fn, const ProblemSpec& spec, const LoopConfig& cfg,
             const Vector& hv_reference, const RecordSink& sink) {
  spec.validate();
  cfg.validate();
  Rng master(cfg.seed);

  RunTrace trace;
  auto record = [&](IterationRecord rec) {
    if (sink) sink(rec);
    trace.records.push_back(std::move(rec));
  };

  Rng init_rng = master.spawn(0);
  int t = 0;
  for (const Vector& x : initial_design(spec, cfg.initial_points, init_rng)) {
    const auto start = Clock::now();
    OutputVector y = evaluate(fn, spec, x);
    trace.data.append(Observation{x, y});
    record(make_record(++t, x, y, std::numeric_limits<double>::quiet_NaN(), trace.data,
                       hv_reference, start));
  }

  std::vector<GpModel> models;
  while (t < cfg.max_evaluations) {
    const auto start = Clock::now();
    const int step = t - cfg.initial_points;  // 0-based optimization step
    if (step % cfg.refit_every == 0 || models.empty()) {
      Rng fit_rng = master.spawn(1, static_cast<uint64_t>(t));
      models.clear();
      for (int j = 0; j < spec.num_outputs(); ++j) {
        models.push_back(GpModel::fit(trace.data, j, cfg.gp, fit_rng));
      }
    } else {
      for (int j = 0; j < spec.num_outputs(); ++j) {
        models[static_cast<size_t>(j)] = models[static_cast<size_t>(j)].reconditioned(trace.data, j);
      }
    }

    AcquisitionState state;
    state.models = models;
    state.num_objectives = spec.num_objectives;
    state.num_constraints = spec.num_constraints;
    Rng sample_rng = master.spawn(2, static_cast<uint64_t>(t));
    state.maxima_samples = sample_maxima(state.models, spec, cfg.num_front_samples,
                                         cfg.rff_features, cfg.cheap, sample_rng);

    Rng opt_rng = master.spawn(3, static_cast<uint64_t>(t));
    AcquisitionChoice choice = optimize_acquisition(state, spec, cfg.optimizer, opt_rng);

    OutputVector y = evaluate(fn, spec, choice.x);
    trace.data.append(Observation{choice.x, y});
    record(make_record(++t, choice.x, y, choice.acquisition, trace.data, hv_reference, start));
  }

  trace.final_front = extract_front(trace.data);
  return trace;
}

}  // namespace mesmoc
