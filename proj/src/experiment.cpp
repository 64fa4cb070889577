#include "mesmoc/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>
#include <stdexcept>

#include "mesmoc/external.hpp"
#include "mesmoc/metrics.hpp"

namespace mesmoc {

namespace {

using Clock = std::chrono::steady_clock;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// JSON has no NaN literal; absent metrics are serialized as null.
std::string fmt_json(double v) { return std::isnan(v) ? "null" : fmt(v); }

std::string json_array(const std::vector<double>& values) {
  std::string out = "[";
  for (size_t i = 0; i < values.size(); ++i) {
    if (i) out += ", ";
    out += fmt_json(values[i]);
  }
  return out + "]";
}

std::string json_array(const Vector& values) {
  return json_array(std::vector<double>(values.data(), values.data() + values.size()));
}

double scored_hypervolume(const Dataset& data, const Vector& reference, bool strict) {
  if (reference.size() == 0) return std::numeric_limits<double>::quiet_NaN();
  if (strict) return feasible_front_hypervolume(data, reference);
  if (data.empty()) return 0.0;
  Matrix objectives(data.size(), reference.size());
  for (int i = 0; i < data.size(); ++i) objectives.row(i) = data[i].y.objectives.transpose();
  std::vector<int> front = nondominated_rows(objectives);
  Matrix kept(static_cast<Eigen::Index>(front.size()), reference.size());
  for (size_t i = 0; i < front.size(); ++i) {
    kept.row(static_cast<Eigen::Index>(i)) = objectives.row(front[i]);
  }
  return hypervolume(kept, reference).value;
}

}  // namespace

std::vector<uint64_t> ExperimentConfig::resolved_seeds() const {
  if (!seeds.empty()) return seeds;
  std::vector<uint64_t> out;
  for (int i = 0; i < repetitions; ++i) out.push_back(loop.seed + static_cast<uint64_t>(i));
  return out;
}

void ExperimentConfig::validate() const {
  if (problem.empty()) throw std::invalid_argument("experiment: no problem given");
  if (algorithm != "mesmoc" && algorithm != "random" && algorithm != "nsga2-direct") {
    throw std::invalid_argument("experiment: unknown algorithm '" + algorithm + "'");
  }
  if (repetitions < 1) throw std::invalid_argument("experiment: repetitions must be positive");
  loop.validate();
  const auto list = resolved_seeds();
  if (std::set<uint64_t>(list.begin(), list.end()).size() != list.size()) {
    throw std::invalid_argument("experiment: seeds must be distinct");
  }
  if (problem == "external") {
    if (external_command.empty()) throw std::invalid_argument("experiment: no external command");
    external_spec.validate();
  }
  if (direct_population < 4 || direct_population % 2 != 0) {
    throw std::invalid_argument("experiment: direct-baseline population must be even and >= 4");
  }
}

RunTrace baseline_random(Blackbox& fn, const ProblemSpec& spec, const LoopConfig& cfg,
                         const Vector& hv_reference, const RecordSink& sink) {
  spec.validate();
  cfg.validate();
  Rng master(cfg.seed);
  Rng stream = master.spawn(0);  // same stream as the loop's initial design

  RunTrace trace;
  int t = 0;
  for (const Vector& x : initial_design(spec, cfg.max_evaluations, stream)) {
    const auto start = Clock::now();
    OutputVector y = evaluate(fn, spec, x);
    trace.data.append(Observation{x, y});
    IterationRecord rec;
    rec.iteration = ++t;
    rec.x = x;
    rec.y = y;
    rec.feasible = is_feasible(y);
    rec.acquisition = std::numeric_limits<double>::quiet_NaN();
    rec.hypervolume = feasible_front_hypervolume(trace.data, hv_reference);
    rec.wall_ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
    if (sink) sink(rec);
    trace.records.push_back(std::move(rec));
  }
  trace.final_front = extract_front(trace.data);
  return trace;
}

RunTrace baseline_nsga2_direct(Blackbox& fn, const ProblemSpec& spec, const LoopConfig& cfg,
                               int population, const Vector& hv_reference,
                               const RecordSink& sink) {
  spec.validate();
  cfg.validate();
  Rng master(cfg.seed);
  Rng stream = master.spawn(5);

  RunTrace trace;
  int t = 0;
  BatchEvaluator record_and_evaluate = [&](const Matrix& X) {
    Matrix Y(X.rows(), spec.num_outputs());
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
      const auto start = Clock::now();
      const Vector x = X.row(i).transpose();
      OutputVector y = evaluate(fn, spec, x);
      trace.data.append(Observation{x, y});
      Y.row(i).head(spec.num_objectives) = y.objectives.transpose();
      Y.row(i).tail(spec.num_constraints) = y.constraints.transpose();
      IterationRecord rec;
      rec.iteration = ++t;
      rec.x = x;
      rec.y = y;
      rec.feasible = is_feasible(y);
      rec.acquisition = std::numeric_limits<double>::quiet_NaN();
      rec.hypervolume = feasible_front_hypervolume(trace.data, hv_reference);
      rec.wall_ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
      if (sink) sink(rec);
      trace.records.push_back(std::move(rec));
    }
    return Y;
  };

  NsgaConfig gcfg;  // canonical operator settings; only the budget is tuned
  gcfg.population = population;
  gcfg.generations = cfg.max_evaluations;  // budget cap terminates earlier
  gcfg.max_evaluations = cfg.max_evaluations;
  nsga2_population(spec, record_and_evaluate, gcfg, stream);
  trace.final_front = extract_front(trace.data);
  return trace;
}

Benchmark resolve_problem(const ExperimentConfig& cfg) {
  Benchmark bench;
  if (cfg.problem == "external") {
    bench.name = "external";
    bench.spec = cfg.external_spec;
    bench.evaluator = std::make_shared<ExternalEvaluator>(
        cfg.external_command, cfg.external_spec.num_objectives, cfg.external_spec.num_constraints);
    bench.strict_hv = true;
  } else {
    bench = make_benchmark(cfg.problem);
  }
  if (cfg.hv_reference.size() > 0) {
    if (cfg.hv_reference.size() != bench.spec.num_objectives) {
      throw std::invalid_argument("experiment: reference point must have one entry per objective");
    }
    bench.hv_reference = cfg.hv_reference;
  }
  return bench;
}

RunTrace run_algorithm(const ExperimentConfig& cfg, Benchmark& bench, uint64_t seed,
                       const Vector& hv_reference, const RecordSink& sink) {
  LoopConfig loop_cfg = cfg.loop;
  loop_cfg.seed = seed;
  if (cfg.algorithm == "mesmoc") {
    return run(*bench.evaluator, bench.spec, loop_cfg, hv_reference, sink);
  }
  if (cfg.algorithm == "random") {
    return baseline_random(*bench.evaluator, bench.spec, loop_cfg, hv_reference, sink);
  }
  if (cfg.algorithm == "nsga2-direct") {
    return baseline_nsga2_direct(*bench.evaluator, bench.spec, loop_cfg, cfg.direct_population,
                                 hv_reference, sink);
  }
  throw std::invalid_argument("experiment: unknown algorithm '" + cfg.algorithm + "'");
}

std::string trace_header(const ProblemSpec& spec) {
  std::string h = "iter";
  for (int j = 0; j < spec.dim; ++j) h += ",x_" + std::to_string(j);
  for (int j = 0; j < spec.num_objectives; ++j) h += ",f_" + std::to_string(j);
  for (int j = 0; j < spec.num_constraints; ++j) h += ",c_" + std::to_string(j);
  return h + ",feasible,acq,hv,wall_ms";
}

std::string trace_row(const IterationRecord& rec) {
  std::string row = std::to_string(rec.iteration);
  for (Eigen::Index j = 0; j < rec.x.size(); ++j) row += "," + fmt(rec.x[j]);
  for (Eigen::Index j = 0; j < rec.y.objectives.size(); ++j) row += "," + fmt(rec.y.objectives[j]);
  for (Eigen::Index j = 0; j < rec.y.constraints.size(); ++j) {
    row += "," + fmt(rec.y.constraints[j]);
  }
  row += rec.feasible ? ",1" : ",0";
  row += "," + fmt(rec.acquisition);
  row += "," + fmt(rec.hypervolume);
  row += "," + fmt(rec.wall_ms);
  return row;
}

ExperimentSummary run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  Benchmark bench = resolve_problem(cfg);  // applies any reference override
  const Vector reference = bench.hv_reference;
  const std::vector<uint64_t> seeds = cfg.resolved_seeds();

  std::filesystem::create_directories(cfg.output_dir);

  ExperimentSummary summary;
  summary.problem = bench.name;
  summary.algorithm = cfg.algorithm;
  summary.seeds = seeds;
  summary.iterations = cfg.loop.max_evaluations;

  Matrix hv_runs(static_cast<Eigen::Index>(seeds.size()), cfg.loop.max_evaluations);
  for (size_t r = 0; r < seeds.size(); ++r) {
    const std::string base = "trace_" + bench.name + "_" + cfg.algorithm + "_seed" +
                             std::to_string(seeds[r]) + ".csv";
    const std::string path = (std::filesystem::path(cfg.output_dir) / base).string();
    std::ofstream csv(path);
    if (!csv) throw std::runtime_error("experiment: cannot open " + path);
    csv << trace_header(bench.spec) << "\n" << std::flush;
    RecordSink sink = [&csv](const IterationRecord& rec) {
      csv << trace_row(rec) << "\n" << std::flush;
    };

    RunTrace trace = run_algorithm(cfg, bench, seeds[r], reference, sink);
    summary.trace_files.push_back(path);

    for (size_t i = 0; i < trace.records.size(); ++i) {
      hv_runs(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(i)) =
          trace.records[i].hypervolume;
    }
    summary.final_hv.push_back(trace.records.back().hypervolume);
    summary.final_hv_scored.push_back(scored_hypervolume(trace.data, reference, bench.strict_hv));

    const size_t skip = std::min<size_t>(
        trace.records.size(), static_cast<size_t>(cfg.algorithm == "nsga2-direct"
                                                      ? cfg.direct_population
                                                      : cfg.loop.initial_points));
    std::vector<bool> flags;
    for (size_t i = skip; i < trace.records.size(); ++i) {
      flags.push_back(trace.records[i].feasible);
    }
    summary.feasible_fraction.push_back(feasible_fraction(flags));
  }

  summary.hv_mean = hv_runs.colwise().mean().transpose();
  if (seeds.size() > 1) {
    Matrix centered = hv_runs.rowwise() - summary.hv_mean.transpose();
    summary.hv_std = (centered.array().square().colwise().sum() /
                      (static_cast<double>(seeds.size()) - 1.0))
                         .sqrt()
                         .transpose()
                         .matrix();
  } else {
    summary.hv_std = Vector::Zero(cfg.loop.max_evaluations);
  }

  const std::string summary_base = "summary_" + bench.name + "_" + cfg.algorithm + ".json";
  const std::string summary_path =
      (std::filesystem::path(cfg.output_dir) / summary_base).string();
  std::ofstream json(summary_path);
  if (!json) throw std::runtime_error("experiment: cannot open " + summary_path);
  json << "{\n";
  json << "  \"problem\": \"" << bench.name << "\",\n";
  json << "  \"algorithm\": \"" << cfg.algorithm << "\",\n";
  json << "  \"seeds\": [";
  for (size_t i = 0; i < seeds.size(); ++i) json << (i ? ", " : "") << seeds[i];
  json << "],\n";
  json << "  \"iterations\": " << summary.iterations << ",\n";
  json << "  \"reference\": " << json_array(reference) << ",\n";
  json << "  \"hv_mean\": " << json_array(summary.hv_mean) << ",\n";
  json << "  \"hv_std\": " << json_array(summary.hv_std) << ",\n";
  json << "  \"final_hv\": " << json_array(summary.final_hv) << ",\n";
  json << "  \"final_hv_scored\": " << json_array(summary.final_hv_scored) << ",\n";
  json << "  \"feasible_fraction\": " << json_array(summary.feasible_fraction) << ",\n";
  json << "  \"traces\": [";
  for (size_t i = 0; i < summary.trace_files.size(); ++i) {
    // Base names keep the summary byte-identical across output directories.
    json << (i ? ", " : "") << "\""
         << std::filesystem::path(summary.trace_files[i]).filename().string() << "\"";
  }
  json << "]\n}\n";
  summary.summary_file = summary_path;
  return summary;
}

}  // namespace mesmoc
