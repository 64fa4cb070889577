#include "mesmoc/moo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace mesmoc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

OutputVector split_outputs(const Vector& row, int num_objectives) {
  OutputVector y;
  y.objectives = row.head(num_objectives);
  y.constraints = row.tail(row.size() - num_objectives);
  return y;
}

// Binary tournament on (rank, crowding); ties broken by coin flip.
const Individual& tournament(const std::vector<Individual>& pop, Rng& rng) {
  const Individual& a = pop[rng.uniform_int(pop.size())];
  const Individual& b = pop[rng.uniform_int(pop.size())];
  if (a.rank != b.rank) return a.rank < b.rank ? a : b;
  if (a.crowding != b.crowding) return a.crowding > b.crowding ? a : b;
  return rng.uniform() < 0.5 ? a : b;
}

// Bounded simulated binary crossover (Deb's reference formulation).
void sbx(const Vector& p1, const Vector& p2, const Vector& lo, const Vector& hi, double eta,
         Rng& rng, Vector& c1, Vector& c2) {
  c1 = p1;
  c2 = p2;
  for (Eigen::Index i = 0; i < p1.size(); ++i) {
    if (rng.uniform() > 0.5) continue;
    double y1 = std::min(p1[i], p2[i]);
    double y2 = std::max(p1[i], p2[i]);
    if (y2 - y1 < 1e-14) continue;
    const double u = rng.uniform();
    auto child = [&](double bound_gap, double sign) {
      double beta = 1.0 + 2.0 * bound_gap / (y2 - y1);
      double alpha = 2.0 - std::pow(beta, -(eta + 1.0));
      double betaq = u <= 1.0 / alpha ? std::pow(u * alpha, 1.0 / (eta + 1.0))
                                      : std::pow(1.0 / (2.0 - u * alpha), 1.0 / (eta + 1.0));
      return 0.5 * ((y1 + y2) + sign * betaq * (y2 - y1));
    };
    double v1 = std::clamp(child(y1 - lo[i], -1.0), lo[i], hi[i]);
    double v2 = std::clamp(child(hi[i] - y2, +1.0), lo[i], hi[i]);
    if (rng.uniform() < 0.5) std::swap(v1, v2);
    c1[i] = v1;
    c2[i] = v2;
  }
}

// Bounded polynomial mutation.
void polynomial_mutation(Vector& x, const Vector& lo, const Vector& hi, double eta, double prob,
                         Rng& rng) {
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (rng.uniform() > prob) continue;
    const double span = hi[i] - lo[i];
    if (span <= 0.0) continue;
    const double u = rng.uniform();
    const double d1 = (x[i] - lo[i]) / span;
    const double d2 = (hi[i] - x[i]) / span;
    double dq;
    if (u <= 0.5) {
      dq = std::pow(2.0 * u + (1.0 - 2.0 * u) * std::pow(1.0 - d1, eta + 1.0),
                    1.0 / (eta + 1.0)) -
           1.0;
    } else {
      dq = 1.0 - std::pow(2.0 * (1.0 - u) + (2.0 * u - 1.0) * std::pow(1.0 - d2, eta + 1.0),
                          1.0 / (eta + 1.0));
    }
    x[i] = std::clamp(x[i] + dq * span, lo[i], hi[i]);
  }
}

void evaluate_batch(const BatchEvaluator& evaluate, const ProblemSpec& spec,
                    std::vector<Individual>& batch) {
  if (batch.empty()) return;
  Matrix X(batch.size(), spec.dim);
  for (size_t i = 0; i < batch.size(); ++i) X.row(i) = batch[i].x.transpose();
  Matrix Y = evaluate(X);
  if (Y.rows() != X.rows() || Y.cols() != spec.num_outputs()) {
    throw std::runtime_error("nsga2: evaluator returned a matrix of the wrong shape");
  }
  for (size_t i = 0; i < batch.size(); ++i) {
    batch[i].y = split_outputs(Y.row(static_cast<Eigen::Index>(i)).transpose(),
                               spec.num_objectives);
    batch[i].violation = total_violation(batch[i].y);
  }
}

// Survivor selection: fill front by front, last partial front by crowding.
std::vector<Individual> select_survivors(std::vector<Individual>& pool, int target) {
  auto fronts = non_dominated_sort(pool);
  for (const auto& front : fronts) crowding_distance(pool, front);
  std::vector<Individual> next;
  next.reserve(static_cast<size_t>(target));
  for (const auto& front : fronts) {
    if (static_cast<int>(next.size() + front.size()) <= target) {
      for (int idx : front) next.push_back(pool[static_cast<size_t>(idx)]);
    } else {
      std::vector<int> sorted = front;
      std::stable_sort(sorted.begin(), sorted.end(), [&](int a, int b) {
        return pool[static_cast<size_t>(a)].crowding > pool[static_cast<size_t>(b)].crowding;
      });
      for (int idx : sorted) {
        if (static_cast<int>(next.size()) >= target) break;
        next.push_back(pool[static_cast<size_t>(idx)]);
      }
    }
    if (static_cast<int>(next.size()) >= target) break;
  }
  // Re-rank the survivors so tournament selection sees fresh metadata.
  auto survivor_fronts = non_dominated_sort(next);
  for (const auto& front : survivor_fronts) crowding_distance(next, front);
  return next;
}

}  // namespace

std::vector<std::vector<int>> non_dominated_sort(std::vector<Individual>& pop) {
  const int n = static_cast<int>(pop.size());
  if (n == 0) throw std::invalid_argument("non_dominated_sort: empty population");
  std::vector<std::vector<int>> dominated(static_cast<size_t>(n));
  std::vector<int> count(static_cast<size_t>(n), 0);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const auto& a = pop[static_cast<size_t>(i)];
      const auto& b = pop[static_cast<size_t>(j)];
      if (constraint_dominates(a.y, b.y)) {
        dominated[static_cast<size_t>(i)].push_back(j);
        ++count[static_cast<size_t>(j)];
      } else if (constraint_dominates(b.y, a.y)) {
        dominated[static_cast<size_t>(j)].push_back(i);
        ++count[static_cast<size_t>(i)];
      }
    }
  }
  std::vector<std::vector<int>> fronts;
  std::vector<int> current;
  for (int i = 0; i < n; ++i) {
    if (count[static_cast<size_t>(i)] == 0) current.push_back(i);
  }
  int rank = 0;
  while (!current.empty()) {
    for (int idx : current) pop[static_cast<size_t>(idx)].rank = rank;
    fronts.push_back(current);
    std::vector<int> next;
    for (int idx : current) {
      for (int j : dominated[static_cast<size_t>(idx)]) {
        if (--count[static_cast<size_t>(j)] == 0) next.push_back(j);
      }
    }
    current = std::move(next);
    ++rank;
  }
  return fronts;
}

void crowding_distance(std::vector<Individual>& pop, const std::vector<int>& front) {
  const int m = static_cast<int>(front.size());
  if (m == 0) return;
  for (int idx : front) pop[static_cast<size_t>(idx)].crowding = 0.0;
  if (m <= 2) {
    for (int idx : front) pop[static_cast<size_t>(idx)].crowding = kInf;
    return;
  }
  const int k_objs = static_cast<int>(pop[static_cast<size_t>(front[0])].y.objectives.size());
  for (int k = 0; k < k_objs; ++k) {
    // Resort from the front's own order every time: with tied values the
    // stable sort must not inherit the previous objective's ordering.
    std::vector<int> order = front;
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return pop[static_cast<size_t>(a)].y.objectives[k] <
             pop[static_cast<size_t>(b)].y.objectives[k];
    });
    const double low = pop[static_cast<size_t>(order.front())].y.objectives[k];
    const double high = pop[static_cast<size_t>(order.back())].y.objectives[k];
    pop[static_cast<size_t>(order.front())].crowding = kInf;
    pop[static_cast<size_t>(order.back())].crowding = kInf;
    const double range = high - low;
    if (range <= 0.0) continue;  // degenerate objective contributes nothing
    for (int i = 1; i + 1 < m; ++i) {
      auto& ind = pop[static_cast<size_t>(order[static_cast<size_t>(i)])];
      if (ind.crowding == kInf) continue;
      const double gap = pop[static_cast<size_t>(order[static_cast<size_t>(i + 1)])].y.objectives[k] -
                         pop[static_cast<size_t>(order[static_cast<size_t>(i - 1)])].y.objectives[k];
      ind.crowding += gap / range;
    }
  }
}

std::vector<Individual> nsga2_population(const ProblemSpec& spec, const BatchEvaluator& evaluate,
                                         const NsgaConfig& cfg, Rng& rng) {
  spec.validate();
  if (cfg.population < 4 || cfg.population % 2 != 0) {
    throw std::invalid_argument("nsga2: population must be even and at least 4");
  }
  if (cfg.generations < 1) throw std::invalid_argument("nsga2: need at least one generation");
  const bool discrete = spec.discrete();
  const double mut_prob =
      cfg.mutation_prob >= 0.0 ? cfg.mutation_prob : 1.0 / static_cast<double>(spec.dim);
  long remaining = cfg.max_evaluations >= 0 ? cfg.max_evaluations
                                            : std::numeric_limits<long>::max();

  auto random_individual = [&]() {
    Individual ind;
    if (discrete) {
      ind.grid_index = static_cast<int>(rng.uniform_int(static_cast<uint64_t>(spec.grid.rows())));
      ind.x = spec.grid.row(ind.grid_index).transpose();
    } else {
      ind.x.resize(spec.dim);
      for (int i = 0; i < spec.dim; ++i) ind.x[i] = rng.uniform(spec.lower[i], spec.upper[i]);
    }
    return ind;
  };

  std::vector<Individual> pop;
  const int init_size = static_cast<int>(std::min<long>(cfg.population, remaining));
  if (init_size < 1) throw std::invalid_argument("nsga2: evaluation budget allows no points");
  for (int i = 0; i < init_size; ++i) pop.push_back(random_individual());
  evaluate_batch(evaluate, spec, pop);
  remaining -= init_size;
  {
    auto fronts = non_dominated_sort(pop);
    for (const auto& front : fronts) crowding_distance(pop, front);
  }
  if (cfg.on_generation) cfg.on_generation(0, pop);

  for (int gen = 1; gen <= cfg.generations && remaining > 0; ++gen) {
    std::vector<Individual> offspring;
    offspring.reserve(static_cast<size_t>(cfg.population));
    while (static_cast<int>(offspring.size()) < cfg.population) {
      const Individual& p1 = tournament(pop, rng);
      const Individual& p2 = tournament(pop, rng);
      Individual c1, c2;
      if (discrete) {
        c1.grid_index = p1.grid_index;
        c2.grid_index = p2.grid_index;
        if (rng.uniform() < cfg.crossover_prob && rng.uniform() < 0.5) {
          std::swap(c1.grid_index, c2.grid_index);
        }
        for (Individual* c : {&c1, &c2}) {
          if (rng.uniform() < mut_prob) {
            c->grid_index =
                static_cast<int>(rng.uniform_int(static_cast<uint64_t>(spec.grid.rows())));
          }
          c->x = spec.grid.row(c->grid_index).transpose();
        }
      } else {
        if (rng.uniform() < cfg.crossover_prob) {
          sbx(p1.x, p2.x, spec.lower, spec.upper, cfg.crossover_eta, rng, c1.x, c2.x);
        } else {
          c1.x = p1.x;
          c2.x = p2.x;
        }
        polynomial_mutation(c1.x, spec.lower, spec.upper, cfg.mutation_eta, mut_prob, rng);
        polynomial_mutation(c2.x, spec.lower, spec.upper, cfg.mutation_eta, mut_prob, rng);
      }
      offspring.push_back(std::move(c1));
      if (static_cast<int>(offspring.size()) < cfg.population) offspring.push_back(std::move(c2));
    }
    if (static_cast<long>(offspring.size()) > remaining) {
      offspring.resize(static_cast<size_t>(remaining));
    }
    evaluate_batch(evaluate, spec, offspring);
    remaining -= static_cast<long>(offspring.size());

    std::vector<Individual> pool = pop;
    pool.insert(pool.end(), std::make_move_iterator(offspring.begin()),
                std::make_move_iterator(offspring.end()));
    pop = select_survivors(pool, static_cast<int>(pop.size()));
    if (cfg.on_generation) cfg.on_generation(gen, pop);
  }
  return pop;
}

ParetoFrontSample front_from_population(std::vector<Individual> pop, int num_objectives) {
  auto fronts = non_dominated_sort(pop);
  const auto& best = fronts.front();

  std::vector<int> kept;
  for (int idx : best) {
    const auto& cand = pop[static_cast<size_t>(idx)];
    bool duplicate = false;
    for (int seen : kept) {
      const auto& other = pop[static_cast<size_t>(seen)];
      if ((cand.y.objectives.array() == other.y.objectives.array()).all() &&
          (cand.y.constraints.array() == other.y.constraints.array()).all()) {
        duplicate = true;
        break;
      }
    }
    if (!duplicate) kept.push_back(idx);
  }

  const int m = static_cast<int>(kept.size());
  const int d = static_cast<int>(pop.front().x.size());
  const int width = num_objectives + static_cast<int>(pop.front().y.constraints.size());
  ParetoFrontSample sample;
  sample.inputs.resize(m, d);
  sample.points.resize(m, width);
  sample.feasible = true;
  for (int i = 0; i < m; ++i) {
    const auto& ind = pop[static_cast<size_t>(kept[static_cast<size_t>(i)])];
    sample.inputs.row(i) = ind.x.transpose();
    sample.points.row(i).head(num_objectives) = ind.y.objectives.transpose();
    sample.points.row(i).tail(width - num_objectives) = ind.y.constraints.transpose();
    sample.feasible = sample.feasible && is_feasible(ind.y);
  }
  sample.maxima = sample.points.colwise().maxCoeff().transpose();
  return sample;
}

ParetoFrontSample nsga2(const std::vector<SampledFunction>& objectives,
                        const std::vector<SampledFunction>& constraints, const ProblemSpec& spec,
                        const NsgaConfig& cfg, Rng& rng) {
  const int k = static_cast<int>(objectives.size());
  const int l = static_cast<int>(constraints.size());
  if (k != spec.num_objectives || l != spec.num_constraints) {
    throw std::invalid_argument("nsga2: sampled function counts disagree with the problem");
  }
  BatchEvaluator evaluate = [&](const Matrix& X) {
    Matrix Y(X.rows(), k + l);
    for (int j = 0; j < k; ++j) Y.col(j) = objectives[static_cast<size_t>(j)].at(X);
    for (int i = 0; i < l; ++i) Y.col(k + i) = constraints[static_cast<size_t>(i)].at(X);
    return Y;
  };
  auto pop = nsga2_population(spec, evaluate, cfg, rng);
  return front_from_population(std::move(pop), spec.num_objectives);
}

std::vector<int> pareto_filter_indices(const std::vector<OutputVector>& points) {
  std::vector<int> feasible;
  for (int i = 0; i < static_cast<int>(points.size()); ++i) {
    if (is_feasible(points[static_cast<size_t>(i)])) feasible.push_back(i);
  }
  std::vector<int> kept;
  for (int i : feasible) {
    bool dominated = false;
    for (int j : feasible) {
      if (j != i && pareto_dominates(points[static_cast<size_t>(j)], points[static_cast<size_t>(i)])) {
        dominated = true;
        break;
      }
    }
    if (!dominated) kept.push_back(i);
  }
  return kept;
}

std::vector<OutputVector> pareto_filter(const std::vector<OutputVector>& points) {
  std::vector<OutputVector> out;
  for (int idx : pareto_filter_indices(points)) out.push_back(points[static_cast<size_t>(idx)]);
  return out;
}

}  // namespace mesmoc
