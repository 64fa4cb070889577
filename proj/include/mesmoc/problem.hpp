#pragma once

#include <Eigen/Dense>
#include <atomic>
#include <stdexcept>
#include <vector>

namespace mesmoc {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

enum class Sense { maximize, minimize };

// Contract of the optimization problem: input domain, output counts, and
// the senses of the raw evaluator's objectives. Internally everything is
// kept in canonical form: all objectives maximized, constraints feasible
// when >= 0; raw minimization senses are negated at the evaluator boundary.
struct ProblemSpec {
  int dim = 0;
  Vector lower;  // continuous bounds, size dim
  Vector upper;
  Matrix grid;  // optional explicit candidate set, one point per row; empty => continuous
  int num_objectives = 0;   // K >= 2
  int num_constraints = 0;  // L >= 0
  std::vector<Sense> objective_senses;

  bool discrete() const { return grid.rows() > 0; }
  int num_outputs() const { return num_objectives + num_constraints; }
  bool in_domain(const Vector& x) const;
  void validate() const;  // throws std::invalid_argument on a violated invariant
};

struct OutputVector {
  Vector objectives;   // canonical maximization form, size K
  Vector constraints;  // size L, feasible iff every entry >= 0
};

bool is_feasible(const OutputVector& y);

// Deb's total constraint violation, sum_i max(0, -c_i).
double total_violation(const OutputVector& y);

bool pareto_dominates(const OutputVector& a, const OutputVector& b);

// Constraint-domination: feasible beats infeasible; two infeasible points
// compare by total violation; two feasible points by Pareto dominance.
bool constraint_dominates(const OutputVector& a, const OutputVector& b);

// Negates minimize-sense entries; applying it twice restores the input.
Vector canonicalize_objectives(const Vector& raw, const std::vector<Sense>& senses);

struct Observation {
  Vector x;
  OutputVector y;
};

// Append-only evaluation history.
class Dataset {
 public:
  void append(Observation obs) { observations_.push_back(std::move(obs)); }
  int size() const { return static_cast<int>(observations_.size()); }
  bool empty() const { return observations_.empty(); }
  const Observation& operator[](int i) const { return observations_[static_cast<size_t>(i)]; }
  const std::vector<Observation>& observations() const { return observations_; }

  bool contains_input(const Vector& x) const;

  // n x d matrix of inputs, one row per observation.
  Matrix inputs() const;

  // Targets for one output: indices 0..K-1 are objectives, K..K+L-1 constraints.
  Vector targets(int output_index) const;

 private:
  std::vector<Observation> observations_;
};

// Raw black-box evaluator. Implementations return objectives in their native
// senses and constraints already in the C_i >= 0 convention.
class Blackbox {
 public:
  virtual ~Blackbox() = default;
  virtual OutputVector evaluate_raw(const Vector& x) = 0;
  long evaluations() const { return count_.load(); }
  void count_one() { count_.fetch_add(1); }

 private:
  std::atomic<long> count_{0};
};

// Bounds-checks x, evaluates, canonicalizes senses, bumps the counter.
// Throws std::invalid_argument when x is outside the domain and
// std::runtime_error (with the raw payload) on evaluator failure.
OutputVector evaluate(Blackbox& fn, const ProblemSpec& spec, const Vector& x);

}  // namespace mesmoc
