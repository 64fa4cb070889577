#include "mesmoc/problem.hpp"

#include <cmath>
#include <sstream>

namespace mesmoc {

bool ProblemSpec::in_domain(const Vector& x) const {
  if (x.size() != dim) return false;
  if (!x.allFinite()) return false;
  if (discrete()) {
    for (Eigen::Index r = 0; r < grid.rows(); ++r) {
      if (grid.row(r).transpose() == x) return true;
    }
    return false;
  }
  return (x.array() >= lower.array()).all() && (x.array() <= upper.array()).all();
}

void ProblemSpec::validate() const {
  if (dim <= 0) throw std::invalid_argument("ProblemSpec: dim must be positive");
  if (num_objectives < 2) throw std::invalid_argument("ProblemSpec: need at least two objectives");
  if (num_constraints < 0) throw std::invalid_argument("ProblemSpec: negative constraint count");
  if (static_cast<int>(objective_senses.size()) != num_objectives)
    throw std::invalid_argument("ProblemSpec: one sense per objective required");
  if (discrete()) {
    if (grid.cols() != dim) throw std::invalid_argument("ProblemSpec: grid column count != dim");
  } else {
    if (lower.size() != dim || upper.size() != dim)
      throw std::invalid_argument("ProblemSpec: bounds must have size dim");
    if (!((lower.array() < upper.array()).all()))
      throw std::invalid_argument("ProblemSpec: lower < upper required per dimension");
  }
}

bool is_feasible(const OutputVector& y) {
  return (y.constraints.array() >= 0.0).all();  // vacuously true when L = 0
}

double total_violation(const OutputVector& y) {
  return (-y.constraints.array()).max(0.0).sum();
}

bool pareto_dominates(const OutputVector& a, const OutputVector& b) {
  if (a.objectives.size() != b.objectives.size())
    throw std::invalid_argument("pareto_dominates: objective dimension mismatch");
  bool strict = false;
  for (Eigen::Index j = 0; j < a.objectives.size(); ++j) {
    if (a.objectives[j] < b.objectives[j]) return false;
    if (a.objectives[j] > b.objectives[j]) strict = true;
  }
  return strict;
}

bool constraint_dominates(const OutputVector& a, const OutputVector& b) {
  if (a.constraints.size() != b.constraints.size())
    throw std::invalid_argument("constraint_dominates: constraint dimension mismatch");
  const bool fa = is_feasible(a);
  const bool fb = is_feasible(b);
  if (fa != fb) return fa;
  if (!fa) return total_violation(a) < total_violation(b);
  return pareto_dominates(a, b);
}

Vector canonicalize_objectives(const Vector& raw, const std::vector<Sense>& senses) {
  if (raw.size() != static_cast<Eigen::Index>(senses.size()))
    throw std::invalid_argument("canonicalize_objectives: sense count mismatch");
  Vector out = raw;
  for (Eigen::Index j = 0; j < out.size(); ++j) {
    if (senses[static_cast<size_t>(j)] == Sense::minimize) out[j] = -out[j];
  }
  return out;
}

bool Dataset::contains_input(const Vector& x) const {
  for (const auto& obs : observations_) {
    if (obs.x == x) return true;
  }
  return false;
}

Matrix Dataset::inputs() const {
  if (observations_.empty()) return Matrix(0, 0);
  Matrix X(size(), observations_.front().x.size());
  for (int i = 0; i < size(); ++i) X.row(i) = observations_[static_cast<size_t>(i)].x.transpose();
  return X;
}

Vector Dataset::targets(int output_index) const {
  if (output_index < 0) throw std::invalid_argument("Dataset::targets: negative output index");
  if (!observations_.empty()) {
    const OutputVector& first = observations_.front().y;
    const int width = static_cast<int>(first.objectives.size() + first.constraints.size());
    if (output_index >= width)
      throw std::invalid_argument("Dataset::targets: output index past K+L");
  }
  Vector t(size());
  for (int i = 0; i < size(); ++i) {
    const OutputVector& y = observations_[static_cast<size_t>(i)].y;
    const int k = static_cast<int>(y.objectives.size());
    t[i] = output_index < k ? y.objectives[output_index] : y.constraints[output_index - k];
  }
  return t;
}

OutputVector evaluate(Blackbox& fn, const ProblemSpec& spec, const Vector& x) {
  if (!spec.in_domain(x)) {
    std::ostringstream msg;
    msg << "evaluate: point outside problem domain: [" << x.transpose() << "]";
    throw std::invalid_argument(msg.str());
  }
  OutputVector raw = fn.evaluate_raw(x);
  if (raw.objectives.size() != spec.num_objectives ||
      raw.constraints.size() != spec.num_constraints) {
    throw std::runtime_error("evaluate: evaluator returned wrong output arity");
  }
  if (!raw.objectives.allFinite() || !raw.constraints.allFinite()) {
    throw std::runtime_error("evaluate: evaluator returned non-finite values");
  }
  fn.count_one();
  return OutputVector{canonicalize_objectives(raw.objectives, spec.objective_senses),
                      raw.constraints};
}

}  // namespace mesmoc
