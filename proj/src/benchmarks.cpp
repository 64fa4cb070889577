#include "mesmoc/benchmarks.hpp"

#include <cmath>

namespace mesmoc {
namespace {

Vector vec2(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

OutputVector bnh_raw(const Vector& x) {
  OutputVector y;
  y.objectives = vec2(4.0 * x[0] * x[0] + 4.0 * x[1] * x[1],
                      (x[0] - 5.0) * (x[0] - 5.0) + (x[1] - 5.0) * (x[1] - 5.0));
  y.constraints = vec2(25.0 - (x[0] - 5.0) * (x[0] - 5.0) - x[1] * x[1],
                       (x[0] - 8.0) * (x[0] - 8.0) + (x[1] + 3.0) * (x[1] + 3.0) - 7.7);
  return y;
}

OutputVector srn_raw(const Vector& x) {
  OutputVector y;
  y.objectives = vec2((x[0] - 2.0) * (x[0] - 2.0) + (x[1] - 1.0) * (x[1] - 1.0) + 2.0,
                      9.0 * x[0] - (x[1] - 1.0) * (x[1] - 1.0));
  y.constraints = vec2(225.0 - x[0] * x[0] - x[1] * x[1], 3.0 * x[1] - x[0] - 10.0);
  return y;
}

OutputVector tnk_raw(const Vector& x) {
  OutputVector y;
  y.objectives = vec2(x[0], x[1]);
  // atan2 keeps the angle defined on the axes, including the origin.
  const double angle = std::atan2(x[0], x[1]);
  y.constraints = vec2(x[0] * x[0] + x[1] * x[1] - 1.0 - 0.1 * std::cos(16.0 * angle),
                       0.5 - (x[0] - 0.5) * (x[0] - 0.5) - (x[1] - 0.5) * (x[1] - 0.5));
  return y;
}

OutputVector osy_raw(const Vector& x) {
  OutputVector y;
  const double f1 = -(25.0 * (x[0] - 2.0) * (x[0] - 2.0) + (x[1] - 2.0) * (x[1] - 2.0) +
                      (x[2] - 1.0) * (x[2] - 1.0) + (x[3] - 4.0) * (x[3] - 4.0) +
                      (x[4] - 1.0) * (x[4] - 1.0));
  y.objectives = vec2(f1, x.squaredNorm());
  y.constraints.resize(6);
  y.constraints << x[0] + x[1] - 2.0, 6.0 - x[0] - x[1], 2.0 + x[0] - x[1],
      2.0 - x[0] + 3.0 * x[1], 4.0 - (x[2] - 3.0) * (x[2] - 3.0) - x[3],
      (x[4] - 3.0) * (x[4] - 3.0) + x[5] - 4.0;
  return y;
}

// Discrete 50x50 grid on the unit square. Two quadratic objectives pull
// toward opposite anchor points; a disc constraint of area 0.1 leaves roughly
// 10% of the grid feasible and cuts through the unconstrained Pareto segment.
constexpr double kDiscRadiusSq = 0.1 / M_PI;

OutputVector discgrid_raw(const Vector& x) {
  OutputVector y;
  const double d1 = (x[0] - 0.2) * (x[0] - 0.2) + (x[1] - 0.5) * (x[1] - 0.5);
  const double d2 = (x[0] - 0.8) * (x[0] - 0.8) + (x[1] - 0.5) * (x[1] - 0.5);
  y.objectives = vec2(d1, d2);
  y.constraints.resize(1);
  y.constraints << kDiscRadiusSq - (x[0] - 0.5) * (x[0] - 0.5) - (x[1] - 0.5) * (x[1] - 0.5);
  return y;
}

Matrix unit_square_grid(int per_side) {
  Matrix g(per_side * per_side, 2);
  int r = 0;
  for (int i = 0; i < per_side; ++i) {
    for (int j = 0; j < per_side; ++j) {
      g(r, 0) = static_cast<double>(i) / (per_side - 1);
      g(r, 1) = static_cast<double>(j) / (per_side - 1);
      ++r;
    }
  }
  return g;
}

ProblemSpec box_spec(const Vector& lo, const Vector& hi, int k, int l) {
  ProblemSpec s;
  s.dim = static_cast<int>(lo.size());
  s.lower = lo;
  s.upper = hi;
  s.num_objectives = k;
  s.num_constraints = l;
  s.objective_senses.assign(static_cast<size_t>(k), Sense::minimize);
  return s;
}

}  // namespace

std::vector<std::string> benchmark_names() { return {"bnh", "srn", "tnk", "osy", "discgrid"}; }

Benchmark make_benchmark(const std::string& name) {
  Benchmark b;
  b.name = name;
  if (name == "bnh") {
    b.spec = box_spec(vec2(0.0, 0.0), vec2(5.0, 3.0), 2, 2);
    b.evaluator = std::make_shared<FunctionBlackbox>(bnh_raw);
    b.hv_reference = vec2(-150.0, -60.0);
  } else if (name == "srn") {
    b.spec = box_spec(vec2(-20.0, -20.0), vec2(20.0, 20.0), 2, 2);
    b.evaluator = std::make_shared<FunctionBlackbox>(srn_raw);
    b.hv_reference = vec2(-560.0, -400.0);
  } else if (name == "tnk") {
    b.spec = box_spec(vec2(0.0, 0.0), vec2(M_PI, M_PI), 2, 2);
    b.evaluator = std::make_shared<FunctionBlackbox>(tnk_raw);
    b.hv_reference = vec2(-3.3, -3.3);
  } else if (name == "osy") {
    Vector lo(6), hi(6);
    lo << 0, 0, 1, 0, 1, 0;
    hi << 10, 10, 5, 6, 5, 10;
    b.spec = box_spec(lo, hi, 2, 6);
    b.evaluator = std::make_shared<FunctionBlackbox>(osy_raw);
    b.hv_reference = vec2(-10.0, -400.0);
    b.strict_hv = false;  // score all evaluated points, feasible or not
  } else if (name == "discgrid") {
    b.spec = box_spec(vec2(0.0, 0.0), vec2(1.0, 1.0), 2, 1);
    b.spec.grid = unit_square_grid(50);
    b.evaluator = std::make_shared<FunctionBlackbox>(discgrid_raw);
    b.hv_reference = vec2(-1.3, -1.3);
  } else {
    throw std::invalid_argument("unknown benchmark: " + name);
  }
  b.spec.validate();
  return b;
}

}  // namespace mesmoc
