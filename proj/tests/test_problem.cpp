#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "mesmoc/benchmarks.hpp"
#include "mesmoc/problem.hpp"
#include "mesmoc/rng.hpp"
#include "support/properties.hpp"

using namespace mesmoc;

namespace {

ProblemSpec box_spec(int dim, int k, int l) {
  ProblemSpec spec;
  spec.dim = dim;
  spec.lower = Vector::Constant(dim, -1.0);
  spec.upper = Vector::Constant(dim, 1.0);
  spec.num_objectives = k;
  spec.num_constraints = l;
  spec.objective_senses.assign(static_cast<size_t>(k), Sense::maximize);
  return spec;
}

OutputVector make_output(std::initializer_list<double> f, std::initializer_list<double> c) {
  OutputVector y;
  y.objectives.resize(static_cast<Eigen::Index>(f.size()));
  int i = 0;
  for (double v : f) y.objectives[i++] = v;
  y.constraints.resize(static_cast<Eigen::Index>(c.size()));
  i = 0;
  for (double v : c) y.constraints[i++] = v;
  return y;
}

}  // namespace

TEST_CASE("spec validation accepts a sound spec and rejects broken ones") {
  ProblemSpec spec = box_spec(2, 2, 1);
  CHECK_NOTHROW(spec.validate());

  ProblemSpec bad = spec;
  bad.num_objectives = 1;  // need at least two objectives
  bad.objective_senses.pop_back();
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  bad = spec;
  bad.upper[0] = bad.lower[0] - 1.0;  // inverted bounds
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  bad = spec;
  bad.objective_senses.pop_back();  // senses length mismatch
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  bad = spec;
  bad.grid = Matrix::Zero(3, 5);  // grid column count != dim
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  // For discrete problems the grid itself is the domain; box bounds are not
  // consulted, so a grid row outside them is legal.
  ProblemSpec gridded = spec;
  gridded.grid = Matrix::Zero(3, 2);
  gridded.grid(2, 1) = 2.0;
  CHECK_NOTHROW(gridded.validate());
}

TEST_CASE("in_domain distinguishes continuous and grid problems") {
  ProblemSpec spec = box_spec(2, 2, 0);
  Vector x(2);
  x << 0.5, -0.5;
  CHECK(spec.in_domain(x));
  x << 1.0, -1.0;  // boundary counts as inside
  CHECK(spec.in_domain(x));
  x << 1.0000001, 0.0;
  CHECK_FALSE(spec.in_domain(x));

  spec.grid = Matrix(2, 2);
  spec.grid << 0.0, 0.0, 0.5, -0.5;
  x << 0.5, -0.5;
  CHECK(spec.in_domain(x));
  x << 0.25, 0.25;  // inside the box but not a grid row
  CHECK_FALSE(spec.in_domain(x));
}

TEST_CASE("feasibility and violation") {
  CHECK(is_feasible(make_output({1.0, 2.0}, {})));
  CHECK(is_feasible(make_output({1.0}, {0.0, 3.0})));
  CHECK_FALSE(is_feasible(make_output({1.0}, {-1e-12})));
  CHECK(total_violation(make_output({0.0}, {2.0, -1.5, -0.5})) == doctest::Approx(2.0));
  CHECK(total_violation(make_output({0.0}, {1.0, 2.0})) == 0.0);
}

TEST_CASE("pareto and constraint domination on hand cases") {
  const OutputVector a = make_output({2.0, 2.0}, {1.0});
  const OutputVector b = make_output({1.0, 2.0}, {1.0});
  const OutputVector c = make_output({3.0, 0.0}, {1.0});
  CHECK(pareto_dominates(a, b));
  CHECK_FALSE(pareto_dominates(b, a));
  CHECK_FALSE(pareto_dominates(a, a));  // equality never dominates
  CHECK_FALSE(pareto_dominates(a, c));  // incomparable
  CHECK_FALSE(pareto_dominates(c, a));

  const OutputVector infeasible = make_output({10.0, 10.0}, {-0.5});
  const OutputVector worse_infeasible = make_output({10.0, 10.0}, {-2.0});
  CHECK(constraint_dominates(b, infeasible));        // feasible beats infeasible
  CHECK_FALSE(constraint_dominates(infeasible, b));  // even with better objectives
  CHECK(constraint_dominates(infeasible, worse_infeasible));
  CHECK(constraint_dominates(a, b));  // feasible pair falls back to Pareto order
}

TEST_CASE("canonicalize_objectives negates minimize entries and is an involution") {
  Vector raw(3);
  raw << 1.0, -2.0, 3.0;
  const std::vector<Sense> senses{Sense::maximize, Sense::minimize, Sense::minimize};
  const Vector canon = canonicalize_objectives(raw, senses);
  CHECK(canon[0] == 1.0);
  CHECK(canon[1] == 2.0);
  CHECK(canon[2] == -3.0);
  const Vector back = canonicalize_objectives(canon, senses);
  CHECK((back - raw).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("dataset layout: inputs rows and per-output target columns") {
  Dataset data;
  Vector x0(2), x1(2);
  x0 << 0.1, 0.2;
  x1 << 0.3, 0.4;
  data.append({x0, make_output({1.0, 2.0}, {3.0})});
  data.append({x1, make_output({4.0, 5.0}, {6.0})});
  CHECK(data.size() == 2);
  const Matrix X = data.inputs();
  CHECK(X.rows() == 2);
  CHECK(X.cols() == 2);
  CHECK(X(1, 0) == 0.3);
  CHECK(data.targets(0)[0] == 1.0);
  CHECK(data.targets(1)[1] == 5.0);
  CHECK(data.targets(2)[0] == 3.0);  // index K..K+L-1 selects constraints
  CHECK_THROWS_AS(data.targets(3), std::invalid_argument);
  CHECK(data.contains_input(x1));
  Vector other(2);
  other << 0.3, 0.41;
  CHECK_FALSE(data.contains_input(other));
}

TEST_CASE("evaluate canonicalizes senses, checks the domain, and counts") {
  ProblemSpec spec = box_spec(1, 2, 1);
  spec.objective_senses = {Sense::maximize, Sense::minimize};
  FunctionBlackbox fn([](const Vector& x) {
    OutputVector y;
    y.objectives = Vector(2);
    y.objectives << x[0], 2.0 * x[0];
    y.constraints = Vector::Constant(1, 1.0);
    return y;
  });
  Vector x = Vector::Constant(1, 0.5);
  const OutputVector y = evaluate(fn, spec, x);
  CHECK(y.objectives[0] == doctest::Approx(0.5));
  CHECK(y.objectives[1] == doctest::Approx(-1.0));  // minimize entry negated
  CHECK(fn.evaluations() == 1);

  Vector outside = Vector::Constant(1, 2.0);
  CHECK_THROWS_AS(evaluate(fn, spec, outside), std::invalid_argument);
  CHECK(fn.evaluations() == 1);  // rejected points are not counted

  FunctionBlackbox broken([](const Vector&) {
    OutputVector y;
    y.objectives = Vector::Constant(2, std::nan(""));
    y.constraints = Vector::Constant(1, 0.0);
    return y;
  });
  CHECK_THROWS_AS(evaluate(broken, spec, x), std::runtime_error);

  FunctionBlackbox wrong_arity([](const Vector&) {
    OutputVector y;
    y.objectives = Vector::Constant(1, 0.0);
    y.constraints = Vector::Constant(1, 0.0);
    return y;
  });
  CHECK_THROWS_AS(evaluate(wrong_arity, spec, x), std::runtime_error);
}

TEST_CASE("built-in benchmarks validate and evaluate in canonical form") {
  for (const std::string& name : benchmark_names()) {
    CAPTURE(name);
    Benchmark bench = make_benchmark(name);
    CHECK_NOTHROW(bench.spec.validate());
    CHECK(bench.hv_reference.size() == bench.spec.num_objectives);
    Rng rng(11);
    for (int i = 0; i < 5; ++i) {
      Vector x(bench.spec.dim);
      if (bench.spec.discrete()) {
        x = bench.spec.grid.row(static_cast<Eigen::Index>(
                                    rng.uniform_int(static_cast<std::uint64_t>(bench.spec.grid.rows()))))
                .transpose();
      } else {
        for (int j = 0; j < bench.spec.dim; ++j)
          x[j] = rng.uniform(bench.spec.lower[j], bench.spec.upper[j]);
      }
      const OutputVector y = evaluate(*bench.evaluator, bench.spec, x);
      CHECK(y.objectives.size() == bench.spec.num_objectives);
      CHECK(y.constraints.size() == bench.spec.num_constraints);
      CHECK(y.objectives.allFinite());
      CHECK(y.constraints.allFinite());
    }
  }
  CHECK_THROWS_AS(make_benchmark("no-such-problem"), std::invalid_argument);
}

TEST_CASE("dominance properties hold on random outputs") {
  Rng rng(301);
  CHECK(properties::battery_dominance(rng, 200) == 0);
  CHECK(properties::battery_canonicalize_involution(rng, 200) == 0);
}
