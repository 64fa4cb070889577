#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "mesmoc/problem.hpp"

namespace mesmoc {

// A named problem instance bundled with everything the harness needs:
// evaluator, domain contract, hypervolume reference point (canonical
// maximization form) and the hypervolume scoring mode. Strict problems score
// only feasible points; lenient ones score every evaluated point.
struct Benchmark {
  std::string name;
  ProblemSpec spec;
  std::shared_ptr<Blackbox> evaluator;
  Vector hv_reference;
  bool strict_hv = true;
};

// Adapter for closed-form problems.
class FunctionBlackbox : public Blackbox {
 public:
  explicit FunctionBlackbox(std::function<OutputVector(const Vector&)> fn) : fn_(std::move(fn)) {}
  OutputVector evaluate_raw(const Vector& x) override { return fn_(x); }

 private:
  std::function<OutputVector(const Vector&)> fn_;
};

std::vector<std::string> benchmark_names();

// Throws std::invalid_argument for an unknown name.
Benchmark make_benchmark(const std::string& name);

}  // namespace mesmoc
