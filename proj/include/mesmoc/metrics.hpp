#pragma once

#include <vector>

#include "mesmoc/problem.hpp"

namespace mesmoc {

struct HypervolumeResult {
  double value = 0.0;
  double std_error = 0.0;  // nonzero only for the Monte-Carlo estimator
  int clipped = 0;         // points discarded for not dominating the reference
  bool exact = true;
};

// Lebesgue measure of the union of boxes [ref, p] over the front rows, in
// canonical maximization form. Exact sweep for K = 2, exact recursive
// slicing for K = 3..4, Monte-Carlo (10^6 samples, fixed seed) for K >= 5.
// Points that do not dominate the reference are clipped out and counted.
HypervolumeResult hypervolume(const Matrix& front, const Vector& ref);

// Rows not strictly Pareto-dominated by any other row (pure objective space).
std::vector<int> nondominated_rows(const Matrix& objectives);

// Fraction of true flags; 0.0 for an empty list.
double feasible_fraction(const std::vector<bool>& feasible);

}  // namespace mesmoc
