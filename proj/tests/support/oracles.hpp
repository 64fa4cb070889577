#pragma once

// Independent reference implementations used to cross-check the library.
// Everything here is deliberately written against the math directly (dense
// inversions, quadrature, brute-force scans) rather than reusing library
// internals.

#include <string>
#include <vector>

#include "mesmoc/gp.hpp"
#include "mesmoc/problem.hpp"
#include "mesmoc/rng.hpp"

namespace oracles {

using mesmoc::Matrix;
using mesmoc::OutputVector;
using mesmoc::Vector;

// Entropy reduction of upper-truncating a unit Gaussian at gamma, computed by
// composite-Simpson quadrature of the truncated density's differential
// entropy. Accurate to well below 1e-9 for gamma in [-8, 8].
double entropy_reduction_quadrature(double gamma);

struct GpOracleResult {
  Vector mean;
  Vector variance;
  double log_marginal = 0.0;
};

// Dense eigendecomposition-based GP posterior, raw units, no rescaling.
GpOracleResult dense_gp(const Matrix& X, const Vector& y, const mesmoc::KernelHyperparams& hp,
                        const Matrix& queries);

// Repeated-peeling non-dominated sort (constraint-domination).
std::vector<std::vector<int>> peel_sort(const std::vector<OutputVector>& points);

// Pairwise-scan feasible nondominated subset.
std::vector<int> brute_filter(const std::vector<OutputVector>& points);

// Exact rectangle-union area by coordinate compression (2-D fronts).
double hv2d_rectangle_union(const Matrix& front, const Vector& ref);

// Independent crowding-distance computation over one front's objectives.
std::vector<double> crowding_reference(const std::vector<Vector>& objectives);

// Canonical feasible nondominated objectives of a built-in benchmark,
// enumerated on a dense grid (or the problem's own grid when discrete).
Matrix benchmark_reference_front(const std::string& name, int points_per_dim);

// Random output vector with roughly the given chance of feasibility and a
// taste for ties (coordinates are sometimes snapped to integers).
OutputVector random_output(mesmoc::Rng& rng, int num_objectives, int num_constraints,
                           double feasible_bias);

}  // namespace oracles
