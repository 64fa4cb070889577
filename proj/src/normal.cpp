#include "mesmoc/normal.hpp"

#include <cmath>

namespace mesmoc {
namespace {

constexpr double kLog2Pi = 1.8378770664093454835606594728112;
constexpr double kSqrt2 = 1.4142135623730950488016887242097;

// Mills ratio of the upper tail, R(x) = (1 - Phi(x)) / phi(x) for x > 0,
// via the continued fraction R(x) = 1 / (x + 1 / (x + 2 / (x + ...))).
// Converges to machine precision for x >= 3 well inside 100 levels.
double mills_ratio_upper(double x) {
  double t = 0.0;
  for (int k = 100; k >= 1; --k) t = static_cast<double>(k) / (x + t);
  return 1.0 / (x + t);
}

}  // namespace

double norm_pdf(double z) { return std::exp(-0.5 * z * z - 0.5 * kLog2Pi); }

double norm_log_pdf(double z) { return -0.5 * z * z - 0.5 * kLog2Pi; }

double norm_cdf(double z) { return 0.5 * std::erfc(-z / kSqrt2); }

double norm_log_cdf(double z) {
  if (z < -6.0) {
    // Phi(z) = phi(z) * R(-z)
    return norm_log_pdf(z) + std::log(mills_ratio_upper(-z));
  }
  if (z > 6.0) {
    return std::log1p(-0.5 * std::erfc(z / kSqrt2));
  }
  return std::log(0.5 * std::erfc(-z / kSqrt2));
}

double norm_hazard(double z) {
  if (z < -6.0) return 1.0 / mills_ratio_upper(-z);
  return norm_pdf(z) / norm_cdf(z);
}

}  // namespace mesmoc
