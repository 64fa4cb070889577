#pragma once

namespace mesmoc {

// Standard normal pdf/cdf helpers. The log-cdf and hazard rate are stable
// over the whole real line: the far left tail (z < -6) goes through a
// continued-fraction Mills ratio instead of the underflowing erfc path.

double norm_pdf(double z);
double norm_cdf(double z);
double norm_log_pdf(double z);
double norm_log_cdf(double z);

// phi(z) / Phi(z)
double norm_hazard(double z);

}  // namespace mesmoc
