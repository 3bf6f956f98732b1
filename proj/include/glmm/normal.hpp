#pragma once

namespace glmm {

// Standard normal density, cdf and quantile, plus the log-cdf and
// pdf/cdf ratios needed for stable probit likelihood evaluations.

double normal_pdf(double x);
double log_normal_pdf(double x);
double normal_cdf(double x);

// log Phi(x); uses erfc up to deep tails and an asymptotic Mills-ratio
// expansion beyond, so it stays finite where Phi underflows.
double log_normal_cdf(double x);

// phi(x) / Phi(x), stable for large negative x.
double normal_cdf_ratio(double x);

// Inverse cdf (Wichura's AS 241, double precision).
double normal_quantile(double p);

}  // namespace glmm
