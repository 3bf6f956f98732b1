#include "glmm/polya_gamma.hpp"

#include <cmath>
#include <stdexcept>

#include "glmm/normal.hpp"

namespace glmm {

namespace {

// Truncation point of the Jacobi-theta tail decomposition.
constexpr double kTrunc = 0.64;

// Piecewise series coefficients a_n(x) of the J*(1, .) density.
double series_coef(int n, double x) {
  const double half = n + 0.5;
  if (x <= kTrunc) {
    return M_PI * half * std::pow(2.0 / (M_PI * x), 1.5) *
           std::exp(-2.0 * half * half / x);
  }
  return M_PI * half * std::exp(-0.5 * half * half * M_PI * M_PI * x);
}

// P(IG(1/z, 1) <= t); z = 0 is the limiting one-sided stable case.
double inverse_gaussian_cdf_at(double z, double t) {
  const double root = 1.0 / std::sqrt(t);
  if (z == 0.0) return 2.0 * normal_cdf(-root);
  const double term1 = normal_cdf(root * (t * z - 1.0));
  const double term2 = std::exp(2.0 * z + log_normal_cdf(-root * (t * z + 1.0)));
  return term1 + term2;
}

// IG(1/z, 1) truncated to (0, t].
double truncated_inverse_gaussian(RngStream& rng, double z, double t) {
  if (z < 1.0 / t) {
    // Mean beyond the truncation point: sample the untilted left kernel by
    // rejection, then thin by the exp(-z^2 x / 2) tilt.
    for (;;) {
      double e1, e2;
      do {
        e1 = rng.exponential();
        e2 = rng.exponential();
      } while (e1 * e1 > 2.0 * e2 / t);
      const double x = t / ((1.0 + t * e1) * (1.0 + t * e1));
      if (std::log(rng.uniform()) <= -0.5 * z * z * x) return x;
    }
  }
  const double mu = 1.0 / z;
  for (;;) {
    const double y = rng.normal() * rng.normal();
    const double muy = mu * y;
    double x = mu + 0.5 * mu * muy -
               0.5 * mu * std::sqrt(4.0 * muy + muy * muy);
    if (rng.uniform() > mu / (mu + x)) x = mu * mu / x;
    if (x <= t) return x;
  }
}

// Devroye's alternating-series sampler for J*(1, z), z >= 0.
double sample_jacobi_tilted(RngStream& rng, double z) {
  const double rate = M_PI * M_PI / 8.0 + 0.5 * z * z;
  const double mass_right = (M_PI / (2.0 * rate)) * std::exp(-rate * kTrunc);
  const double mass_left =
      2.0 * std::exp(-z) * inverse_gaussian_cdf_at(z, kTrunc);
  const double p_right = mass_right / (mass_right + mass_left);

  for (;;) {
    double x;
    if (rng.uniform() < p_right) {
      x = kTrunc + rng.exponential() / rate;
    } else {
      x = truncated_inverse_gaussian(rng, z, kTrunc);
    }
    double partial = series_coef(0, x);
    const double y = rng.uniform() * partial;
    for (int n = 1;; ++n) {
      if (n % 2 == 1) {
        partial -= series_coef(n, x);
        if (y <= partial) return x;
      } else {
        partial += series_coef(n, x);
        if (y > partial) break;  // reject, draw a fresh proposal
      }
    }
  }
}

}  // namespace

double sample_polya_gamma_1(RngStream& rng, double c) {
  const double z = 0.5 * std::fabs(c);
  return 0.25 * sample_jacobi_tilted(rng, z);
}

double sample_polya_gamma(RngStream& rng, int b, double c) {
  if (b < 1) throw std::domain_error("sample_polya_gamma: b must be >= 1");
  if (!std::isfinite(c)) {
    throw std::domain_error("sample_polya_gamma: c must be finite");
  }
  double total = 0.0;
  for (int i = 0; i < b; ++i) total += sample_polya_gamma_1(rng, c);
  return total;
}

}  // namespace glmm
