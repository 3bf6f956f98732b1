#include "glmm/distributions.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Cholesky>

#include "glmm/normal.hpp"

namespace glmm {

namespace {

// Standard normal truncated to (a, inf) with a deep in the upper tail:
// Robert's exponential-tilted rejection.
double tail_normal_positive(RngStream& rng, double a) {
  const double alpha = 0.5 * (a + std::sqrt(a * a + 4.0));
  for (;;) {
    const double x = a + rng.exponential() / alpha;
    const double diff = x - alpha;
    if (std::log(rng.uniform()) <= -0.5 * diff * diff) return x;
  }
}

// Standard normal truncated to (a, inf).
double std_truncated_lower(RngStream& rng, double a) {
  if (a > 5.0) return tail_normal_positive(rng, a);
  const double pa = normal_cdf(a);
  const double u = pa + rng.uniform() * (1.0 - pa);
  return normal_quantile(u);
}

}  // namespace

double sample_truncated_normal(RngStream& rng, double mean, double var,
                               TruncationSide side) {
  if (!(var > 0.0)) {
    throw std::domain_error("sample_truncated_normal: variance must be > 0");
  }
  const double sd = std::sqrt(var);
  if (side == TruncationSide::Positive) {
    const double a = -mean / sd;  // standardized lower bound
    return mean + sd * std_truncated_lower(rng, a);
  }
  // (-inf, 0] is the reflection of (0, inf) around the mean sign flip.
  const double a = mean / sd;
  return -(-mean + sd * std_truncated_lower(rng, a));
}

double sample_gamma(RngStream& rng, double shape, double rate) {
  if (!(shape > 0.0) || !(rate > 0.0)) {
    throw std::domain_error("sample_gamma: shape and rate must be > 0");
  }
  if (shape < 1.0) {
    // boost: Gamma(a) = Gamma(a+1) * U^{1/a}
    const double u = rng.uniform();
    return sample_gamma(rng, shape + 1.0, rate) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = rng.normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.uniform();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v / rate;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v)))
      return d * v / rate;
  }
}

Eigen::VectorXd sample_precision_normal(RngStream& rng,
                                        const Eigen::MatrixXd& S,
                                        const Eigen::VectorXd& t) {
  Eigen::LLT<Eigen::MatrixXd> llt(S);
  if (llt.info() != Eigen::Success) {
    throw std::runtime_error(
        "sample_precision_normal: S is not positive definite");
  }
  return sample_precision_normal_chol(rng, llt.matrixL(), t);
}

Eigen::VectorXd sample_precision_normal_chol(RngStream& rng,
                                             const Eigen::MatrixXd& L,
                                             const Eigen::VectorXd& t) {
  const Eigen::VectorXd w =
      L.triangularView<Eigen::Lower>().solve(t);
  const Eigen::VectorXd z = rng.normal_vector(t.size());
  return L.transpose().triangularView<Eigen::Upper>().solve(w + z);
}

long sample_poisson(RngStream& rng, double mean) {
  if (mean < 0.0 || !std::isfinite(mean)) {
    throw std::domain_error("sample_poisson: mean must be finite and >= 0");
  }
  long total = 0;
  // Split large means so the product method never underflows.
  while (mean > 30.0) {
    double half = mean / 2.0;
    long k = 0;
    const double limit = std::exp(-half);
    double prod = rng.uniform();
    while (prod > limit) {
      ++k;
      prod *= rng.uniform();
    }
    total += k;
    mean -= half;
  }
  const double limit = std::exp(-mean);
  double prod = rng.uniform();
  long k = 0;
  while (prod > limit) {
    ++k;
    prod *= rng.uniform();
  }
  return total + k;
}

}  // namespace glmm
