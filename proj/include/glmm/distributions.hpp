#pragma once

#include <Eigen/Core>

#include "glmm/rng.hpp"

namespace glmm {

enum class TruncationSide { Positive, Nonpositive };

// Draw from N(mean, var) restricted to (0, inf) or (-inf, 0].
// Inverse-cdf inside moderate tails, exponential-tilted rejection beyond.
double sample_truncated_normal(RngStream& rng, double mean, double var,
                               TruncationSide side);

// Gamma(shape a, rate b); mean a/b.  Marsaglia-Tsang squeeze.
double sample_gamma(RngStream& rng, double shape, double rate);

// Draw x ~ N(S^{-1} t, S^{-1}) without forming S^{-1}:
//   S = L L^T,  solve L w = t,  z ~ N(0, I),  solve L^T x = w + z.
Eigen::VectorXd sample_precision_normal(RngStream& rng,
                                        const Eigen::MatrixXd& S,
                                        const Eigen::VectorXd& t);

// Same four steps reusing an existing Cholesky factor L (lower triangular).
Eigen::VectorXd sample_precision_normal_chol(RngStream& rng,
                                             const Eigen::MatrixXd& L,
                                             const Eigen::VectorXd& t);

// Poisson draw; exact for any mean (additivity split for large means).
long sample_poisson(RngStream& rng, double mean);

}  // namespace glmm
