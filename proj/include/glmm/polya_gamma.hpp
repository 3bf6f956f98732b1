#pragma once

#include "glmm/rng.hpp"

namespace glmm {

// Draw from the Polya-Gamma distribution PG(b, c) for integer shape b >= 1.
// PG(1, c) uses the exact alternating-series rejection sampler built on the
// Jacobi-theta tail decomposition; integer b sums b independent PG(1, c)
// draws (additivity in the shape parameter).
double sample_polya_gamma(RngStream& rng, int b, double c);

// Single PG(1, c) draw.
double sample_polya_gamma_1(RngStream& rng, double c);

}  // namespace glmm
