#pragma once

#include <functional>
#include <optional>

#include "glmm/rng.hpp"

namespace glmm {

// A univariate density known up to a constant through its log, asserted
// log-concave on (lower, upper).  Bounds may be infinite.
struct LogConcaveDensity {
  std::function<double(double)> log_density;
  double lower;
  double upper;
  std::optional<double> mode_hint;
};

// Exact draw by adaptive rejection sampling (tangent upper hull, chord
// squeeze).  Throws ContractError if the density violates the hull, i.e.
// the log-concavity assertion fails.
double sample_log_concave(RngStream& rng, const LogConcaveDensity& f);

}  // namespace glmm
