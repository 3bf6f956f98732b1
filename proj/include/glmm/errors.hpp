#pragma once

#include <stdexcept>

namespace glmm {

// Factorization failures, non-finite values, degenerate weights.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Caller broke a documented precondition (dimension mismatch,
// envelope violation of a density asserted log-concave, ...).
struct ContractError : std::logic_error {
  using std::logic_error::logic_error;
};

// Bad run configuration (CLI / config file level).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace glmm
