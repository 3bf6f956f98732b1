#pragma once

#include <functional>

#include <Eigen/Core>

namespace glmm {

struct NelderMeadResult {
  Eigen::VectorXd x;
  double value = 0.0;
  int evaluations = 0;
  bool converged = false;
};

// Derivative-free simplex minimization (reflection / expansion /
// contraction / shrink).  Deterministic given the starting point.
NelderMeadResult nelder_mead(
    const std::function<double(const Eigen::VectorXd&)>& objective,
    const Eigen::VectorXd& start, double initial_step = 0.25,
    double tolerance = 1e-8, int max_evaluations = 20000);

}  // namespace glmm
