#include "glmm/optim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace glmm {

NelderMeadResult nelder_mead(
    const std::function<double(const Eigen::VectorXd&)>& objective,
    const Eigen::VectorXd& start, double initial_step, double tolerance,
    int max_evaluations) {
  const Eigen::Index n = start.size();
  NelderMeadResult result;
  if (n == 0) {
    result.x = start;
    result.value = objective(start);
    result.evaluations = 1;
    result.converged = true;
    return result;
  }

  std::vector<Eigen::VectorXd> simplex(n + 1, start);
  std::vector<double> values(n + 1);
  int evals = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    simplex[i + 1][i] += initial_step * std::max(1.0, std::fabs(start[i]));
  }
  for (Eigen::Index i = 0; i <= n; ++i) {
    values[i] = objective(simplex[i]);
    ++evals;
  }

  std::vector<int> order(n + 1);
  const double alpha = 1.0, gamma = 2.0, rho = 0.5, sigma = 0.5;

  while (evals < max_evaluations) {
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return values[a] < values[b]; });
    const int best = order[0], worst = order[n], second = order[n - 1];

    // convergence: value spread and simplex size both small
    double size = 0.0;
    for (Eigen::Index i = 0; i <= n; ++i) {
      size = std::max(size, (simplex[i] - simplex[best]).lpNorm<Eigen::Infinity>());
    }
    if (std::fabs(values[worst] - values[best]) <
            tolerance * (1.0 + std::fabs(values[best])) &&
        size < tolerance * (1.0 + simplex[best].lpNorm<Eigen::Infinity>())) {
      result.converged = true;
      break;
    }

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
    for (Eigen::Index i = 0; i <= n; ++i) {
      if (static_cast<int>(i) != worst) centroid += simplex[i];
    }
    centroid /= double(n);

    const Eigen::VectorXd reflected =
        centroid + alpha * (centroid - simplex[worst]);
    const double f_reflected = objective(reflected);
    ++evals;

    if (f_reflected < values[best]) {
      const Eigen::VectorXd expanded =
          centroid + gamma * (reflected - centroid);
      const double f_expanded = objective(expanded);
      ++evals;
      if (f_expanded < f_reflected) {
        simplex[worst] = expanded;
        values[worst] = f_expanded;
      } else {
        simplex[worst] = reflected;
        values[worst] = f_reflected;
      }
    } else if (f_reflected < values[second]) {
      simplex[worst] = reflected;
      values[worst] = f_reflected;
    } else {
      const Eigen::VectorXd contracted =
          centroid + rho * (simplex[worst] - centroid);
      const double f_contracted = objective(contracted);
      ++evals;
      if (f_contracted < values[worst]) {
        simplex[worst] = contracted;
        values[worst] = f_contracted;
      } else {
        for (Eigen::Index i = 0; i <= n; ++i) {
          if (static_cast<int>(i) == best) continue;
          simplex[i] = simplex[best] + sigma * (simplex[i] - simplex[best]);
          values[i] = objective(simplex[i]);
          ++evals;
        }
      }
    }
  }

  const auto best_it = std::min_element(values.begin(), values.end());
  result.x = simplex[std::distance(values.begin(), best_it)];
  result.value = *best_it;
  result.evaluations = evals;
  return result;
}

}  // namespace glmm
