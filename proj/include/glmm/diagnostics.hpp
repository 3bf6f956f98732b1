#pragma once

#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace glmm {

// Sample autocorrelation at the given lag (biased 1/N denominator).
// Throws NumericalError for a constant series.
double acf(const Eigen::VectorXd& series, int lag);

// Effective sample size N / IAT, IAT estimated by batch means with
// batch size floor(sqrt(N)).
double ess(const Eigen::VectorXd& series);

// Multivariate ESS N * (|Sigma| / |Sigma_mc|)^{1/d} with Sigma_mc the
// multivariate batch-means estimate.  Throws on a rank-deficient sample
// covariance, naming the offending coordinates.
double mess(const Eigen::MatrixXd& chains);

// Mean squared Euclidean jump over post-burn-in iterates: the chain has
// one iterate per row, the first `burn_in` rows are skipped, and the sum
// of squared jumps is divided by (rows - burn_in).
double msj(const Eigen::MatrixXd& chain, Eigen::Index burn_in);

// Robbins-Monro step-size update toward a target acceptance rate:
//   eps' = eps * exp(gain * (accept_hat - target) / iter^0.6).
// Only meaningful during burn-in; freeze afterwards.
double adapt_step_size(double accept_hat, double target, int iter, double eps,
                       double gain = 1.0);

constexpr double kMalaTargetAcceptance = 0.55;
constexpr double kHmcTargetAcceptance = 0.70;

struct ChainSummary {
  std::vector<std::string> names;
  Eigen::MatrixXd acf_table;  // coordinates x lags (1..K)
  Eigen::VectorXd ess_values;
  std::vector<std::pair<std::string, double>> mess_groups;
  std::vector<std::pair<std::string, double>> msj_groups;
  double accept_rate = 1.0;
};

}  // namespace glmm
