#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

namespace glmm {

enum class Family { Logistic, Probit, PoissonLog };

const char* family_name(Family family);
Family family_from_name(const std::string& name);

// Model data: responses, trial counts, fixed/random effect designs, and
// the random-effect block layout (sizes q_1..q_r summing to q).
struct ModelSpec {
  Family family = Family::Logistic;
  Eigen::VectorXi y;
  Eigen::VectorXi trials;  // ignored for PoissonLog
  Eigen::MatrixXd X;       // m x p
  Eigen::MatrixXd Z;       // m x q
  std::vector<int> blocks;

  Eigen::Index m() const { return y.size(); }
  Eigen::Index p() const { return X.cols(); }
  Eigen::Index q() const { return Z.cols(); }
  int r() const { return static_cast<int>(blocks.size()); }

  // Throws ContractError on inconsistent shapes or out-of-range responses.
  void validate() const;
};

// Linear predictor gamma = X beta + Z u.
Eigen::VectorXd linear_predictor(const ModelSpec& model,
                                 const Eigen::VectorXd& beta,
                                 const Eigen::VectorXd& u);

// Family log-likelihood in gamma, dropping terms that depend on y only.
double family_loglik(const ModelSpec& model, const Eigen::VectorXd& gamma);

// d loglik / d gamma; the vector that pairs with Z^T and X^T in every
// gradient (y - xi for logistic, tau1 - tau2 for probit, y - exp(gamma)
// for Poisson-log).
Eigen::VectorXd family_score(const ModelSpec& model,
                             const Eigen::VectorXd& gamma);

// Conditional target f(u | beta, Lambda, y) with a user-supplied dense
// positive definite random-effects covariance G.
struct ConditionalTarget {
  ConditionalTarget(ModelSpec model_in, Eigen::VectorXd beta_in,
                    Eigen::MatrixXd G_in);

  ModelSpec model;
  Eigen::VectorXd beta;
  Eigen::MatrixXd G;

  // Cached at construction; targets are immutable afterwards.
  Eigen::MatrixXd G_chol;  // lower triangular L, G = L L^T
  Eigen::MatrixXd G_inv;
  double log_det_G = 0.0;
};

// log f(u | y) up to an additive constant.
double log_conditional_u(const ConditionalTarget& target,
                         const Eigen::VectorXd& u);

Eigen::VectorXd grad_log_conditional_u(const ConditionalTarget& target,
                                       const Eigen::VectorXd& u);

// Priors for the Bayesian module: N(mu0, Q^{-1}) on beta (Q the prior
// precision) and Gamma(a_j, b_j) on each block precision lambda_j.
struct GammaPrior {
  double a = 1.0;
  double b = 1.0;
};

struct PriorSpec {
  Eigen::VectorXd mu0;
  Eigen::MatrixXd Q;
  std::vector<GammaPrior> gamma_params;

  void validate(Eigen::Index p, int r) const;
};

struct BayesState {
  Eigen::VectorXd u;
  Eigen::VectorXd beta;
  Eigen::VectorXd lambda;
};

// log f(u, beta, lambda | y) up to an additive constant.
double log_joint_bayes(const ModelSpec& model, const PriorSpec& prior,
                       const BayesState& state);

// log f(zeta | lambda, y) for zeta = (u, beta), lambda held fixed.
double log_conditional_zeta(const ModelSpec& model, const PriorSpec& prior,
                            const Eigen::VectorXd& lambda,
                            const Eigen::VectorXd& u,
                            const Eigen::VectorXd& beta);

// Gradient of log f(zeta | lambda, y), stacked (u-block, beta-block).
Eigen::VectorXd grad_log_conditional_zeta(const ModelSpec& model,
                                          const PriorSpec& prior,
                                          const Eigen::VectorXd& lambda,
                                          const Eigen::VectorXd& u,
                                          const Eigen::VectorXd& beta);

// Same gradient evaluated at a BayesState.
Eigen::VectorXd grad_log_joint_zeta(const ModelSpec& model,
                                    const PriorSpec& prior,
                                    const BayesState& state);

// Complete-data log density log f(y, u | beta, lambda) with block
// precisions lambda (G = D(lambda)^{-1}); drops y-only constants.
// This is the objective the MCEM / MCML drivers average.
double log_complete_data(const ModelSpec& model, const Eigen::VectorXd& beta,
                         const Eigen::VectorXd& lambda,
                         const Eigen::VectorXd& u);

// Block-diagonal covariance D(lambda)^{-1} as a dense matrix.
Eigen::MatrixXd covariance_from_precisions(const Eigen::VectorXd& lambda,
                                           const std::vector<int>& blocks);

// Per-block squared norms u_j^T u_j.
Eigen::VectorXd block_squared_norms(const Eigen::VectorXd& u,
                                    const std::vector<int>& blocks);

}  // namespace glmm
