#pragma once

#include <Eigen/Core>

#include "glmm/conditional_kernels.hpp"
#include "glmm/model.hpp"
#include "glmm/rng.hpp"

namespace glmm {

// Augmented design for the two-block samplers: E = [X Z] with
// theta = (Q mu0, 0) and A(lambda) = blockdiag(Q, D(lambda)).
// eta is stacked (beta, u) to match E's column order.
struct AugmentedDesign {
  AugmentedDesign(const ModelSpec& model, const PriorSpec& prior);

  Eigen::MatrixXd E;      // m x (p+q)
  Eigen::VectorXd theta;  // (p+q)
  Eigen::MatrixXd penalty(const Eigen::VectorXd& lambda) const;  // A(lambda)

  Eigen::Index p;
  Eigen::Index q;
  std::vector<int> blocks;

 private:
  Eigen::MatrixXd Q_;
};

// lambda_j ~ Gamma(a_j + q_j/2, b_j + u_j^T u_j / 2), independently.
Eigen::VectorXd lambda_gibbs(RngStream& rng, const PriorSpec& prior,
                             const Eigen::VectorXd& u,
                             const std::vector<int>& blocks);

struct BayesOutcome {
  BayesState state;
  bool accepted = true;  // MH indicator for the zeta move, where applicable
  double alpha = 1.0;
  double energy_error = 0.0;
};

// MALA move on zeta = (u, beta) targeting f(zeta | lambda, y), then a
// lambda refresh from its gamma conditional using the new u.
BayesOutcome mala_within_gibbs_step(RngStream& rng, const ModelSpec& model,
                                    const PriorSpec& prior,
                                    const BayesState& state,
                                    const MalaConfig& cfg);

// HMC move on zeta with a (p+q)-dimensional momentum, then the lambda draw.
BayesOutcome hmc_within_gibbs_step(RngStream& rng, const ModelSpec& model,
                                   const PriorSpec& prior,
                                   const BayesState& state,
                                   const HmcConfig& cfg);

// --- probit conditional pieces ----------------------------------------

// v_i ~ TN(gamma_i, 1, y_i) at the given linear predictor.
Eigen::VectorXd probit_latent_draw(RngStream& rng, const ModelSpec& model,
                                   const Eigen::VectorXd& gamma);

// u | lambda, beta, v ~ N(S^{-1}t, S^{-1}), S = Z^T Z + D(lambda),
// t = Z^T (v - X beta).
Eigen::VectorXd probit_u_given_v(RngStream& rng, const ModelSpec& model,
                                 const Eigen::VectorXd& lambda,
                                 const Eigen::VectorXd& beta,
                                 const Eigen::VectorXd& v);

// beta | u, v ~ N((X^T X + Q)^{-1}(X^T v + Q mu0 - X^T Z u), (X^T X + Q)^{-1}).
Eigen::VectorXd probit_beta_given_uv(RngStream& rng, const ModelSpec& model,
                                     const PriorSpec& prior,
                                     const Eigen::VectorXd& u,
                                     const Eigen::VectorXd& v);

// eta | lambda, v ~ N((E^T E + A)^{-1}(E^T v + theta), (E^T E + A)^{-1}).
Eigen::VectorXd probit_eta_given_v(RngStream& rng, const AugmentedDesign& design,
                                   const Eigen::VectorXd& lambda,
                                   const Eigen::VectorXd& v);

// Coefficients of omega*(h) ∝ h^{m-1} exp{-(a h^2 - 2 b h)/2} with
// a = v^T E1 v and b = v^T E2 (E1, E2 as in the Haar PX-DA step).
SandwichCoefficients bayes_sandwich_coefficients(const AugmentedDesign& design,
                                                 const Eigen::VectorXd& lambda,
                                                 const Eigen::VectorXd& v);

// --- probit full-step kernels ------------------------------------------

BayesState probit_full_gibbs_step(RngStream& rng, const ModelSpec& model,
                                  const PriorSpec& prior,
                                  const BayesState& state);

BayesState probit_block_gibbs_step(RngStream& rng, const ModelSpec& model,
                                   const PriorSpec& prior,
                                   const BayesState& state);

BayesState probit_haar_pxda_step(RngStream& rng, const ModelSpec& model,
                                 const PriorSpec& prior,
                                 const BayesState& state);

// --- logistic conditional pieces and kernels ---------------------------

Eigen::VectorXd logistic_latent_draw(RngStream& rng, const ModelSpec& model,
                                     const Eigen::VectorXd& gamma);

Eigen::VectorXd logistic_u_given_w(RngStream& rng, const ModelSpec& model,
                                   const Eigen::VectorXd& lambda,
                                   const Eigen::VectorXd& beta,
                                   const Eigen::VectorXd& w);

Eigen::VectorXd logistic_beta_given_uw(RngStream& rng, const ModelSpec& model,
                                       const PriorSpec& prior,
                                       const Eigen::VectorXd& u,
                                       const Eigen::VectorXd& w);

Eigen::VectorXd logistic_eta_given_w(RngStream& rng,
                                     const AugmentedDesign& design,
                                     const Eigen::VectorXd& lambda,
                                     const Eigen::VectorXd& w,
                                     const Eigen::VectorXd& kappa);

BayesState logistic_full_gibbs_step(RngStream& rng, const ModelSpec& model,
                                    const PriorSpec& prior,
                                    const BayesState& state);

BayesState logistic_block_gibbs_step(RngStream& rng, const ModelSpec& model,
                                     const PriorSpec& prior,
                                     const BayesState& state);

}  // namespace glmm
