#pragma once

#include <Eigen/Core>

#include "glmm/model.hpp"
#include "glmm/rng.hpp"

namespace glmm {

struct MalaConfig {
  double step_size = 0.1;
};

struct HmcConfig {
  double step_size = 0.1;
  int leapfrog_steps = 10;
  Eigen::MatrixXd mass;  // PD mass matrix; empty means identity
};

struct KernelOutcome {
  Eigen::VectorXd state;
  bool accepted = true;
  double alpha = 1.0;         // MH acceptance probability, where applicable
  double energy_error = 0.0;  // H(proposal) - H(current), HMC only
};

// One MALA transition for f(u|y):
//   u' ~ N(u + eps/2 * grad log f(u), eps I),
//   accept with alpha = 1 ^ [f(u') k(u',u)] / [f(u) k(u,u')].
KernelOutcome mala_step(RngStream& rng, const ConditionalTarget& target,
                        const Eigen::VectorXd& u, const MalaConfig& cfg);

// log alpha of the MALA move u -> u_prop (exposed for testing).
double mala_log_alpha(const ConditionalTarget& target, const Eigen::VectorXd& u,
                      const Eigen::VectorXd& u_prop, double step_size);

// One leapfrog update (half kick, drift, half kick); deterministic.
void leapfrog(const ConditionalTarget& target, Eigen::VectorXd& u,
              Eigen::VectorXd& rho, double step_size,
              const Eigen::MatrixXd& mass_chol);

// One HMC transition: refresh rho ~ N(0,M), L leapfrog steps, MH accept
// with alpha = min(1, exp(-H(u',rho') + H(u,rho))), negating rho on accept.
KernelOutcome hmc_step(RngStream& rng, const ConditionalTarget& target,
                       const Eigen::VectorXd& u, const HmcConfig& cfg);

// --- Data augmentation kernels ---------------------------------------

// Latent v-draw of the probit DA: v_i ~ TN(gamma_i, 1, y_i).
Eigen::VectorXd probit_da_draw_v(RngStream& rng,
                                 const ConditionalTarget& target,
                                 const Eigen::VectorXd& u);

// u | v ~ N(S^{-1} t, S^{-1}) with S = Z^T Z + G^{-1}, t = Z^T (v - X beta).
Eigen::VectorXd probit_da_draw_u(RngStream& rng,
                                 const ConditionalTarget& target,
                                 const Eigen::VectorXd& v);

// One probit DA sweep (binary data only: all trials must equal 1).
Eigen::VectorXd da_probit_step(RngStream& rng, const ConditionalTarget& target,
                               const Eigen::VectorXd& u);

// Coefficients (a, b) of the sandwich density
//   omega(h) ∝ h^{m-1} exp{-(a h^2 - 2 b h)/2},  h > 0,
// with a = v^T Z1 v, b = v^T Z1 X beta, Z1 = I - Z (Z^T Z + G^{-1})^{-1} Z^T.
struct SandwichCoefficients {
  double quadratic = 0.0;  // a
  double linear = 0.0;     // b
};

SandwichCoefficients probit_sandwich_coefficients(
    const ConditionalTarget& target, const Eigen::VectorXd& v);

// Draw h from omega(h) given its coefficients and the data row count.
double sample_sandwich_scale(RngStream& rng, Eigen::Index m,
                             const SandwichCoefficients& coef);

// One Haar PX-DA sweep: DA v-draw, scale by h ~ omega(h), then the u-draw.
Eigen::VectorXd haar_pxda_probit_step(RngStream& rng,
                                      const ConditionalTarget& target,
                                      const Eigen::VectorXd& u);

// Polya-Gamma latent draw of the logistic DA: w_i ~ PG(l_i, gamma_i).
Eigen::VectorXd pg_da_draw_w(RngStream& rng, const ConditionalTarget& target,
                             const Eigen::VectorXd& u);

// u | w ~ N(S^{-1} t, S^{-1}) with S = Z^T W Z + G^{-1},
// t = Z^T kappa - Z^T W X beta, kappa_i = y_i - l_i / 2.
Eigen::VectorXd pg_da_draw_u(RngStream& rng, const ConditionalTarget& target,
                             const Eigen::VectorXd& w);

// One logistic PG-DA sweep.
Eigen::VectorXd pg_da_logistic_step(RngStream& rng,
                                    const ConditionalTarget& target,
                                    const Eigen::VectorXd& u);

}  // namespace glmm
