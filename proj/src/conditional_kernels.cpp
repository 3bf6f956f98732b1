#include "glmm/conditional_kernels.hpp"

#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Cholesky>

#include "glmm/ars.hpp"
#include "glmm/distributions.hpp"
#include "glmm/errors.hpp"
#include "glmm/polya_gamma.hpp"

namespace glmm {

namespace {

void check_finite_gradient(const Eigen::VectorXd& g, const char* where) {
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    if (!std::isfinite(g[i])) {
      throw NumericalError(std::string(where) +
                           ": non-finite gradient at coordinate " +
                           std::to_string(i));
    }
  }
}

// log N(to; from + eps/2 * grad(from), eps I), dropping the constant.
double mala_log_kernel(const Eigen::VectorXd& from,
                       const Eigen::VectorXd& grad_from,
                       const Eigen::VectorXd& to, double eps) {
  const Eigen::VectorXd diff = to - from - 0.5 * eps * grad_from;
  return -diff.squaredNorm() / (2.0 * eps);
}

Eigen::MatrixXd mass_cholesky(const Eigen::MatrixXd& mass, Eigen::Index d) {
  if (mass.size() == 0) return Eigen::MatrixXd();  // identity
  if (mass.rows() != d || mass.cols() != d) {
    throw ContractError("hmc: mass matrix has wrong dimensions");
  }
  Eigen::LLT<Eigen::MatrixXd> llt(mass);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("hmc: mass matrix is not positive definite");
  }
  return llt.matrixL();
}

Eigen::VectorXd mass_inverse_apply(const Eigen::MatrixXd& mass_chol,
                                   const Eigen::VectorXd& rho) {
  if (mass_chol.size() == 0) return rho;
  Eigen::VectorXd w = mass_chol.triangularView<Eigen::Lower>().solve(rho);
  return mass_chol.transpose().triangularView<Eigen::Upper>().solve(w);
}

double kinetic_energy(const Eigen::MatrixXd& mass_chol,
                      const Eigen::VectorXd& rho) {
  if (mass_chol.size() == 0) return 0.5 * rho.squaredNorm();
  return 0.5 * mass_chol.triangularView<Eigen::Lower>()
                   .solve(rho)
                   .squaredNorm();
}

void require_binary_probit(const ModelSpec& model, const char* where) {
  if (model.family != Family::Probit) {
    throw ContractError(std::string(where) + ": requires a probit model");
  }
  for (Eigen::Index i = 0; i < model.m(); ++i) {
    if (model.trials[i] != 1) {
      throw ContractError(std::string(where) +
                          ": supports binary data only (all trials == 1)");
    }
  }
}

}  // namespace

double mala_log_alpha(const ConditionalTarget& target, const Eigen::VectorXd& u,
                      const Eigen::VectorXd& u_prop, double step_size) {
  const Eigen::VectorXd grad_u = grad_log_conditional_u(target, u);
  const Eigen::VectorXd grad_prop = grad_log_conditional_u(target, u_prop);
  const double log_ratio =
      log_conditional_u(target, u_prop) - log_conditional_u(target, u) +
      mala_log_kernel(u_prop, grad_prop, u, step_size) -
      mala_log_kernel(u, grad_u, u_prop, step_size);
  return std::min(0.0, log_ratio);
}

KernelOutcome mala_step(RngStream& rng, const ConditionalTarget& target,
                        const Eigen::VectorXd& u, const MalaConfig& cfg) {
  if (!(cfg.step_size > 0.0)) {
    throw ContractError("mala_step: step size must be positive");
  }
  const Eigen::VectorXd grad_u = grad_log_conditional_u(target, u);
  check_finite_gradient(grad_u, "mala_step");
  const Eigen::VectorXd noise = rng.normal_vector(u.size());
  const Eigen::VectorXd prop =
      u + 0.5 * cfg.step_size * grad_u + std::sqrt(cfg.step_size) * noise;
  const double log_alpha = mala_log_alpha(target, u, prop, cfg.step_size);

  KernelOutcome out;
  out.alpha = std::exp(log_alpha);
  out.accepted = (rng.uniform() < out.alpha);
  out.state = out.accepted ? prop : u;
  return out;
}

void leapfrog(const ConditionalTarget& target, Eigen::VectorXd& u,
              Eigen::VectorXd& rho, double step_size,
              const Eigen::MatrixXd& mass_chol) {
  Eigen::VectorXd grad = grad_log_conditional_u(target, u);
  check_finite_gradient(grad, "leapfrog");
  rho += 0.5 * step_size * grad;
  u += step_size * mass_inverse_apply(mass_chol, rho);
  grad = grad_log_conditional_u(target, u);
  check_finite_gradient(grad, "leapfrog");
  rho += 0.5 * step_size * grad;
}

KernelOutcome hmc_step(RngStream& rng, const ConditionalTarget& target,
                       const Eigen::VectorXd& u, const HmcConfig& cfg) {
  if (!(cfg.step_size > 0.0) || cfg.leapfrog_steps < 1) {
    throw ContractError("hmc_step: invalid step size or leapfrog count");
  }
  const Eigen::MatrixXd mass_chol = mass_cholesky(cfg.mass, u.size());

  Eigen::VectorXd rho0 = rng.normal_vector(u.size());
  if (mass_chol.size() != 0) {
    rho0 = mass_chol.triangularView<Eigen::Lower>() * rho0;
  }

  Eigen::VectorXd u_prop = u;
  Eigen::VectorXd rho = rho0;
  for (int step = 0; step < cfg.leapfrog_steps; ++step) {
    leapfrog(target, u_prop, rho, cfg.step_size, mass_chol);
  }

  const double h0 = -log_conditional_u(target, u) + kinetic_energy(mass_chol, rho0);
  const double h1 =
      -log_conditional_u(target, u_prop) + kinetic_energy(mass_chol, rho);

  KernelOutcome out;
  out.energy_error = h1 - h0;
  out.alpha = std::min(1.0, std::exp(-out.energy_error));
  out.accepted = (rng.uniform() < out.alpha);
  out.state = out.accepted ? u_prop : u;  // rho would be negated, then refreshed
  return out;
}

Eigen::VectorXd probit_da_draw_v(RngStream& rng,
                                 const ConditionalTarget& target,
                                 const Eigen::VectorXd& u) {
  require_binary_probit(target.model, "da_probit");
  const Eigen::VectorXd gamma = linear_predictor(target.model, target.beta, u);
  Eigen::VectorXd v(gamma.size());
  for (Eigen::Index i = 0; i < gamma.size(); ++i) {
    const auto side = (target.model.y[i] == 1) ? TruncationSide::Positive
                                               : TruncationSide::Nonpositive;
    v[i] = sample_truncated_normal(rng, gamma[i], 1.0, side);
  }
  return v;
}

Eigen::VectorXd probit_da_draw_u(RngStream& rng,
                                 const ConditionalTarget& target,
                                 const Eigen::VectorXd& v) {
  const Eigen::MatrixXd& Z = target.model.Z;
  const Eigen::MatrixXd S = Z.transpose() * Z + target.G_inv;
  const Eigen::VectorXd t =
      Z.transpose() * (v - target.model.X * target.beta);
  return sample_precision_normal(rng, S, t);
}

Eigen::VectorXd da_probit_step(RngStream& rng, const ConditionalTarget& target,
                               const Eigen::VectorXd& u) {
  const Eigen::VectorXd v = probit_da_draw_v(rng, target, u);
  return probit_da_draw_u(rng, target, v);
}

SandwichCoefficients probit_sandwich_coefficients(
    const ConditionalTarget& target, const Eigen::VectorXd& v) {
  // Quadratic forms in Z1 = I - Z S^{-1} Z^T via Cholesky solves; the
  // m x m matrix is never formed.
  const Eigen::MatrixXd& Z = target.model.Z;
  const Eigen::MatrixXd S = Z.transpose() * Z + target.G_inv;
  Eigen::LLT<Eigen::MatrixXd> llt(S);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("probit_sandwich_coefficients: Z^T Z + G^{-1} not PD");
  }
  const Eigen::VectorXd zv = Z.transpose() * v;
  const Eigen::VectorXd xb = target.model.X * target.beta;
  SandwichCoefficients coef;
  coef.quadratic = v.squaredNorm() - zv.dot(llt.solve(zv));
  coef.linear = v.dot(xb) - zv.dot(llt.solve(Z.transpose() * xb));
  return coef;
}

double sample_sandwich_scale(RngStream& rng, Eigen::Index m,
                             const SandwichCoefficients& coef) {
  if (m == 0) return 1.0;  // no data: the group identity element
  const double a = coef.quadratic;
  const double b = coef.linear;
  if (!(a > 0.0)) {
    throw NumericalError("sample_sandwich_scale: nonpositive quadratic form");
  }
  const double power = static_cast<double>(m) - 1.0;
  const double mode =
      (b + std::sqrt(b * b + 4.0 * a * power)) / (2.0 * a);
  LogConcaveDensity omega{
      [a, b, power](double h) {
        return power * std::log(h) - 0.5 * (a * h * h - 2.0 * b * h);
      },
      0.0, std::numeric_limits<double>::infinity(),
      (mode > 0.0) ? std::optional<double>(mode)
                   : std::optional<double>(0.5 / std::sqrt(a))};
  return sample_log_concave(rng, omega);
}

Eigen::VectorXd haar_pxda_probit_step(RngStream& rng,
                                      const ConditionalTarget& target,
                                      const Eigen::VectorXd& u) {
  const Eigen::VectorXd v = probit_da_draw_v(rng, target, u);
  const SandwichCoefficients coef = probit_sandwich_coefficients(target, v);
  const double h = sample_sandwich_scale(rng, target.model.m(), coef);
  return probit_da_draw_u(rng, target, h * v);
}

Eigen::VectorXd pg_da_draw_w(RngStream& rng, const ConditionalTarget& target,
                             const Eigen::VectorXd& u) {
  if (target.model.family != Family::Logistic) {
    throw ContractError("pg_da: requires a logistic model");
  }
  const Eigen::VectorXd gamma = linear_predictor(target.model, target.beta, u);
  Eigen::VectorXd w(gamma.size());
  for (Eigen::Index i = 0; i < gamma.size(); ++i) {
    w[i] = sample_polya_gamma(rng, target.model.trials[i], gamma[i]);
  }
  return w;
}

Eigen::VectorXd pg_da_draw_u(RngStream& rng, const ConditionalTarget& target,
                             const Eigen::VectorXd& w) {
  const Eigen::MatrixXd& Z = target.model.Z;
  const Eigen::MatrixXd S =
      Z.transpose() * w.asDiagonal() * Z + target.G_inv;
  Eigen::VectorXd kappa(target.model.m());
  for (Eigen::Index i = 0; i < kappa.size(); ++i) {
    kappa[i] = target.model.y[i] - 0.5 * target.model.trials[i];
  }
  const Eigen::VectorXd xb = target.model.X * target.beta;
  const Eigen::VectorXd t =
      Z.transpose() * (kappa - w.cwiseProduct(xb));
  return sample_precision_normal(rng, S, t);
}

Eigen::VectorXd pg_da_logistic_step(RngStream& rng,
                                    const ConditionalTarget& target,
                                    const Eigen::VectorXd& u) {
  const Eigen::VectorXd w = pg_da_draw_w(rng, target, u);
  return pg_da_draw_u(rng, target, w);
}

}  // namespace glmm
