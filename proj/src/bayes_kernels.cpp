#include "glmm/bayes_kernels.hpp"

#include <cmath>
#include <string>

#include <Eigen/Cholesky>

#include "glmm/distributions.hpp"
#include "glmm/errors.hpp"
#include "glmm/polya_gamma.hpp"

namespace glmm {

namespace {

Eigen::VectorXd precision_diagonal(const Eigen::VectorXd& lambda,
                                   const std::vector<int>& blocks) {
  int q = 0;
  for (int b : blocks) q += b;
  Eigen::VectorXd diag(q);
  Eigen::Index offset = 0;
  for (std::size_t j = 0; j < blocks.size(); ++j) {
    diag.segment(offset, blocks[j]).setConstant(lambda[static_cast<Eigen::Index>(j)]);
    offset += blocks[j];
  }
  return diag;
}

Eigen::VectorXd binomial_kappa(const ModelSpec& model) {
  Eigen::VectorXd kappa(model.m());
  for (Eigen::Index i = 0; i < kappa.size(); ++i) {
    kappa[i] = model.y[i] - 0.5 * model.trials[i];
  }
  return kappa;
}

void require_proper_bayes(const ModelSpec& model, const PriorSpec& prior) {
  prior.validate(model.p(), model.r());
  if (model.p() > 0) {
    Eigen::LLT<Eigen::MatrixXd> llt(prior.Q);
    if (llt.info() != Eigen::Success) {
      throw ConfigError(
          "Bayesian samplers require a positive definite prior precision Q; "
          "improper flat priors on beta are not supported");
    }
  }
}

void require_binary_probit_model(const ModelSpec& model, const char* where) {
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

// Leapfrog over zeta = (u, beta) for f(zeta | lambda, y).
template <typename GradFn>
void leapfrog_zeta(const GradFn& grad, Eigen::VectorXd& zeta,
                   Eigen::VectorXd& rho, double eps,
                   const Eigen::MatrixXd& mass_chol) {
  rho += 0.5 * eps * grad(zeta);
  if (mass_chol.size() == 0) {
    zeta += eps * rho;
  } else {
    Eigen::VectorXd w = mass_chol.triangularView<Eigen::Lower>().solve(rho);
    zeta += eps * mass_chol.transpose().triangularView<Eigen::Upper>().solve(w);
  }
  rho += 0.5 * eps * grad(zeta);
}

}  // namespace

AugmentedDesign::AugmentedDesign(const ModelSpec& model, const PriorSpec& prior)
    : p(model.p()), q(model.q()), blocks(model.blocks) {
  prior.validate(model.p(), model.r());
  E.resize(model.m(), p + q);
  E << model.X, model.Z;
  theta.resize(p + q);
  theta.head(p) = prior.Q * prior.mu0;
  theta.tail(q).setZero();
  Q_ = prior.Q;
}

Eigen::MatrixXd AugmentedDesign::penalty(const Eigen::VectorXd& lambda) const {
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(p + q, p + q);
  A.topLeftCorner(p, p) = Q_;
  A.bottomRightCorner(q, q) =
      precision_diagonal(lambda, blocks).asDiagonal();
  return A;
}

Eigen::VectorXd lambda_gibbs(RngStream& rng, const PriorSpec& prior,
                             const Eigen::VectorXd& u,
                             const std::vector<int>& blocks) {
  const Eigen::VectorXd ssq = block_squared_norms(u, blocks);
  Eigen::VectorXd lambda(static_cast<Eigen::Index>(blocks.size()));
  for (std::size_t j = 0; j < blocks.size(); ++j) {
    const auto& g = prior.gamma_params[j];
    lambda[static_cast<Eigen::Index>(j)] =
        sample_gamma(rng, g.a + 0.5 * blocks[j],
                     g.b + 0.5 * ssq[static_cast<Eigen::Index>(j)]);
  }
  return lambda;
}

BayesOutcome mala_within_gibbs_step(RngStream& rng, const ModelSpec& model,
                                    const PriorSpec& prior,
                                    const BayesState& state,
                                    const MalaConfig& cfg) {
  require_proper_bayes(model, prior);
  if (!(cfg.step_size > 0.0)) {
    throw ContractError("mala_within_gibbs_step: step size must be positive");
  }
  const Eigen::Index q = model.q(), p = model.p();
  const double eps = cfg.step_size;

  Eigen::VectorXd zeta(q + p);
  zeta << state.u, state.beta;

  auto logf = [&](const Eigen::VectorXd& z) {
    return log_conditional_zeta(model, prior, state.lambda, z.head(q),
                                z.tail(p));
  };
  auto grad = [&](const Eigen::VectorXd& z) {
    return grad_log_conditional_zeta(model, prior, state.lambda, z.head(q),
                                     z.tail(p));
  };

  const Eigen::VectorXd g0 = grad(zeta);
  const Eigen::VectorXd prop =
      zeta + 0.5 * eps * g0 + std::sqrt(eps) * rng.normal_vector(q + p);
  const Eigen::VectorXd g1 = grad(prop);

  const Eigen::VectorXd fwd = prop - zeta - 0.5 * eps * g0;
  const Eigen::VectorXd bwd = zeta - prop - 0.5 * eps * g1;
  const double log_alpha =
      std::min(0.0, logf(prop) - logf(zeta) +
                        (-bwd.squaredNorm() + fwd.squaredNorm()) / (2.0 * eps));

  BayesOutcome out;
  out.alpha = std::exp(log_alpha);
  out.accepted = (rng.uniform() < out.alpha);
  const Eigen::VectorXd& next = out.accepted ? prop : zeta;
  out.state.u = next.head(q);
  out.state.beta = next.tail(p);
  out.state.lambda = lambda_gibbs(rng, prior, out.state.u, model.blocks);
  return out;
}

BayesOutcome hmc_within_gibbs_step(RngStream& rng, const ModelSpec& model,
                                   const PriorSpec& prior,
                                   const BayesState& state,
                                   const HmcConfig& cfg) {
  require_proper_bayes(model, prior);
  if (!(cfg.step_size > 0.0) || cfg.leapfrog_steps < 1) {
    throw ContractError("hmc_within_gibbs_step: invalid step size or L");
  }
  const Eigen::Index q = model.q(), p = model.p();
  const Eigen::Index d = q + p;

  Eigen::MatrixXd mass_chol;
  if (cfg.mass.size() != 0) {
    if (cfg.mass.rows() != d || cfg.mass.cols() != d) {
      throw ContractError("hmc_within_gibbs_step: mass matrix has wrong size");
    }
    Eigen::LLT<Eigen::MatrixXd> llt(cfg.mass);
    if (llt.info() != Eigen::Success) {
      throw NumericalError("hmc_within_gibbs_step: mass matrix not PD");
    }
    mass_chol = llt.matrixL();
  }

  auto logf = [&](const Eigen::VectorXd& z) {
    return log_conditional_zeta(model, prior, state.lambda, z.head(q),
                                z.tail(p));
  };
  auto grad = [&](const Eigen::VectorXd& z) {
    return grad_log_conditional_zeta(model, prior, state.lambda, z.head(q),
                                     z.tail(p));
  };
  auto kinetic = [&](const Eigen::VectorXd& rho) {
    if (mass_chol.size() == 0) return 0.5 * rho.squaredNorm();
    return 0.5 *
           mass_chol.triangularView<Eigen::Lower>().solve(rho).squaredNorm();
  };

  Eigen::VectorXd zeta(d);
  zeta << state.u, state.beta;

  Eigen::VectorXd rho0 = rng.normal_vector(d);
  if (mass_chol.size() != 0) {
    rho0 = mass_chol.triangularView<Eigen::Lower>() * rho0;
  }

  Eigen::VectorXd prop = zeta;
  Eigen::VectorXd rho = rho0;
  for (int step = 0; step < cfg.leapfrog_steps; ++step) {
    leapfrog_zeta(grad, prop, rho, cfg.step_size, mass_chol);
  }

  const double h0 = -logf(zeta) + kinetic(rho0);
  const double h1 = -logf(prop) + kinetic(rho);

  BayesOutcome out;
  out.energy_error = h1 - h0;
  out.alpha = std::min(1.0, std::exp(-out.energy_error));
  out.accepted = (rng.uniform() < out.alpha);
  const Eigen::VectorXd& next = out.accepted ? prop : zeta;
  out.state.u = next.head(q);
  out.state.beta = next.tail(p);
  out.state.lambda = lambda_gibbs(rng, prior, out.state.u, model.blocks);
  return out;
}

Eigen::VectorXd probit_latent_draw(RngStream& rng, const ModelSpec& model,
                                   const Eigen::VectorXd& gamma) {
  require_binary_probit_model(model, "probit_latent_draw");
  Eigen::VectorXd v(gamma.size());
  for (Eigen::Index i = 0; i < gamma.size(); ++i) {
    const auto side = (model.y[i] == 1) ? TruncationSide::Positive
                                        : TruncationSide::Nonpositive;
    v[i] = sample_truncated_normal(rng, gamma[i], 1.0, side);
  }
  return v;
}

Eigen::VectorXd probit_u_given_v(RngStream& rng, const ModelSpec& model,
                                 const Eigen::VectorXd& lambda,
                                 const Eigen::VectorXd& beta,
                                 const Eigen::VectorXd& v) {
  const Eigen::MatrixXd& Z = model.Z;
  Eigen::MatrixXd S = Z.transpose() * Z;
  S.diagonal() += precision_diagonal(lambda, model.blocks);
  const Eigen::VectorXd t = Z.transpose() * (v - model.X * beta);
  return sample_precision_normal(rng, S, t);
}

Eigen::VectorXd probit_beta_given_uv(RngStream& rng, const ModelSpec& model,
                                     const PriorSpec& prior,
                                     const Eigen::VectorXd& u,
                                     const Eigen::VectorXd& v) {
  const Eigen::MatrixXd& X = model.X;
  const Eigen::MatrixXd S = X.transpose() * X + prior.Q;
  const Eigen::VectorXd t =
      X.transpose() * v + prior.Q * prior.mu0 - X.transpose() * (model.Z * u);
  return sample_precision_normal(rng, S, t);
}

Eigen::VectorXd probit_eta_given_v(RngStream& rng,
                                   const AugmentedDesign& design,
                                   const Eigen::VectorXd& lambda,
                                   const Eigen::VectorXd& v) {
  const Eigen::MatrixXd S =
      design.E.transpose() * design.E + design.penalty(lambda);
  const Eigen::VectorXd t = design.E.transpose() * v + design.theta;
  return sample_precision_normal(rng, S, t);
}

SandwichCoefficients bayes_sandwich_coefficients(const AugmentedDesign& design,
                                                 const Eigen::VectorXd& lambda,
                                                 const Eigen::VectorXd& v) {
  // v^T E1 v = v^T v - (E^T v)^T (E^T E + A)^{-1} (E^T v) and
  // v^T E2 = (E^T v)^T (E^T E + A)^{-1} theta, via one Cholesky solve.
  const Eigen::MatrixXd S =
      design.E.transpose() * design.E + design.penalty(lambda);
  Eigen::LLT<Eigen::MatrixXd> llt(S);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("bayes_sandwich_coefficients: E^T E + A not PD");
  }
  const Eigen::VectorXd ev = design.E.transpose() * v;
  const Eigen::VectorXd solved = llt.solve(ev);
  SandwichCoefficients coef;
  coef.quadratic = v.squaredNorm() - ev.dot(solved);
  coef.linear = solved.dot(design.theta);
  return coef;
}

BayesState probit_full_gibbs_step(RngStream& rng, const ModelSpec& model,
                                  const PriorSpec& prior,
                                  const BayesState& state) {
  require_proper_bayes(model, prior);
  require_binary_probit_model(model, "probit_full_gibbs_step");
  BayesState next;
  next.lambda = lambda_gibbs(rng, prior, state.u, model.blocks);
  const Eigen::VectorXd gamma = linear_predictor(model, state.beta, state.u);
  const Eigen::VectorXd v = probit_latent_draw(rng, model, gamma);
  next.u = probit_u_given_v(rng, model, next.lambda, state.beta, v);
  next.beta = probit_beta_given_uv(rng, model, prior, next.u, v);
  return next;
}

BayesState probit_block_gibbs_step(RngStream& rng, const ModelSpec& model,
                                   const PriorSpec& prior,
                                   const BayesState& state) {
  require_proper_bayes(model, prior);
  require_binary_probit_model(model, "probit_block_gibbs_step");
  AugmentedDesign design(model, prior);
  BayesState next;
  // conditional on (eta, y), v and lambda are independent
  next.lambda = lambda_gibbs(rng, prior, state.u, model.blocks);
  const Eigen::VectorXd gamma = linear_predictor(model, state.beta, state.u);
  const Eigen::VectorXd v = probit_latent_draw(rng, model, gamma);
  const Eigen::VectorXd eta = probit_eta_given_v(rng, design, next.lambda, v);
  next.beta = eta.head(model.p());
  next.u = eta.tail(model.q());
  return next;
}

BayesState probit_haar_pxda_step(RngStream& rng, const ModelSpec& model,
                                 const PriorSpec& prior,
                                 const BayesState& state) {
  require_proper_bayes(model, prior);
  require_binary_probit_model(model, "probit_haar_pxda_step");
  AugmentedDesign design(model, prior);
  BayesState next;
  next.lambda = lambda_gibbs(rng, prior, state.u, model.blocks);
  const Eigen::VectorXd gamma = linear_predictor(model, state.beta, state.u);
  Eigen::VectorXd v = probit_latent_draw(rng, model, gamma);
  const SandwichCoefficients coef =
      bayes_sandwich_coefficients(design, next.lambda, v);
  const double h = sample_sandwich_scale(rng, model.m(), coef);
  v *= h;
  const Eigen::VectorXd eta = probit_eta_given_v(rng, design, next.lambda, v);
  next.beta = eta.head(model.p());
  next.u = eta.tail(model.q());
  return next;
}

Eigen::VectorXd logistic_latent_draw(RngStream& rng, const ModelSpec& model,
                                     const Eigen::VectorXd& gamma) {
  if (model.family != Family::Logistic) {
    throw ContractError("logistic_latent_draw: requires a logistic model");
  }
  Eigen::VectorXd w(gamma.size());
  for (Eigen::Index i = 0; i < gamma.size(); ++i) {
    w[i] = sample_polya_gamma(rng, model.trials[i], gamma[i]);
  }
  return w;
}

Eigen::VectorXd logistic_u_given_w(RngStream& rng, const ModelSpec& model,
                                   const Eigen::VectorXd& lambda,
                                   const Eigen::VectorXd& beta,
                                   const Eigen::VectorXd& w) {
  const Eigen::MatrixXd& Z = model.Z;
  Eigen::MatrixXd S = Z.transpose() * w.asDiagonal() * Z;
  S.diagonal() += precision_diagonal(lambda, model.blocks);
  const Eigen::VectorXd kappa = binomial_kappa(model);
  const Eigen::VectorXd t =
      Z.transpose() * (kappa - w.cwiseProduct(model.X * beta));
  return sample_precision_normal(rng, S, t);
}

Eigen::VectorXd logistic_beta_given_uw(RngStream& rng, const ModelSpec& model,
                                       const PriorSpec& prior,
                                       const Eigen::VectorXd& u,
                                       const Eigen::VectorXd& w) {
  const Eigen::MatrixXd& X = model.X;
  const Eigen::MatrixXd S = X.transpose() * w.asDiagonal() * X + prior.Q;
  const Eigen::VectorXd kappa = binomial_kappa(model);
  const Eigen::VectorXd t = X.transpose() * kappa + prior.Q * prior.mu0 -
                            X.transpose() * w.cwiseProduct(model.Z * u);
  return sample_precision_normal(rng, S, t);
}

Eigen::VectorXd logistic_eta_given_w(RngStream& rng,
                                     const AugmentedDesign& design,
                                     const Eigen::VectorXd& lambda,
                                     const Eigen::VectorXd& w,
                                     const Eigen::VectorXd& kappa) {
  const Eigen::MatrixXd S =
      design.E.transpose() * w.asDiagonal() * design.E +
      design.penalty(lambda);
  const Eigen::VectorXd t = design.E.transpose() * kappa + design.theta;
  return sample_precision_normal(rng, S, t);
}

BayesState logistic_full_gibbs_step(RngStream& rng, const ModelSpec& model,
                                    const PriorSpec& prior,
                                    const BayesState& state) {
  require_proper_bayes(model, prior);
  BayesState next;
  next.lambda = lambda_gibbs(rng, prior, state.u, model.blocks);
  const Eigen::VectorXd gamma = linear_predictor(model, state.beta, state.u);
  const Eigen::VectorXd w = logistic_latent_draw(rng, model, gamma);
  next.u = logistic_u_given_w(rng, model, next.lambda, state.beta, w);
  next.beta = logistic_beta_given_uw(rng, model, prior, next.u, w);
  return next;
}

BayesState logistic_block_gibbs_step(RngStream& rng, const ModelSpec& model,
                                     const PriorSpec& prior,
                                     const BayesState& state) {
  require_proper_bayes(model, prior);
  AugmentedDesign design(model, prior);
  BayesState next;
  next.lambda = lambda_gibbs(rng, prior, state.u, model.blocks);
  const Eigen::VectorXd gamma = linear_predictor(model, state.beta, state.u);
  const Eigen::VectorXd w = logistic_latent_draw(rng, model, gamma);
  const Eigen::VectorXd eta =
      logistic_eta_given_w(rng, design, next.lambda, w, binomial_kappa(model));
  next.beta = eta.head(model.p());
  next.u = eta.tail(model.q());
  return next;
}

}  // namespace glmm
