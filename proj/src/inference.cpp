#include "glmm/inference.hpp"

#include <cmath>

#include "glmm/errors.hpp"
#include "glmm/optim.hpp"

namespace glmm {

namespace {

Eigen::VectorXd pack(const Eigen::VectorXd& beta, const Eigen::VectorXd& lambda,
                     bool fix_lambda) {
  if (fix_lambda) return beta;
  Eigen::VectorXd x(beta.size() + lambda.size());
  x.head(beta.size()) = beta;
  x.tail(lambda.size()) = lambda.array().log();
  return x;
}

void unpack(const Eigen::VectorXd& x, Eigen::Index p, bool fix_lambda,
            const Eigen::VectorXd& lambda_fixed, Eigen::VectorXd& beta,
            Eigen::VectorXd& lambda) {
  beta = x.head(p);
  lambda = fix_lambda
               ? lambda_fixed
               : Eigen::VectorXd(x.tail(x.size() - p).array().exp());
}

SampleMatrix run_estep_chain(RngStream& rng, const ModelSpec& model,
                             const Eigen::VectorXd& beta,
                             const Eigen::VectorXd& lambda,
                             const Eigen::VectorXd& u_init,
                             const FitConfig& config) {
  const ConditionalTarget target(
      model, beta, covariance_from_precisions(lambda, model.blocks));
  ChainOptions options;
  const long burn = std::max<long>(1, config.mc_samples / 10);
  options.iterations = config.mc_samples + burn;
  options.burn_in = burn;
  options.thin = 1;
  return run_conditional_chain(rng, target, config.sampler, config.settings,
                               u_init, options);
}

}  // namespace

double mcem_q_value(const ModelSpec& model, const Eigen::MatrixXd& u_draws,
                    const Eigen::VectorXd& beta,
                    const Eigen::VectorXd& lambda) {
  double total = 0.0;
  for (Eigen::Index n = 0; n < u_draws.rows(); ++n) {
    total += log_complete_data(model, beta, lambda, u_draws.row(n));
  }
  return total / double(u_draws.rows());
}

double mcml_objective(const ModelSpec& model, const Eigen::MatrixXd& u_draws,
                      const Eigen::VectorXd& beta_anchor,
                      const Eigen::VectorXd& lambda_anchor,
                      const Eigen::VectorXd& beta,
                      const Eigen::VectorXd& lambda) {
  const Eigen::Index n_draws = u_draws.rows();
  Eigen::VectorXd diff(n_draws);
  for (Eigen::Index n = 0; n < n_draws; ++n) {
    diff[n] = log_complete_data(model, beta, lambda, u_draws.row(n)) -
              log_complete_data(model, beta_anchor, lambda_anchor,
                                u_draws.row(n));
  }
  const double shift = diff.maxCoeff();
  const double lse =
      shift + std::log((diff.array() - shift).exp().sum());
  return lse - std::log(double(n_draws));
}

FitResult mcem_fit(RngStream& rng, const ModelSpec& model,
                   const Eigen::VectorXd& beta0,
                   const Eigen::VectorXd& lambda0, const FitConfig& config) {
  model.validate();
  if (lambda0.size() != model.r() || (lambda0.array() <= 0.0).any()) {
    throw ContractError("mcem_fit: initial lambda must be positive per block");
  }

  FitResult result;
  Eigen::VectorXd beta = beta0;
  Eigen::VectorXd lambda = lambda0;
  Eigen::VectorXd u_warm = Eigen::VectorXd::Zero(model.q());
  Eigen::MatrixXd trajectory(config.max_iterations, model.p() + model.r());

  int hits = 0;
  int it = 0;
  for (; it < config.max_iterations; ++it) {
    const SampleMatrix chain =
        run_estep_chain(rng, model, beta, lambda, u_warm, config);
    if (chain.draws.rows() > 0) {
      u_warm = chain.draws.row(chain.draws.rows() - 1);
    }

    const Eigen::VectorXd x0 = pack(beta, lambda, config.fix_lambda);
    auto objective = [&](const Eigen::VectorXd& x) {
      Eigen::VectorXd b, l;
      unpack(x, model.p(), config.fix_lambda, lambda, b, l);
      return -mcem_q_value(model, chain.draws, b, l);
    };
    const NelderMeadResult opt =
        nelder_mead(objective, x0, config.optimizer_step,
                    config.optimizer_tolerance, config.optimizer_max_evals);
    if (!std::isfinite(opt.value)) {
      throw NumericalError("mcem_fit: M-step optimizer failed at iteration " +
                           std::to_string(it + 1));
    }

    const double delta = (opt.x - x0).lpNorm<Eigen::Infinity>();
    unpack(opt.x, model.p(), config.fix_lambda, lambda, beta, lambda);
    trajectory.row(it).head(model.p()) = beta.transpose();
    trajectory.row(it).tail(model.r()) = lambda.transpose();
    result.objective = -opt.value;

    hits = (delta < config.tolerance) ? hits + 1 : 0;
    if (hits >= 3) {
      ++it;
      result.converged = true;
      break;
    }
  }

  result.beta = beta;
  result.lambda = lambda;
  result.iterations = it;
  result.trajectory = trajectory.topRows(it);
  return result;
}

FitResult mcml_fit(RngStream& rng, const ModelSpec& model,
                   const Eigen::VectorXd& beta0,
                   const Eigen::VectorXd& lambda0, const FitConfig& config) {
  model.validate();
  if (lambda0.size() != model.r() || (lambda0.array() <= 0.0).any()) {
    throw ContractError("mcml_fit: anchor lambda must be positive per block");
  }

  FitResult result;
  Eigen::VectorXd anchor_beta = beta0;
  Eigen::VectorXd anchor_lambda = lambda0;
  Eigen::VectorXd u_warm = Eigen::VectorXd::Zero(model.q());
  const int rounds = std::max(0, config.pilot_rounds) + 1;
  Eigen::MatrixXd trajectory(rounds, model.p() + model.r());

  Eigen::VectorXd beta = anchor_beta;
  Eigen::VectorXd lambda = anchor_lambda;
  for (int round = 0; round < rounds; ++round) {
    const SampleMatrix chain = run_estep_chain(rng, model, anchor_beta,
                                               anchor_lambda, u_warm, config);
    if (chain.draws.rows() > 0) {
      u_warm = chain.draws.row(chain.draws.rows() - 1);
    }

    const Eigen::VectorXd x0 =
        pack(anchor_beta, anchor_lambda, config.fix_lambda);
    auto objective = [&](const Eigen::VectorXd& x) {
      Eigen::VectorXd b, l;
      unpack(x, model.p(), config.fix_lambda, anchor_lambda, b, l);
      return -mcml_objective(model, chain.draws, anchor_beta, anchor_lambda,
                             b, l);
    };
    const NelderMeadResult opt =
        nelder_mead(objective, x0, config.optimizer_step,
                    config.optimizer_tolerance, config.optimizer_max_evals);
    if (!std::isfinite(opt.value)) {
      throw NumericalError("mcml_fit: maximization failed");
    }
    unpack(opt.x, model.p(), config.fix_lambda, anchor_lambda, beta, lambda);
    trajectory.row(round).head(model.p()) = beta.transpose();
    trajectory.row(round).tail(model.r()) = lambda.transpose();
    result.objective = -opt.value;

    // importance weight diagnostics at the maximizer
    Eigen::VectorXd diff(chain.draws.rows());
    for (Eigen::Index n = 0; n < chain.draws.rows(); ++n) {
      diff[n] = log_complete_data(model, beta, lambda, chain.draws.row(n)) -
                log_complete_data(model, anchor_beta, anchor_lambda,
                                  chain.draws.row(n));
    }
    const double shift = diff.maxCoeff();
    const Eigen::ArrayXd w = (diff.array() - shift).exp();
    result.importance_ess = (w.sum() * w.sum()) / w.square().sum();

    const double floor = (config.importance_ess_floor > 0.0)
                             ? config.importance_ess_floor
                             : 0.05 * double(config.mc_samples);
    if (result.importance_ess < floor) {
      result.warnings.push_back(
          "importance weights are degenerate (ESS " +
          std::to_string(result.importance_ess) + " < floor " +
          std::to_string(floor) +
          "); consider pilot iterations to move the anchor");
    }

    if (round + 1 < rounds) {  // re-anchor and rerun
      anchor_beta = beta;
      anchor_lambda = lambda;
    }
  }

  result.beta = beta;
  result.lambda = lambda;
  result.iterations = rounds;
  result.trajectory = trajectory;
  result.converged = true;
  return result;
}

}  // namespace glmm
