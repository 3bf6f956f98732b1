#include "glmm/model.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include <Eigen/Cholesky>

#include "glmm/errors.hpp"
#include "glmm/normal.hpp"

namespace glmm {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;

double softplus(double x) {
  // log(1 + e^x) without overflow
  return (x > 0.0) ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

double sigmoid(double x) {
  return (x >= 0.0) ? 1.0 / (1.0 + std::exp(-x))
                    : std::exp(x) / (1.0 + std::exp(x));
}

}  // namespace

const char* family_name(Family family) {
  switch (family) {
    case Family::Logistic: return "logistic";
    case Family::Probit: return "probit";
    case Family::PoissonLog: return "poisson-log";
  }
  return "?";
}

Family family_from_name(const std::string& name) {
  if (name == "logistic") return Family::Logistic;
  if (name == "probit") return Family::Probit;
  if (name == "poisson-log" || name == "poisson") return Family::PoissonLog;
  throw ConfigError("unknown family '" + name +
                    "' (expected logistic|probit|poisson-log)");
}

void ModelSpec::validate() const {
  const Eigen::Index n = m();
  if (X.rows() != n || Z.rows() != n) {
    throw ContractError("ModelSpec: X and Z must have one row per response");
  }
  if (family != Family::PoissonLog && trials.size() != n) {
    throw ContractError("ModelSpec: trials must have one entry per response");
  }
  int sum = 0;
  for (int b : blocks) {
    if (b <= 0) throw ContractError("ModelSpec: block sizes must be positive");
    sum += b;
  }
  if (sum != q()) {
    throw ContractError("ModelSpec: block sizes must sum to the Z column count");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (family == Family::PoissonLog) {
      if (y[i] < 0) throw ContractError("ModelSpec: Poisson responses must be >= 0");
    } else {
      if (trials[i] <= 0) throw ContractError("ModelSpec: trials must be positive");
      if (y[i] < 0 || y[i] > trials[i]) {
        throw ContractError("ModelSpec: binomial responses must satisfy 0 <= y <= trials");
      }
    }
  }
}

Eigen::VectorXd linear_predictor(const ModelSpec& model,
                                 const Eigen::VectorXd& beta,
                                 const Eigen::VectorXd& u) {
  if (beta.size() != model.p() || u.size() != model.q()) {
    throw ContractError("linear_predictor: dimension mismatch");
  }
  return model.X * beta + model.Z * u;
}

double family_loglik(const ModelSpec& model, const Eigen::VectorXd& gamma) {
  double total = 0.0;
  switch (model.family) {
    case Family::Logistic:
      for (Eigen::Index i = 0; i < gamma.size(); ++i) {
        total += model.y[i] * gamma[i] - model.trials[i] * softplus(gamma[i]);
      }
      break;
    case Family::Probit:
      for (Eigen::Index i = 0; i < gamma.size(); ++i) {
        const int yi = model.y[i];
        const int li = model.trials[i];
        if (yi > 0) total += yi * log_normal_cdf(gamma[i]);
        if (li - yi > 0) total += (li - yi) * log_normal_cdf(-gamma[i]);
      }
      break;
    case Family::PoissonLog:
      for (Eigen::Index i = 0; i < gamma.size(); ++i) {
        total += model.y[i] * gamma[i] - std::exp(gamma[i]);
      }
      break;
  }
  return total;
}

Eigen::VectorXd family_score(const ModelSpec& model,
                             const Eigen::VectorXd& gamma) {
  Eigen::VectorXd score(gamma.size());
  switch (model.family) {
    case Family::Logistic:
      for (Eigen::Index i = 0; i < gamma.size(); ++i) {
        score[i] = model.y[i] - model.trials[i] * sigmoid(gamma[i]);
      }
      break;
    case Family::Probit:
      for (Eigen::Index i = 0; i < gamma.size(); ++i) {
        const double tau1 = model.y[i] * normal_cdf_ratio(gamma[i]);
        const double tau2 =
            (model.trials[i] - model.y[i]) * normal_cdf_ratio(-gamma[i]);
        score[i] = tau1 - tau2;
      }
      break;
    case Family::PoissonLog:
      for (Eigen::Index i = 0; i < gamma.size(); ++i) {
        score[i] = model.y[i] - std::exp(gamma[i]);
      }
      break;
  }
  return score;
}

ConditionalTarget::ConditionalTarget(ModelSpec model_in,
                                     Eigen::VectorXd beta_in,
                                     Eigen::MatrixXd G_in)
    : model(std::move(model_in)),
      beta(std::move(beta_in)),
      G(std::move(G_in)) {
  model.validate();
  if (beta.size() != model.p()) {
    throw ContractError("ConditionalTarget: beta has wrong dimension");
  }
  if (G.rows() != model.q() || G.cols() != model.q()) {
    throw ContractError("ConditionalTarget: G must be q x q");
  }
  Eigen::LLT<Eigen::MatrixXd> llt(G);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("ConditionalTarget: G is not positive definite");
  }
  G_chol = llt.matrixL();
  G_inv = llt.solve(Eigen::MatrixXd::Identity(G.rows(), G.cols()));
  log_det_G = 2.0 * G_chol.diagonal().array().log().sum();
}

double log_conditional_u(const ConditionalTarget& target,
                         const Eigen::VectorXd& u) {
  if (u.size() != target.model.q()) {
    throw ContractError("log_conditional_u: u has wrong dimension");
  }
  const Eigen::VectorXd v =
      target.G_chol.triangularView<Eigen::Lower>().solve(u);
  const Eigen::VectorXd gamma = linear_predictor(target.model, target.beta, u);
  return -0.5 * (v.squaredNorm() + target.log_det_G) +
         family_loglik(target.model, gamma);
}

Eigen::VectorXd grad_log_conditional_u(const ConditionalTarget& target,
                                       const Eigen::VectorXd& u) {
  if (u.size() != target.model.q()) {
    throw ContractError("grad_log_conditional_u: u has wrong dimension");
  }
  const Eigen::VectorXd gamma = linear_predictor(target.model, target.beta, u);
  return -(target.G_inv * u) +
         target.model.Z.transpose() * family_score(target.model, gamma);
}

void PriorSpec::validate(Eigen::Index p, int r) const {
  if (mu0.size() != p || Q.rows() != p || Q.cols() != p) {
    throw ContractError("PriorSpec: mu0 / Q dimensions must match p");
  }
  if (static_cast<int>(gamma_params.size()) != r) {
    throw ContractError("PriorSpec: one (a_j, b_j) pair required per block");
  }
  for (const auto& g : gamma_params) {
    if (!(g.a > 0.0) || !(g.b > 0.0)) {
      throw ContractError("PriorSpec: gamma hyperparameters must be positive "
                          "(proper priors only)");
    }
  }
}

Eigen::VectorXd block_squared_norms(const Eigen::VectorXd& u,
                                    const std::vector<int>& blocks) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(blocks.size()));
  Eigen::Index offset = 0;
  for (std::size_t j = 0; j < blocks.size(); ++j) {
    out[static_cast<Eigen::Index>(j)] = u.segment(offset, blocks[j]).squaredNorm();
    offset += blocks[j];
  }
  return out;
}

Eigen::MatrixXd covariance_from_precisions(const Eigen::VectorXd& lambda,
                                           const std::vector<int>& blocks) {
  int q = std::accumulate(blocks.begin(), blocks.end(), 0);
  Eigen::VectorXd diag(q);
  Eigen::Index offset = 0;
  for (std::size_t j = 0; j < blocks.size(); ++j) {
    if (!(lambda[static_cast<Eigen::Index>(j)] > 0.0)) {
      throw std::domain_error("covariance_from_precisions: lambda_j must be > 0");
    }
    diag.segment(offset, blocks[j])
        .setConstant(1.0 / lambda[static_cast<Eigen::Index>(j)]);
    offset += blocks[j];
  }
  return diag.asDiagonal();
}

double log_joint_bayes(const ModelSpec& model, const PriorSpec& prior,
                       const BayesState& state) {
  prior.validate(model.p(), model.r());
  if (state.lambda.size() != model.r()) {
    throw ContractError("log_joint_bayes: lambda has wrong dimension");
  }
  for (Eigen::Index j = 0; j < state.lambda.size(); ++j) {
    if (!(state.lambda[j] > 0.0)) {
      throw std::domain_error("log_joint_bayes: lambda_j must be > 0");
    }
  }
  const Eigen::VectorXd gamma =
      linear_predictor(model, state.beta, state.u);
  const Eigen::VectorXd diff = state.beta - prior.mu0;
  const Eigen::VectorXd ssq = block_squared_norms(state.u, model.blocks);
  double lambda_terms = 0.0;
  for (int j = 0; j < model.r(); ++j) {
    const auto& g = prior.gamma_params[j];
    lambda_terms +=
        (g.a - 1.0 + 0.5 * model.blocks[j]) * std::log(state.lambda[j]) -
        (g.b + 0.5 * ssq[j]) * state.lambda[j];
  }
  return family_loglik(model, gamma) - 0.5 * diff.dot(prior.Q * diff) +
         lambda_terms;
}

double log_conditional_zeta(const ModelSpec& model, const PriorSpec& prior,
                            const Eigen::VectorXd& lambda,
                            const Eigen::VectorXd& u,
                            const Eigen::VectorXd& beta) {
  const Eigen::VectorXd gamma = linear_predictor(model, beta, u);
  const Eigen::VectorXd diff = beta - prior.mu0;
  const Eigen::VectorXd ssq = block_squared_norms(u, model.blocks);
  double penalty = 0.0;
  for (int j = 0; j < model.r(); ++j) penalty += lambda[j] * ssq[j];
  return family_loglik(model, gamma) - 0.5 * diff.dot(prior.Q * diff) -
         0.5 * penalty;
}

Eigen::VectorXd grad_log_conditional_zeta(const ModelSpec& model,
                                          const PriorSpec& prior,
                                          const Eigen::VectorXd& lambda,
                                          const Eigen::VectorXd& u,
                                          const Eigen::VectorXd& beta) {
  const Eigen::VectorXd gamma = linear_predictor(model, beta, u);
  const Eigen::VectorXd score = family_score(model, gamma);
  Eigen::VectorXd grad(model.q() + model.p());
  // u-block: -D(lambda) u + Z^T score
  Eigen::VectorXd du = model.Z.transpose() * score;
  Eigen::Index offset = 0;
  for (int j = 0; j < model.r(); ++j) {
    du.segment(offset, model.blocks[j]) -=
        lambda[j] * u.segment(offset, model.blocks[j]);
    offset += model.blocks[j];
  }
  grad.head(model.q()) = du;
  grad.tail(model.p()) =
      model.X.transpose() * score - prior.Q * (beta - prior.mu0);
  return grad;
}

Eigen::VectorXd grad_log_joint_zeta(const ModelSpec& model,
                                    const PriorSpec& prior,
                                    const BayesState& state) {
  return grad_log_conditional_zeta(model, prior, state.lambda, state.u,
                                   state.beta);
}

double log_complete_data(const ModelSpec& model, const Eigen::VectorXd& beta,
                         const Eigen::VectorXd& lambda,
                         const Eigen::VectorXd& u) {
  const Eigen::VectorXd gamma = linear_predictor(model, beta, u);
  const Eigen::VectorXd ssq = block_squared_norms(u, model.blocks);
  double normal_part = -0.5 * model.q() * kLog2Pi;
  for (int j = 0; j < model.r(); ++j) {
    if (!(lambda[j] > 0.0)) {
      throw std::domain_error("log_complete_data: lambda_j must be > 0");
    }
    normal_part += 0.5 * model.blocks[j] * std::log(lambda[j]) -
                   0.5 * lambda[j] * ssq[j];
  }
  return family_loglik(model, gamma) + normal_part;
}

}  // namespace glmm
