#include "glmm/runner.hpp"

#include <cmath>
#include <deque>

#include "glmm/errors.hpp"

namespace glmm {

namespace {

std::vector<std::string> u_names(Eigen::Index q) {
  std::vector<std::string> names;
  names.reserve(q);
  for (Eigen::Index i = 0; i < q; ++i) {
    names.push_back("u." + std::to_string(i + 1));
  }
  return names;
}

std::vector<std::string> bayes_names(Eigen::Index q, Eigen::Index p,
                                     Eigen::Index r) {
  std::vector<std::string> names = u_names(q);
  for (Eigen::Index i = 0; i < p; ++i) {
    names.push_back("beta." + std::to_string(i));
  }
  for (Eigen::Index j = 0; j < r; ++j) {
    names.push_back("lambda." + std::to_string(j + 1));
  }
  return names;
}

// Running window of recent acceptance probabilities for adaptation.
class AcceptanceWindow {
 public:
  void record(double alpha) {
    window_.push_back(alpha);
    if (window_.size() > 25) window_.pop_front();
  }
  double mean() const {
    if (window_.empty()) return 0.0;
    double s = 0.0;
    for (double a : window_) s += a;
    return s / window_.size();
  }

 private:
  std::deque<double> window_;
};

bool uses_step_size(ConditionalSampler s) {
  return s == ConditionalSampler::Mala || s == ConditionalSampler::Hmc;
}

bool uses_step_size(BayesSampler s) {
  return s == BayesSampler::MalaGibbs || s == BayesSampler::HmcGibbs;
}

double default_target(bool is_hmc) {
  return is_hmc ? kHmcTargetAcceptance : kMalaTargetAcceptance;
}

}  // namespace

void ChainOptions::validate() const {
  if (iterations <= burn_in || burn_in < 0) {
    throw ConfigError("chain options: need iterations > burn_in >= 0");
  }
  if (thin < 1) throw ConfigError("chain options: thin must be >= 1");
}

Eigen::Index SampleMatrix::column(const std::string& name) const {
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) return static_cast<Eigen::Index>(i);
  }
  throw ContractError("SampleMatrix: no column named '" + name + "'");
}

SampleMatrix run_conditional_chain(RngStream& rng,
                                   const ConditionalTarget& target,
                                   ConditionalSampler sampler,
                                   const SamplerSettings& settings,
                                   const Eigen::VectorXd& u0,
                                   const ChainOptions& options) {
  options.validate();
  const Eigen::Index q = target.model.q();
  if (u0.size() != q) {
    throw ContractError("run_conditional_chain: initial u has wrong size");
  }

  const long stored = (options.iterations - options.burn_in) / options.thin;
  SampleMatrix out;
  out.draws.resize(stored, q);
  out.names = u_names(q);
  out.seed = rng.seed();
  out.iterations = options.iterations;
  out.burn_in = options.burn_in;
  out.thin = options.thin;

  const bool is_hmc = (sampler == ConditionalSampler::Hmc);
  const bool adaptive = settings.adapt && uses_step_size(sampler);
  const double target_accept = std::isnan(settings.target_accept)
                                   ? default_target(is_hmc)
                                   : settings.target_accept;

  double eps = settings.step_size;
  Eigen::VectorXd u = u0;
  AcceptanceWindow window;
  double accept_sum = 0.0;
  long accept_count = 0;
  long row = 0;
  double frozen_eps = eps;

  for (long n = 1; n <= options.iterations; ++n) {
    const bool in_burn_in = (n <= options.burn_in);
    double alpha = std::numeric_limits<double>::quiet_NaN();

    switch (sampler) {
      case ConditionalSampler::Mala: {
        MalaConfig cfg{eps};
        KernelOutcome o = mala_step(rng, target, u, cfg);
        u = o.state;
        alpha = o.alpha;
        break;
      }
      case ConditionalSampler::Hmc: {
        HmcConfig cfg{eps, settings.leapfrog_steps, settings.mass};
        KernelOutcome o = hmc_step(rng, target, u, cfg);
        u = o.state;
        alpha = o.alpha;
        break;
      }
      case ConditionalSampler::DaProbit:
        u = da_probit_step(rng, target, u);
        break;
      case ConditionalSampler::HaarPxdaProbit:
        u = haar_pxda_probit_step(rng, target, u);
        break;
      case ConditionalSampler::PgDaLogistic:
        u = pg_da_logistic_step(rng, target, u);
        break;
    }

    if (!std::isnan(alpha)) {
      window.record(alpha);
      if (!in_burn_in) {
        accept_sum += alpha;
        ++accept_count;
      }
    }
    if (in_burn_in && adaptive && !std::isnan(alpha)) {
      eps = adapt_step_size(window.mean(), target_accept,
                            static_cast<int>(n), eps);
      if (n == options.burn_in) frozen_eps = eps;
    } else if (n == options.burn_in) {
      frozen_eps = eps;
    }

    if (!in_burn_in) {
      if (eps != frozen_eps && options.burn_in > 0 && adaptive) {
        throw NumericalError("run_conditional_chain: step size changed "
                             "after burn-in");
      }
      const long k = n - options.burn_in;
      if (k % options.thin == 0 && row < stored) {
        out.draws.row(row++) = u.transpose();
      }
    }
  }

  out.accept_rate = (accept_count > 0)
                        ? accept_sum / accept_count
                        : std::numeric_limits<double>::quiet_NaN();
  out.final_step_size =
      uses_step_size(sampler) ? eps : std::numeric_limits<double>::quiet_NaN();
  return out;
}

SampleMatrix run_bayes_chain(RngStream& rng, const ModelSpec& model,
                             const PriorSpec& prior, BayesSampler sampler,
                             const SamplerSettings& settings,
                             const BayesState& init,
                             const ChainOptions& options) {
  options.validate();
  model.validate();
  prior.validate(model.p(), model.r());
  const Eigen::Index q = model.q(), p = model.p(), r = model.r();
  if (init.u.size() != q || init.beta.size() != p || init.lambda.size() != r) {
    throw ContractError("run_bayes_chain: initial state has wrong dimensions");
  }

  const long stored = (options.iterations - options.burn_in) / options.thin;
  SampleMatrix out;
  out.draws.resize(stored, q + p + r);
  out.names = bayes_names(q, p, r);
  out.seed = rng.seed();
  out.iterations = options.iterations;
  out.burn_in = options.burn_in;
  out.thin = options.thin;

  const bool is_hmc = (sampler == BayesSampler::HmcGibbs);
  const bool adaptive = settings.adapt && uses_step_size(sampler);
  const double target_accept = std::isnan(settings.target_accept)
                                   ? default_target(is_hmc)
                                   : settings.target_accept;

  double eps = settings.step_size;
  BayesState state = init;
  AcceptanceWindow window;
  double accept_sum = 0.0;
  long accept_count = 0;
  long row = 0;
  double frozen_eps = eps;

  for (long n = 1; n <= options.iterations; ++n) {
    const bool in_burn_in = (n <= options.burn_in);
    double alpha = std::numeric_limits<double>::quiet_NaN();

    switch (sampler) {
      case BayesSampler::MalaGibbs: {
        MalaConfig cfg{eps};
        BayesOutcome o = mala_within_gibbs_step(rng, model, prior, state, cfg);
        state = o.state;
        alpha = o.alpha;
        break;
      }
      case BayesSampler::HmcGibbs: {
        HmcConfig cfg{eps, settings.leapfrog_steps, settings.mass};
        BayesOutcome o = hmc_within_gibbs_step(rng, model, prior, state, cfg);
        state = o.state;
        alpha = o.alpha;
        break;
      }
      case BayesSampler::ProbitFullGibbs:
        state = probit_full_gibbs_step(rng, model, prior, state);
        break;
      case BayesSampler::ProbitBlockGibbs:
        state = probit_block_gibbs_step(rng, model, prior, state);
        break;
      case BayesSampler::ProbitHaarPxda:
        state = probit_haar_pxda_step(rng, model, prior, state);
        break;
      case BayesSampler::LogisticFullGibbs:
        state = logistic_full_gibbs_step(rng, model, prior, state);
        break;
      case BayesSampler::LogisticBlockGibbs:
        state = logistic_block_gibbs_step(rng, model, prior, state);
        break;
    }

    if (!std::isnan(alpha)) {
      window.record(alpha);
      if (!in_burn_in) {
        accept_sum += alpha;
        ++accept_count;
      }
    }
    if (in_burn_in && adaptive && !std::isnan(alpha)) {
      eps = adapt_step_size(window.mean(), target_accept,
                            static_cast<int>(n), eps);
      if (n == options.burn_in) frozen_eps = eps;
    } else if (n == options.burn_in) {
      frozen_eps = eps;
    }

    if (!in_burn_in) {
      if (eps != frozen_eps && options.burn_in > 0 && adaptive) {
        throw NumericalError("run_bayes_chain: step size changed after burn-in");
      }
      const long k = n - options.burn_in;
      if (k % options.thin == 0 && row < stored) {
        out.draws.row(row).head(q) = state.u.transpose();
        out.draws.row(row).segment(q, p) = state.beta.transpose();
        out.draws.row(row).tail(r) = state.lambda.transpose();
        ++row;
      }
    }
  }

  out.accept_rate = (accept_count > 0)
                        ? accept_sum / accept_count
                        : std::numeric_limits<double>::quiet_NaN();
  out.final_step_size =
      uses_step_size(sampler) ? eps : std::numeric_limits<double>::quiet_NaN();
  return out;
}

namespace {

std::vector<Eigen::Index> group_columns(const std::vector<std::string>& names,
                                        const std::string& prefix) {
  std::vector<Eigen::Index> cols;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i].rfind(prefix + ".", 0) == 0) {
      cols.push_back(static_cast<Eigen::Index>(i));
    }
  }
  return cols;
}

Eigen::MatrixXd select_columns(const Eigen::MatrixXd& draws,
                               const std::vector<Eigen::Index>& cols) {
  Eigen::MatrixXd out(draws.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t i = 0; i < cols.size(); ++i) {
    out.col(static_cast<Eigen::Index>(i)) = draws.col(cols[i]);
  }
  return out;
}

}  // namespace

ChainSummary summarize_chain(const SampleMatrix& samples, int max_lag) {
  const Eigen::Index d = samples.draws.cols();
  ChainSummary summary;
  summary.names = samples.names;
  summary.accept_rate = samples.accept_rate;
  summary.acf_table.resize(d, max_lag);
  summary.ess_values.resize(d);
  for (Eigen::Index c = 0; c < d; ++c) {
    for (int lag = 1; lag <= max_lag; ++lag) {
      double value = std::numeric_limits<double>::quiet_NaN();
      try {
        value = acf(samples.draws.col(c), lag);
      } catch (const NumericalError&) {
      }
      summary.acf_table(c, lag - 1) = value;
    }
    try {
      summary.ess_values[c] = ess(samples.draws.col(c));
    } catch (const std::exception&) {
      summary.ess_values[c] = std::numeric_limits<double>::quiet_NaN();
    }
  }

  std::vector<std::pair<std::string, std::vector<Eigen::Index>>> groups;
  for (const char* prefix : {"u", "beta", "lambda"}) {
    auto cols = group_columns(samples.names, prefix);
    if (!cols.empty()) groups.emplace_back(prefix, std::move(cols));
  }
  {
    auto beta_cols = group_columns(samples.names, "beta");
    auto lambda_cols = group_columns(samples.names, "lambda");
    if (!beta_cols.empty() && !lambda_cols.empty()) {
      std::vector<Eigen::Index> both = beta_cols;
      both.insert(both.end(), lambda_cols.begin(), lambda_cols.end());
      groups.emplace_back("beta+lambda", std::move(both));
    }
  }

  for (const auto& [name, cols] : groups) {
    const Eigen::MatrixXd sub = select_columns(samples.draws, cols);
    double group_mess = std::numeric_limits<double>::quiet_NaN();
    try {
      group_mess = mess(sub);
    } catch (const std::exception&) {
    }
    summary.mess_groups.emplace_back(name, group_mess);
    if (name != "beta+lambda") {
      summary.msj_groups.emplace_back(name, msj(sub, 0));
    }
  }
  return summary;
}

const char* conditional_sampler_name(ConditionalSampler s) {
  switch (s) {
    case ConditionalSampler::Mala: return "mala";
    case ConditionalSampler::Hmc: return "hmc";
    case ConditionalSampler::DaProbit: return "da";
    case ConditionalSampler::HaarPxdaProbit: return "pxda";
    case ConditionalSampler::PgDaLogistic: return "pgda";
  }
  return "?";
}

const char* bayes_sampler_name(BayesSampler s) {
  switch (s) {
    case BayesSampler::MalaGibbs: return "mala-gibbs";
    case BayesSampler::HmcGibbs: return "hmc-gibbs";
    case BayesSampler::ProbitFullGibbs: return "fg";
    case BayesSampler::ProbitBlockGibbs: return "bg";
    case BayesSampler::ProbitHaarPxda: return "haar";
    case BayesSampler::LogisticFullGibbs: return "fg";
    case BayesSampler::LogisticBlockGibbs: return "bg";
  }
  return "?";
}

}  // namespace glmm
