#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "glmm/bayes_kernels.hpp"
#include "glmm/conditional_kernels.hpp"
#include "glmm/diagnostics.hpp"
#include "glmm/model.hpp"
#include "glmm/rng.hpp"

namespace glmm {

enum class ConditionalSampler { Mala, Hmc, DaProbit, HaarPxdaProbit, PgDaLogistic };
enum class BayesSampler {
  MalaGibbs,
  HmcGibbs,
  ProbitFullGibbs,
  ProbitBlockGibbs,
  ProbitHaarPxda,
  LogisticFullGibbs,
  LogisticBlockGibbs
};

struct SamplerSettings {
  double step_size = 0.1;
  int leapfrog_steps = 10;
  Eigen::MatrixXd mass;  // identity when empty
  bool adapt = true;     // tune the step size during burn-in (MALA/HMC only)
  double target_accept = std::numeric_limits<double>::quiet_NaN();
};

struct ChainOptions {
  long iterations = 10000;  // total, burn-in included
  long burn_in = 1000;
  int thin = 1;

  void validate() const;
};

// Column-labelled store of post-burn-in draws plus provenance.
struct SampleMatrix {
  Eigen::MatrixXd draws;  // stored iterations x d
  std::vector<std::string> names;
  std::uint64_t seed = 0;
  long iterations = 0;
  long burn_in = 0;
  int thin = 1;
  double accept_rate = std::numeric_limits<double>::quiet_NaN();
  double final_step_size = std::numeric_limits<double>::quiet_NaN();

  Eigen::Index column(const std::string& name) const;
};

SampleMatrix run_conditional_chain(RngStream& rng,
                                   const ConditionalTarget& target,
                                   ConditionalSampler sampler,
                                   const SamplerSettings& settings,
                                   const Eigen::VectorXd& u0,
                                   const ChainOptions& options);

SampleMatrix run_bayes_chain(RngStream& rng, const ModelSpec& model,
                             const PriorSpec& prior, BayesSampler sampler,
                             const SamplerSettings& settings,
                             const BayesState& init,
                             const ChainOptions& options);

// ACF (lags 1..max_lag), per-coordinate ESS, and per-group mESS / MSJ.
// Groups follow the column name prefixes (u, beta, lambda).
ChainSummary summarize_chain(const SampleMatrix& samples, int max_lag = 5);

const char* conditional_sampler_name(ConditionalSampler s);
const char* bayes_sampler_name(BayesSampler s);

}  // namespace glmm
