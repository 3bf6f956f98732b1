#include "glmm/diagnostics.hpp"

#include <cmath>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/LU>

#include "glmm/errors.hpp"

namespace glmm {

namespace {

double sample_variance(const Eigen::VectorXd& series) {
  const double mean = series.mean();
  return (series.array() - mean).square().sum() / series.size();
}

}  // namespace

double acf(const Eigen::VectorXd& series, int lag) {
  const Eigen::Index n = series.size();
  if (lag < 0 || n <= lag) {
    throw ContractError("acf: need more observations than the lag");
  }
  const double mean = series.mean();
  const double denom = (series.array() - mean).square().sum();
  if (!(denom > 0.0)) {
    throw NumericalError("acf: series has zero variance");
  }
  double num = 0.0;
  for (Eigen::Index i = 0; i + lag < n; ++i) {
    num += (series[i] - mean) * (series[i + lag] - mean);
  }
  return num / denom;
}

double ess(const Eigen::VectorXd& series) {
  const Eigen::Index n = series.size();
  if (n < 100) throw ContractError("ess: need at least 100 observations");
  const double var = sample_variance(series);
  if (!(var > 0.0)) throw NumericalError("ess: series has zero variance");

  const Eigen::Index batch = static_cast<Eigen::Index>(std::floor(std::sqrt(n)));
  const Eigen::Index num_batches = n / batch;
  const Eigen::Index used = batch * num_batches;
  const double mean = series.head(used).mean();
  double bm = 0.0;
  for (Eigen::Index j = 0; j < num_batches; ++j) {
    const double bmean = series.segment(j * batch, batch).mean();
    bm += (bmean - mean) * (bmean - mean);
  }
  // long-run variance estimate sigma^2_tau = b/(a-1) * sum (bar y_j - bar y)^2
  const double sigma_tau = batch * bm / (num_batches - 1);
  const double iat = sigma_tau / var;  // 1 + 2 sum rho_k, via batch means
  return n / std::max(iat, 1e-12);
}

double mess(const Eigen::MatrixXd& chains) {
  const Eigen::Index n = chains.rows();
  const Eigen::Index d = chains.cols();
  if (d == 1) return ess(chains.col(0));
  if (n < 100 || n <= d) {
    throw ContractError("mess: need many more observations than dimensions");
  }
  const Eigen::RowVectorXd mean = chains.colwise().mean();
  const Eigen::MatrixXd centered = chains.rowwise() - mean;
  const Eigen::MatrixXd sigma = centered.transpose() * centered / double(n);

  Eigen::LLT<Eigen::MatrixXd> llt(sigma);
  if (llt.info() != Eigen::Success) {
    // name the deficient coordinate set via pivoted LU rank detection
    Eigen::FullPivLU<Eigen::MatrixXd> lu(sigma);
    lu.setThreshold(1e-10);
    std::string bad;
    const auto perm = lu.permutationQ().indices();
    for (Eigen::Index k = lu.rank(); k < d; ++k) {
      if (!bad.empty()) bad += ", ";
      bad += std::to_string(perm[k]);
    }
    throw NumericalError(
        "mess: sample covariance is singular; deficient coordinate set {" +
        bad + "}");
  }

  const Eigen::Index batch = static_cast<Eigen::Index>(std::floor(std::sqrt(n)));
  const Eigen::Index num_batches = n / batch;
  const Eigen::Index used = batch * num_batches;
  const Eigen::RowVectorXd used_mean = chains.topRows(used).colwise().mean();
  Eigen::MatrixXd sigma_mc = Eigen::MatrixXd::Zero(d, d);
  for (Eigen::Index j = 0; j < num_batches; ++j) {
    const Eigen::RowVectorXd bmean =
        chains.middleRows(j * batch, batch).colwise().mean();
    const Eigen::RowVectorXd diff = bmean - used_mean;
    sigma_mc += diff.transpose() * diff;
  }
  sigma_mc *= double(batch) / double(num_batches - 1);

  Eigen::LLT<Eigen::MatrixXd> llt_mc(sigma_mc);
  if (llt_mc.info() != Eigen::Success) {
    throw NumericalError("mess: batch-means covariance is singular");
  }
  const double logdet_sigma =
      2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
  const double logdet_mc =
      2.0 * llt_mc.matrixL().toDenseMatrix().diagonal().array().log().sum();
  return n * std::exp((logdet_sigma - logdet_mc) / d);
}

double msj(const Eigen::MatrixXd& chain, Eigen::Index burn_in) {
  const Eigen::Index n = chain.rows();
  if (burn_in < 0 || n <= burn_in + 1) {
    throw ContractError("msj: need at least two post-burn-in iterates");
  }
  double total = 0.0;
  for (Eigen::Index i = burn_in; i + 1 < n; ++i) {
    total += (chain.row(i + 1) - chain.row(i)).squaredNorm();
  }
  return total / double(n - burn_in);
}

double adapt_step_size(double accept_hat, double target, int iter, double eps,
                       double gain) {
  if (iter < 1) iter = 1;
  return eps * std::exp(gain * (accept_hat - target) / std::pow(iter, 0.6));
}

}  // namespace glmm
