#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/LU>

namespace oracles {

namespace {

double simpson(const std::function<double(double)>& f, double a, double fa,
               double b, double fb, double m, double fm) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive(const std::function<double(double)>& f, double a, double fa,
                double b, double fb, double m, double fm, double whole,
                double tol, int depth) {
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = simpson(f, a, fa, m, fm, lm, flm);
  const double right = simpson(f, m, fm, b, fb, rm, frm);
  if (depth <= 0 || std::fabs(left + right - whole) <= 15.0 * tol) {
    return left + right + (left + right - whole) / 15.0;
  }
  return adaptive(f, a, fa, m, fm, lm, flm, left, tol / 2.0, depth - 1) +
         adaptive(f, m, fm, b, fb, rm, frm, right, tol / 2.0, depth - 1);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol) {
  const double m = 0.5 * (a + b);
  const double fa = f(a), fb = f(b), fm = f(m);
  const double whole = simpson(f, a, fa, b, fb, m, fm);
  return adaptive(f, a, fa, b, fb, m, fm, whole, tol, 48);
}

Moments density_moments(const std::function<double(double)>& logf, double a,
                        double b, double tol) {
  // shift by the max over a scan grid to avoid underflow
  double shift = -1e300;
  const int grid = 512;
  for (int i = 0; i <= grid; ++i) {
    shift = std::max(shift, logf(a + (b - a) * i / grid));
  }
  auto dens = [&](double x) { return std::exp(logf(x) - shift); };
  Moments mom;
  mom.mass = integrate(dens, a, b, tol);
  const double m1 =
      integrate([&](double x) { return x * dens(x); }, a, b, tol) / mom.mass;
  const double m2 =
      integrate([&](double x) { return x * x * dens(x); }, a, b, tol) /
      mom.mass;
  mom.mean = m1;
  mom.variance = m2 - m1 * m1;
  return mom;
}

Eigen::VectorXd fd_gradient(
    const std::function<double(const Eigen::VectorXd&)>& f,
    const Eigen::VectorXd& x, double h) {
  Eigen::VectorXd grad(x.size());
  Eigen::VectorXd lo = x, hi = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double step = h * std::max(1.0, std::fabs(x[i]));
    hi[i] = x[i] + step;
    lo[i] = x[i] - step;
    grad[i] = (f(hi) - f(lo)) / (2.0 * step);
    hi[i] = x[i];
    lo[i] = x[i];
  }
  return grad;
}

double pg_pdf(double x, int b, double c, int terms) {
  if (x <= 0.0) return 0.0;
  // log Gamma via lgamma; series from the PG density with cosh tilt
  const double log_cosh = std::log(std::cosh(0.5 * c));
  double total = 0.0;
  for (int j = 0; j < terms; ++j) {
    const double coef =
        std::exp(std::lgamma(j + b) - std::lgamma(j + 1) - std::lgamma(b) +
                 b * log_cosh + (b - 1) * std::log(2.0));
    const double arg = 2.0 * j + b;
    const double term = coef * arg / std::sqrt(2.0 * M_PI * x * x * x) *
                        std::exp(-arg * arg / (8.0 * x) - 0.5 * x * c * c);
    total += (j % 2 == 0) ? term : -term;
  }
  return total;
}

double pg_mean_quadrature(int b, double c) {
  auto f = [&](double x) { return x * pg_pdf(x, b, c); };
  // the density is concentrated well below 5 for small b
  return integrate(f, 1e-12, 2.0 + 2.0 * b, 1e-12) /
         integrate([&](double x) { return pg_pdf(x, b, c); }, 1e-12,
                   2.0 + 2.0 * b, 1e-12);
}

Eigen::VectorXd dense_precision_normal(glmm::RngStream& rng,
                                       const Eigen::MatrixXd& S,
                                       const Eigen::VectorXd& t) {
  const Eigen::MatrixXd cov = S.inverse();
  const Eigen::VectorXd mean = cov * t;
  const Eigen::LLT<Eigen::MatrixXd> llt(cov);
  const Eigen::MatrixXd L = llt.matrixL();
  return mean + L * rng.normal_vector(t.size());
}

Eigen::VectorXd glm_irls(glmm::Family family, const Eigen::VectorXi& y,
                         const Eigen::VectorXi& trials,
                         const Eigen::MatrixXd& X, int max_iter) {
  const Eigen::Index m = y.size(), p = X.cols();
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
  for (int it = 0; it < max_iter; ++it) {
    const Eigen::VectorXd eta = X * beta;
    Eigen::VectorXd score(m), weight(m);
    for (Eigen::Index i = 0; i < m; ++i) {
      switch (family) {
        case glmm::Family::Logistic: {
          const double pr = 1.0 / (1.0 + std::exp(-eta[i]));
          score[i] = y[i] - trials[i] * pr;
          weight[i] = trials[i] * pr * (1.0 - pr);
          break;
        }
        case glmm::Family::Probit: {
          const double phi = std::exp(-0.5 * eta[i] * eta[i]) /
                             std::sqrt(2.0 * M_PI);
          const double Phi = 0.5 * std::erfc(-eta[i] / std::sqrt(2.0));
          const double r1 = phi / std::max(Phi, 1e-300);
          const double r2 = phi / std::max(1.0 - Phi, 1e-300);
          score[i] = y[i] * r1 - (trials[i] - y[i]) * r2;
          // expected information weight
          weight[i] = trials[i] * phi * phi /
                      std::max(Phi * (1.0 - Phi), 1e-300);
          break;
        }
        case glmm::Family::PoissonLog: {
          const double mu = std::exp(eta[i]);
          score[i] = y[i] - mu;
          weight[i] = mu;
          break;
        }
      }
    }
    const Eigen::MatrixXd H =
        X.transpose() * weight.asDiagonal() * X;
    const Eigen::VectorXd g = X.transpose() * score;
    const Eigen::VectorXd step = H.ldlt().solve(g);
    beta += step;
    if (step.lpNorm<Eigen::Infinity>() < 1e-12) break;
  }
  return beta;
}

double mcse_mean(const Eigen::VectorXd& series) {
  const Eigen::Index n = series.size();
  const Eigen::Index batch = static_cast<Eigen::Index>(std::floor(std::sqrt(n)));
  const Eigen::Index num_batches = n / batch;
  const Eigen::Index used = batch * num_batches;
  const double mean = series.head(used).mean();
  double bm = 0.0;
  for (Eigen::Index j = 0; j < num_batches; ++j) {
    const double bmean = series.segment(j * batch, batch).mean();
    bm += (bmean - mean) * (bmean - mean);
  }
  const double sigma_tau = batch * bm / (num_batches - 1);
  return std::sqrt(sigma_tau / n);
}

double ks_statistic(std::vector<double> sample,
                    const std::function<double(double)>& cdf) {
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double F = cdf(sample[i]);
    d = std::max(d, std::fabs(F - i / n));
    d = std::max(d, std::fabs((i + 1) / n - F));
  }
  return d;
}

double truncated_normal_positive_mean(double mu, double sigma) {
  const double a = -mu / sigma;
  const double phi = std::exp(-0.5 * a * a) / std::sqrt(2.0 * M_PI);
  const double Phi = 0.5 * std::erfc(a / std::sqrt(2.0));
  return mu + sigma * phi / Phi;
}

}  // namespace oracles
