#pragma once

// Test-only oracles, kept independent of the library code paths they check:
// quadrature, finite differences, series densities, dense-inverse sampling,
// and a hand-rolled IRLS fitter.

#include <functional>

#include <Eigen/Core>

#include "glmm/model.hpp"
#include "glmm/rng.hpp"

namespace oracles {

// Adaptive Simpson quadrature on [a, b].
double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol = 1e-10);

struct Moments {
  double mass = 0.0;
  double mean = 0.0;
  double variance = 0.0;
};

// Mean / variance of the density proportional to exp(logf) on [a, b].
Moments density_moments(const std::function<double(double)>& logf, double a,
                        double b, double tol = 1e-10);

// Central finite-difference gradient.
Eigen::VectorXd fd_gradient(const std::function<double(const Eigen::VectorXd&)>& f,
                            const Eigen::VectorXd& x, double h = 1e-6);

// Polya-Gamma PG(b, c) series pdf truncated at `terms` terms, with a crude
// alternating-tail error check.
double pg_pdf(double x, int b, double c, int terms = 200);

// Mean of PG(b, c) by quadrature of the truncated series pdf.
double pg_mean_quadrature(int b, double c);

// Draw x ~ N(S^{-1} t, S^{-1}) the naive way: dense inverse, then the
// covariance Cholesky.
Eigen::VectorXd dense_precision_normal(glmm::RngStream& rng,
                                       const Eigen::MatrixXd& S,
                                       const Eigen::VectorXd& t);

// Fixed-effects-only GLM maximum likelihood by IRLS with its own link
// and weight formulas (independent of glmm::family_*).
Eigen::VectorXd glm_irls(glmm::Family family, const Eigen::VectorXi& y,
                         const Eigen::VectorXi& trials,
                         const Eigen::MatrixXd& X, int max_iter = 100);

// Batch-means Monte Carlo standard error of the mean of a series.
double mcse_mean(const Eigen::VectorXd& series);

// Two-sided Kolmogorov-Smirnov statistic of a sample against a cdf.
double ks_statistic(std::vector<double> sample,
                    const std::function<double(double)>& cdf);

// Truncated-normal mean via the Mills ratio (positive side).
double truncated_normal_positive_mean(double mu, double sigma);

}  // namespace oracles
