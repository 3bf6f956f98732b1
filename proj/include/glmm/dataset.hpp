#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "glmm/model.hpp"
#include "glmm/rng.hpp"

namespace glmm {

// Delimited dataset: integer responses, optional trial counts, real
// covariates x1..xp and categorical grouping factors g1..gr whose levels
// define the indicator blocks of Z.
struct Dataset {
  Eigen::VectorXi y;
  Eigen::VectorXi trials;  // defaults to 1 when the column is absent
  Eigen::MatrixXd X;
  std::vector<std::vector<std::string>> groups;  // one label column per factor

  Eigen::Index m() const { return y.size(); }
  Eigen::Index p() const { return X.cols(); }
  int r() const { return static_cast<int>(groups.size()); }
};

// Indicator design: one column per level of each factor, levels ordered by
// first appearance; exactly one 1 per row within each factor block.
ModelSpec build_model(const Dataset& data, Family family);

Dataset read_dataset_csv(const std::string& path);
void write_dataset_csv(const std::string& path, const Dataset& data);

struct SimulationTruth {
  Eigen::VectorXd beta;
  Eigen::VectorXd lambda;
  Eigen::VectorXd u;
};

// Draw u ~ N(0, D(lambda)^{-1}), rows cycle through the levels of each
// factor, covariates are an intercept plus standard normals, responses
// follow the requested family.
Dataset simulate_dataset(RngStream& rng, Family family, long m, int p,
                         const std::vector<int>& levels,
                         const Eigen::VectorXd& beta,
                         const Eigen::VectorXd& lambda, int trials,
                         SimulationTruth* truth = nullptr);

}  // namespace glmm
