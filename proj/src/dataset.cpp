#include "glmm/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "glmm/distributions.hpp"
#include "glmm/errors.hpp"
#include "glmm/normal.hpp"

namespace glmm {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.push_back("");
  return fields;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double sigmoid(double x) {
  return (x >= 0.0) ? 1.0 / (1.0 + std::exp(-x))
                    : std::exp(x) / (1.0 + std::exp(x));
}

}  // namespace

ModelSpec build_model(const Dataset& data, Family family) {
  const Eigen::Index m = data.m();
  ModelSpec model;
  model.family = family;
  model.y = data.y;
  model.trials = data.trials;
  model.X = data.X;

  // level order = first appearance in the file
  std::vector<std::vector<std::string>> level_names(data.groups.size());
  std::vector<std::vector<int>> level_index(data.groups.size());
  for (std::size_t j = 0; j < data.groups.size(); ++j) {
    std::map<std::string, int> seen;
    level_index[j].resize(m);
    for (Eigen::Index i = 0; i < m; ++i) {
      const std::string& label = data.groups[j][i];
      auto it = seen.find(label);
      if (it == seen.end()) {
        it = seen.emplace(label, static_cast<int>(level_names[j].size())).first;
        level_names[j].push_back(label);
      }
      level_index[j][i] = it->second;
    }
    model.blocks.push_back(static_cast<int>(level_names[j].size()));
  }

  int q = 0;
  for (int b : model.blocks) q += b;
  model.Z = Eigen::MatrixXd::Zero(m, q);
  int offset = 0;
  for (std::size_t j = 0; j < data.groups.size(); ++j) {
    for (Eigen::Index i = 0; i < m; ++i) {
      model.Z(i, offset + level_index[j][i]) = 1.0;
    }
    offset += model.blocks[j];
  }
  model.validate();
  return model;
}

Dataset read_dataset_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open dataset file '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) {
    throw ConfigError("dataset file '" + path + "' is empty");
  }
  const std::vector<std::string> header = split_csv_line(line);

  int y_col = -1, trials_col = -1;
  std::vector<std::pair<int, int>> x_cols;  // (index in x-order, column)
  std::vector<std::pair<int, int>> g_cols;
  for (std::size_t c = 0; c < header.size(); ++c) {
    const std::string& name = header[c];
    if (name == "y") {
      y_col = static_cast<int>(c);
    } else if (name == "trials") {
      trials_col = static_cast<int>(c);
    } else if (name.size() > 1 && name[0] == 'x') {
      x_cols.emplace_back(std::stoi(name.substr(1)), static_cast<int>(c));
    } else if (name.size() > 1 && name[0] == 'g') {
      g_cols.emplace_back(std::stoi(name.substr(1)), static_cast<int>(c));
    } else {
      throw ConfigError("dataset column '" + name +
                        "' not recognized (expected y, trials, x*, g*)");
    }
  }
  if (y_col < 0) throw ConfigError("dataset is missing the 'y' column");
  std::sort(x_cols.begin(), x_cols.end());
  std::sort(g_cols.begin(), g_cols.end());

  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto fields = split_csv_line(line);
    if (fields.size() != header.size()) {
      throw ConfigError("dataset row " + std::to_string(rows.size() + 2) +
                        " has " + std::to_string(fields.size()) +
                        " fields, expected " + std::to_string(header.size()));
    }
    rows.push_back(std::move(fields));
  }

  const Eigen::Index m = static_cast<Eigen::Index>(rows.size());
  Dataset data;
  data.y.resize(m);
  data.trials.resize(m);
  data.X.resize(m, static_cast<Eigen::Index>(x_cols.size()));
  data.groups.assign(g_cols.size(), std::vector<std::string>(m));
  try {
    for (Eigen::Index i = 0; i < m; ++i) {
      data.y[i] = std::stoi(rows[i][y_col]);
      data.trials[i] = (trials_col >= 0) ? std::stoi(rows[i][trials_col]) : 1;
      for (std::size_t k = 0; k < x_cols.size(); ++k) {
        data.X(i, static_cast<Eigen::Index>(k)) =
            std::stod(rows[i][x_cols[k].second]);
      }
      for (std::size_t k = 0; k < g_cols.size(); ++k) {
        data.groups[k][i] = rows[i][g_cols[k].second];
      }
    }
  } catch (const std::invalid_argument&) {
    throw ConfigError("dataset file '" + path + "' has a malformed number");
  }
  return data;
}

void write_dataset_csv(const std::string& path, const Dataset& data) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write dataset file '" + path + "'");
  out << "y,trials";
  for (Eigen::Index k = 0; k < data.p(); ++k) out << ",x" << (k + 1);
  for (int j = 0; j < data.r(); ++j) out << ",g" << (j + 1);
  out << "\n";
  for (Eigen::Index i = 0; i < data.m(); ++i) {
    out << data.y[i] << "," << data.trials[i];
    for (Eigen::Index k = 0; k < data.p(); ++k) {
      out << "," << format_double(data.X(i, k));
    }
    for (int j = 0; j < data.r(); ++j) out << "," << data.groups[j][i];
    out << "\n";
  }
}

Dataset simulate_dataset(RngStream& rng, Family family, long m, int p,
                         const std::vector<int>& levels,
                         const Eigen::VectorXd& beta,
                         const Eigen::VectorXd& lambda, int trials,
                         SimulationTruth* truth) {
  if (p < 0 || m < 1) throw ConfigError("simulate: need m >= 1 and p >= 0");
  if (beta.size() != p) throw ConfigError("simulate: beta must have length p");
  if (lambda.size() != static_cast<Eigen::Index>(levels.size())) {
    throw ConfigError("simulate: lambda needs one entry per factor");
  }
  if ((lambda.array() <= 0.0).any()) {
    throw ConfigError("simulate: lambda entries must be positive");
  }
  if (trials < 1) throw ConfigError("simulate: trials must be >= 1");

  Dataset data;
  data.y.resize(m);
  data.trials.resize(m);
  data.trials.setConstant(family == Family::PoissonLog ? 1 : trials);
  data.X.resize(m, p);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (int k = 0; k < p; ++k) {
      data.X(i, k) = (k == 0) ? 1.0 : rng.normal();  // intercept first
    }
  }

  int q = 0;
  for (int l : levels) {
    if (l < 1) throw ConfigError("simulate: factor levels must be >= 1");
    q += l;
  }
  Eigen::VectorXd u(q);
  Eigen::MatrixXd Z = Eigen::MatrixXd::Zero(m, q);
  data.groups.assign(levels.size(), std::vector<std::string>(m));
  int offset = 0;
  for (std::size_t j = 0; j < levels.size(); ++j) {
    const double sd = 1.0 / std::sqrt(lambda[static_cast<Eigen::Index>(j)]);
    for (int l = 0; l < levels[j]; ++l) u[offset + l] = sd * rng.normal();
    for (Eigen::Index i = 0; i < m; ++i) {
      const int level = static_cast<int>(i % levels[j]);  // cyclic assignment
      Z(i, offset + level) = 1.0;
      data.groups[j][i] = std::to_string(level + 1);
    }
    offset += levels[j];
  }

  const Eigen::VectorXd gamma = data.X * beta + Z * u;
  for (Eigen::Index i = 0; i < m; ++i) {
    switch (family) {
      case Family::Logistic: {
        const double prob = sigmoid(gamma[i]);
        int count = 0;
        for (int t = 0; t < data.trials[i]; ++t) {
          if (rng.uniform() < prob) ++count;
        }
        data.y[i] = count;
        break;
      }
      case Family::Probit: {
        const double prob = normal_cdf(gamma[i]);
        int count = 0;
        for (int t = 0; t < data.trials[i]; ++t) {
          if (rng.uniform() < prob) ++count;
        }
        data.y[i] = count;
        break;
      }
      case Family::PoissonLog:
        data.y[i] = static_cast<int>(sample_poisson(rng, std::exp(gamma[i])));
        break;
    }
  }

  if (truth != nullptr) {
    truth->beta = beta;
    truth->lambda = lambda;
    truth->u = u;
  }
  return data;
}

}  // namespace glmm
