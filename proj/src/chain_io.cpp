#include "glmm/chain_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "glmm/errors.hpp"

namespace glmm {

namespace {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::string config_hash_hex(const std::string& canonical) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : canonical) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

void write_chain(const std::string& path, const SampleMatrix& samples,
                 const ChainMetadata& meta) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write chain file '" + path + "'");
  for (std::size_t c = 0; c < samples.names.size(); ++c) {
    out << (c ? "," : "") << samples.names[c];
  }
  out << "\n";
  for (Eigen::Index i = 0; i < samples.draws.rows(); ++i) {
    for (Eigen::Index c = 0; c < samples.draws.cols(); ++c) {
      out << (c ? "," : "") << format_double(samples.draws(i, c));
    }
    out << "\n";
  }

  nlohmann::json j;
  j["seed"] = samples.seed;
  j["iterations"] = samples.iterations;
  j["burn_in"] = samples.burn_in;
  j["thin"] = samples.thin;
  j["stored"] = samples.draws.rows();
  if (std::isfinite(samples.accept_rate)) {
    j["accept_rate"] = samples.accept_rate;
  }
  if (std::isfinite(samples.final_step_size)) {
    j["step_size"] = samples.final_step_size;
  }
  j["sampler"] = meta.sampler;
  j["family"] = meta.family;
  j["config_hash"] = meta.config_hash;
  std::ofstream meta_out(path + ".meta.json");
  if (!meta_out) {
    throw ConfigError("cannot write chain metadata for '" + path + "'");
  }
  meta_out << j.dump(2) << "\n";
}

SampleMatrix read_chain(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open chain file '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) {
    throw ConfigError("chain file '" + path + "' is empty");
  }
  SampleMatrix samples;
  {
    std::stringstream ss(line);
    std::string name;
    while (std::getline(ss, name, ',')) samples.names.push_back(name);
  }
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    row.reserve(samples.names.size());
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) row.push_back(std::stod(field));
    if (row.size() != samples.names.size()) {
      throw ConfigError("chain file '" + path + "' has a ragged row");
    }
    rows.push_back(std::move(row));
  }
  samples.draws.resize(static_cast<Eigen::Index>(rows.size()),
                       static_cast<Eigen::Index>(samples.names.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t c = 0; c < rows[i].size(); ++c) {
      samples.draws(static_cast<Eigen::Index>(i),
                    static_cast<Eigen::Index>(c)) = rows[i][c];
    }
  }

  std::ifstream meta_in(path + ".meta.json");
  if (meta_in) {
    nlohmann::json j;
    meta_in >> j;
    samples.seed = j.value("seed", std::uint64_t{0});
    samples.iterations = j.value("iterations", long{0});
    samples.burn_in = j.value("burn_in", long{0});
    samples.thin = j.value("thin", 1);
    samples.accept_rate =
        j.value("accept_rate", std::numeric_limits<double>::quiet_NaN());
    samples.final_step_size =
        j.value("step_size", std::numeric_limits<double>::quiet_NaN());
  }
  return samples;
}

}  // namespace glmm
