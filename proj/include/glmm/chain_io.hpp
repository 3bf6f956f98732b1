#pragma once

#include <string>

#include "glmm/runner.hpp"

namespace glmm {

struct ChainMetadata {
  std::string sampler;
  std::string family;
  std::string config_hash;
};

// Writes the draws as delimited text (header = coordinate names) plus a
// '<path>.meta.json' sidecar carrying seed, iteration counts, acceptance
// rate and the configuration hash.
void write_chain(const std::string& path, const SampleMatrix& samples,
                 const ChainMetadata& meta);

// Reads draws and, when present, the sidecar fields back into the matrix.
SampleMatrix read_chain(const std::string& path);

// FNV-1a hash of a canonical configuration string, hex encoded.
std::string config_hash_hex(const std::string& canonical);

}  // namespace glmm
