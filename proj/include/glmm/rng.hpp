#pragma once

#include <array>
#include <cstdint>

#include <Eigen/Core>

namespace glmm {

// Counter-based random stream (Philox4x32-10).  A fixed seed and call
// sequence reproduce the same bits on every platform, and split() derives
// an independently keyed child stream, so parallel chains stay reproducible.
// Streams are single-owner: share nothing, split instead.
class RngStream {
 public:
  using result_type = std::uint64_t;

  explicit RngStream(std::uint64_t seed = 0);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }

  // Next 64 random bits.
  result_type operator()();

  // Independent child stream keyed off this stream's output.
  RngStream split();

  // Uniform draw strictly inside (0, 1).
  double uniform();

  // Standard normal (Box-Muller, deterministic given the stream).
  double normal();

  // Exponential with rate 1.
  double exponential();

  Eigen::VectorXd normal_vector(Eigen::Index n);

  std::uint64_t seed() const { return seed_; }

 private:
  void refill();

  std::uint64_t seed_;
  std::array<std::uint32_t, 4> counter_;
  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 4> block_;
  int block_pos_;
  double spare_;
  bool has_spare_;
};

}  // namespace glmm
