#pragma once

// Seeded random streams for synthetic data and the randomized oracles.
//
// The engine is std::mt19937_64, whose output sequence is fixed by the C++
// standard. Trial t of a run seeded with s draws from its own engine seeded
// with splitmix64(s + t * 0x9E3779B97F4A7C15), so results do not depend on
// how trials are scheduled across threads. Uniforms take the top 53 bits of
// one draw; standard normals use the Box-Muller transform, consuming two
// uniforms per pair and caching the second value.

#include <cstdint>
#include <random>

#include "subattack/subspace.hpp"

namespace subattack {

std::uint64_t splitmix64(std::uint64_t x);

class Rng {
 public:
  /// Engine seeded with splitmix64(seed).
  explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  /// Rng(seed + trial * 0x9E3779B97F4A7C15).
  static Rng for_trial(std::uint64_t seed, std::uint64_t trial);

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform in [0, 1).
  double uniform();
  /// Uniform in (0, 1].
  double uniform_open_zero();
  double gaussian();
  /// Uniform integer in [0, bound). bound must be positive.
  std::uint64_t below(std::uint64_t bound);

 private:
  std::mt19937_64 engine_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

/// Fills column-major, column by column.
Matrix gaussian_matrix(Rng& rng, Index rows, Index cols);
Vector gaussian_vector(Rng& rng, Index size);

/// Haar-distributed orthogonal matrix: QR of a Gaussian matrix with the
/// signs of R's diagonal moved onto Q.
Matrix random_orthogonal(Rng& rng, Index size);

/// Fisher-Yates permutation of 0..n-1.
std::vector<Index> random_permutation(Rng& rng, Index n);

}  // namespace subattack
