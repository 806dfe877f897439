#pragma once

// Independent searches used to check the closed forms. Random search and a
// refined lattice over the rank-one angle pair bound the optimum from below.
// A principal-angle solver that never calls an SVD checks the distance itself.

#include <cstdint>

#include "subattack/rank_one.hpp"
#include "subattack/subspace.hpp"
#include "subattack/unconstrained.hpp"

namespace subattack {

struct SearchConfig {
  std::uint64_t trials = 10000;
  std::uint64_t seed = 0;
  Index grid_resolution = 400;
  int refine_steps = 40;
  /// Worker threads for the random searches; 0 uses the hardware count.
  unsigned threads = 0;
};

/// Throws InvalidArgument unless trials >= 1 and grid_resolution >= 2.
void validate(const SearchConfig& cfg);

struct RandomRankOneBest {
  RankOneAttack attack;
  double theta = 0.0;
  std::uint64_t trial = 0;
};

struct RandomUnconstrainedBest {
  Matrix delta;
  double theta = 0.0;
  std::uint64_t trial = 0;
};

/// Trial t draws Gaussian a then b from Rng::for_trial(seed, t), normalises
/// b and scales a to length eta. Ties keep the lowest trial index, so the
/// result does not depend on the thread count.
RandomRankOneBest random_rank_one(const DataMatrix& x, Index k, const AttackBudget& budget,
                                  const SearchConfig& cfg);

/// Trial t draws a Gaussian d x n matrix (column-major order) scaled to
/// Frobenius norm eta.
RandomUnconstrainedBest random_unconstrained(const DataMatrix& x, Index k,
                                             const AttackBudget& budget, const SearchConfig& cfg);

struct AngleSearchResult {
  double alpha = 0.0;
  double beta = 0.0;
  double theta = 0.0;
};

/// Lattice of grid_resolution^2 points over [0, pi/2] x [pi/2, pi] with both
/// endpoints included, followed by refine_steps golden-section iterations per
/// coordinate in alternating sweeps around the best lattice point.
AngleSearchResult grid_search_angles(double sigma_k, double sigma_k1, double eta,
                                     const SearchConfig& cfg);

/// Largest central-difference partial derivative of the signed rotation
/// angle at (alpha, beta).
double stationarity_residual(double sigma_k, double sigma_k1, double eta, double alpha,
                             double beta, double step);

/// Principal angles by alternating maximisation of u^T v over the two
/// subspaces with deflation, restarted from several seeded points. Limited
/// to k <= 3 and d <= 6 (OracleTooExpensive otherwise).
PrincipalAngles brute_force_principal_angles(const OrthonormalBasis& a, const OrthonormalBasis& b,
                                             const SearchConfig& cfg);

/// Largest principal angle between `base` and the k leading left singular
/// vectors of y. Skips sign normalisation and the full factorisation.
double distance_to_leading(const OrthonormalBasis& base, const Matrix& y);

}  // namespace subattack
