#pragma once

// Principal component regression and its degradation under subspace attacks.
//
// Features are stored with samples as columns. The model centres features
// with the training means, projects onto the k leading principal directions
// and fits least squares with an intercept.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "subattack/subspace.hpp"

namespace subattack {

struct PcrModel {
  OrthonormalBasis components;
  Vector coefficients;  // k
  double intercept = 0.0;
  Vector feature_means;  // d
  double r2_train = 0.0;
};

/// Throws InvalidDimension when k is outside [1, rank of the centred
/// features] or targets do not have n entries, SingularFit when the design
/// matrix is rank deficient.
PcrModel fit_pcr(const DataMatrix& features, const Vector& targets, Index k);

/// As fit_pcr, but centres with the given means instead of the sample means.
PcrModel fit_pcr_with_means(const DataMatrix& features, const Vector& targets, Index k,
                            const Vector& means);

Vector predict(const PcrModel& model, const Matrix& features);

/// 1 - |y - yhat|^2 / |y - mean(y)|^2. Throws InvalidDimension for unequal or
/// short (< 2) inputs and UndefinedR2 when `actual` is constant.
double r_squared(const Vector& predicted, const Vector& actual);

enum class PcrStrategy { RankOne, Unconstrained };

std::string_view pcr_strategy_name(PcrStrategy s);
/// Accepts rank_one and unconstrained. Throws ParseError otherwise.
PcrStrategy parse_pcr_strategy(std::string_view name);

struct RegressionReport {
  double eta_ratio = 0.0;
  PcrStrategy strategy = PcrStrategy::RankOne;
  double r2_train = 0.0;
  double r2_test = 0.0;
};

/// Ratios 0, 0.05, ..., 0.95.
std::vector<double> default_pcr_eta_grid();

struct PcrStudy {
  Index k = 4;
  std::vector<double> eta_grid = default_pcr_eta_grid();
  PcrStrategy strategy = PcrStrategy::Unconstrained;
  std::uint64_t split_seed = 0;
  double split_fraction = 0.8;
};

/// Splits samples by a seeded permutation (round(fraction * n) for
/// training) and centres with the training means. For each ratio the centred
/// training features are attacked with budget ratio * (sigma_k - sigma_{k+1})
/// and the model is refit; r2_train scores the attacked training set, r2_test
/// the clean test set.
/// Rows follow the order of eta_grid, which must be non-decreasing.
std::vector<RegressionReport> attack_pcr(const DataMatrix& features, const Vector& targets,
                                         const PcrStudy& study);

struct CollinearSpec {
  Index d = 60;
  Index n = 250;
  std::vector<double> factor_scales = {20.0, 14.0, 9.0, 5.0, 2.5};
  /// Target weights on the unit-variance factors.
  std::vector<double> target_weights = {1.0, 1.0, 1.0, 2.0, 0.0};
  double noise = 0.05;
  double target_noise = 0.1;
};

struct FeatureSet {
  DataMatrix features;
  Vector targets;
};

/// Features L * F + noise with L a random d x r orthonormal loading, F the
/// scaled Gaussian factors; targets are weighted unit-variance factors plus
/// noise.
FeatureSet synth_collinear(const CollinearSpec& spec, std::uint64_t seed);

/// One sample per line, last column is the target; an optional header line
/// is detected by a non-numeric first line.
FeatureSet load_feature_csv(std::istream& in);
FeatureSet load_feature_csv(const std::string& path);

/// Header `eta_ratio,strategy,r2_train,r2_test`.
std::string pcr_csv(const std::vector<RegressionReport>& rows);

}  // namespace subattack
