#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace subattack {

/// Which closed-form branch produced an attack. Case1 branches reach the
/// maximal distance pi/2; Case2 branches are the budget-limited optima.
enum class Regime {
  FullRankCase1,
  FullRankCase2,
  LowRankCase1,
  LowRankCase2,
  KLtRankCase1,
  KLtRankCase2,
  UnconstrainedCase1,
  UnconstrainedCase2,
};

std::string_view regime_name(Regime regime);
bool is_saturating(Regime regime);

struct AttackReport {
  std::string strategy;  // "rank_one" or "unconstrained"
  Regime regime = Regime::LowRankCase2;
  long k = 0;
  double eta = 0.0;
  std::vector<double> sigma;
  double theta_predicted = 0.0;
  double theta_achieved = 0.0;
  double delta_fro_norm = 0.0;
  bool ambiguous_subspace = false;
};

}  // namespace subattack
