#pragma once

// Optimal rank-one perturbations dX = a * b^T with ||a|| * ||b|| <= eta that
// maximise the largest principal angle between the k leading left singular
// subspaces of X and X + dX.
//
// Three settings are covered:
//   full rank   k = rank(X) = n <= d
//   low rank    k = rank(X) <  min(d, n)
//   k < rank    k <  rank(X)
// Each setting has a threshold on eta above which the distance pi/2 is
// reachable (Case1) and a budget-limited closed form below it (Case2).
// Thresholds are inclusive. At equality the Case1 construction leaves tied
// singular values, so the result is flagged ambiguous.

#include <array>
#include <optional>
#include <utility>

#include "subattack/report.hpp"
#include "subattack/subspace.hpp"

namespace subattack {

/// Frobenius-norm budget. Throws InvalidArgument for negative or non-finite eta.
struct AttackBudget {
  explicit AttackBudget(double eta);
  double eta;
};

struct RankOneAttack {
  Vector a;
  Vector b;  // unit norm
  Regime regime = Regime::LowRankCase2;
  double theta_predicted = 0.0;
  bool ambiguous = false;

  double budget_used() const { return a.norm() * b.norm(); }
};

/// Angle parametrisation of the k < rank optimum in the plane of the k-th and
/// (k+1)-th singular pairs:
///   a = eta (cos(alpha) u_k + sin(alpha) u_{k+1}),
///   b = cos(beta) v_k + sin(beta) v_{k+1}.
struct RankOneClosedForm {
  double alpha_star = 0.0;  // [0, pi/2]
  double beta_star = 0.0;   // [pi/2, pi]
  double h = 0.0;
  double theta_star = 0.0;
  double sigma_k = 0.0;
  double sigma_k1 = 0.0;
};

enum class RankOneSetting { FullRank, LowRank, KLtRank };

/// Throws RegimeError when no setting applies (k > rank, or k = rank = d < n)
/// and InvalidDimension when k is outside [1, min(d, n)].
RankOneSetting select_rank_one_setting(Index d, Index n, Index rank, Index k);

/// Requires sigma_k > sigma_k1 >= 0 and 0 <= eta < sigma_k - sigma_k1;
/// throws RegimeError otherwise.
RankOneClosedForm rank_one_closed_form(double sigma_k, double sigma_k1, double eta);

/// Largest principal angle produced by the angle pair (alpha, beta).
double theta_from_angles(double sigma_k, double sigma_k1, double eta, double alpha, double beta);

/// Signed rotation of the leading direction, in (-pi/2, pi/2]; its absolute
/// value is theta_from_angles.
double rotation_from_angles(double sigma_k, double sigma_k1, double eta, double alpha,
                            double beta);

/// (a, b), (-a, -b), (pi - a, pi - b), (a - pi, b - pi).
std::array<std::pair<double, double>, 4> equivalent_solutions(double alpha, double beta);

RankOneAttack attack_full_rank(const SvdTriple& svd, const AttackBudget& budget);
RankOneAttack attack_full_rank(const DataMatrix& x, const AttackBudget& budget);

RankOneAttack attack_low_rank(const SvdTriple& svd, const AttackBudget& budget);
RankOneAttack attack_low_rank(const DataMatrix& x, const AttackBudget& budget);

struct KLtRankResult {
  RankOneAttack attack;
  std::optional<RankOneClosedForm> closed_form;  // set in Case2 with eta > 0
};

KLtRankResult attack_k_lt_rank(const SvdTriple& svd, Index k, const AttackBudget& budget);
KLtRankResult attack_k_lt_rank(const DataMatrix& x, Index k, const AttackBudget& budget);

struct RankOneResult {
  RankOneAttack attack;
  AttackReport report;
  std::optional<RankOneClosedForm> closed_form;
};

/// Dispatches on select_rank_one_setting and measures the achieved angle by
/// recomputing the leading subspace of X + a b^T.
RankOneResult attack_rank_one(const DataMatrix& x, Index k, const AttackBudget& budget);

/// x + a * b^T.
Matrix apply_rank_one(const Matrix& x, const Vector& a, const Vector& b);

}  // namespace subattack
