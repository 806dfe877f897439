#pragma once

// Optimal perturbation under a Frobenius budget with no rank constraint.
//
// In singular coordinates B = U^T dX V the optimum touches only the 2 x 2
// block on rows and columns k, k+1. Its four entries follow from a closed
// form in the largest feasible tangent lambda_max of twice the rotation
// angle; the achieved distance is atan(lambda_max) / 2, and pi/2 once
// eta >= (sigma_k - sigma_{k+1}) / sqrt(2).

#include <optional>

#include "subattack/rank_one.hpp"
#include "subattack/report.hpp"
#include "subattack/subspace.hpp"

namespace subattack {

struct ClosedFormIntermediates {
  double c = 0.0;
  double w = 0.0;
  double e = 0.0;
  double lambda_max = 0.0;
  double p11 = 0.0;
  double p21 = 0.0;
  double r = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  double theta_star = 0.0;
};

/// Entries of the 2 x 2 block, 1-based names relative to the subspace
/// dimension k.
struct CanonicalEntries {
  double b_kk = 0.0;
  double b_k1k = 0.0;   // row k+1, column k
  double b_kk1 = 0.0;   // row k, column k+1
  double b_k1k1 = 0.0;

  double norm() const;
};

struct PerturbationMatrix {
  Matrix delta;
  CanonicalEntries canonical;
  double fro_norm = 0.0;
};

/// Requires sigma_k > sigma_k1 >= 0 and 0 < eta < (sigma_k - sigma_k1) / sqrt(2);
/// throws RegimeError otherwise.
ClosedFormIntermediates closed_form_lambda(double sigma_k, double sigma_k1, double eta);

CanonicalEntries recover_entries(const ClosedFormIntermediates& ci, double sigma_k,
                                 double sigma_k1);

/// (b_kk, -b_k1k, -b_kk1, b_k1k1), which reaches the same distance.
CanonicalEntries paired_solution(const CanonicalEntries& entries);

/// Largest principal angle between span(e_1) and the leading left singular
/// vector of diag(sigma_k, sigma_k1) + block(entries).
double theta_from_entries(const CanonicalEntries& entries, double sigma_k, double sigma_k1);

/// U * B * V^T with the four entries placed at rows and columns k, k+1.
/// Throws InvalidDimension when k + 1 > min(d, n).
PerturbationMatrix lift_to_data_space(const CanonicalEntries& entries, const SvdTriple& svd,
                                      Index k);

struct UnconstrainedResult {
  PerturbationMatrix perturbation;
  AttackReport report;
  std::optional<ClosedFormIntermediates> closed_form;  // set in Case2 with eta > 0
};

/// Needs 1 <= k < min(d, n) (InvalidDimension) and k <= rank(X) (RegimeError).
/// When k equals the numerical rank, sigma_{k+1} is taken as 0.
UnconstrainedResult attack_unconstrained(const DataMatrix& x, Index k, const AttackBudget& budget);

}  // namespace subattack
