#include "subattack/unconstrained.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "subattack/error.hpp"

namespace subattack {

namespace {

struct BlockGeometry {
  double p11;
  double p21;
  double r;
  double cos_alpha;
  double sin_alpha;
  double cos_beta;
  double sin_beta;
};

BlockGeometry geometry_from_lambda(double lambda, double sigma_k, double sigma_k1) {
  const double g = std::sqrt(lambda * lambda + 1.0) + lambda;
  const double t = 1.0 / std::sqrt(g * g + 1.0);
  BlockGeometry out{};
  out.p11 = t;
  out.p21 = t * g;
  const double n1 = std::hypot(out.p11 * sigma_k, out.p21 * sigma_k1);
  const double n2 = std::hypot(out.p11 * sigma_k1, out.p21 * sigma_k);
  out.r = 0.5 * (n1 + n2);
  out.cos_alpha = out.p11 * sigma_k / n1;
  out.sin_alpha = out.p21 * sigma_k1 / n1;
  out.cos_beta = -out.p21 * sigma_k / n2;
  out.sin_beta = out.p11 * sigma_k1 / n2;
  return out;
}

}  // namespace

double CanonicalEntries::norm() const {
  return std::sqrt(b_kk * b_kk + b_k1k * b_k1k + b_kk1 * b_kk1 + b_k1k1 * b_k1k1);
}

ClosedFormIntermediates closed_form_lambda(double sigma_k, double sigma_k1, double eta) {
  if (!(sigma_k > sigma_k1) || sigma_k1 < 0.0 || !(eta > 0.0) ||
      !(eta < (sigma_k - sigma_k1) / std::numbers::sqrt2)) {
    throw Error(ErrorKind::RegimeError,
                "closed form needs sigma_k > sigma_k1 >= 0 and "
                "0 < eta < (sigma_k - sigma_k1) / sqrt(2)");
  }
  const double sk2 = sigma_k * sigma_k;
  const double sl2 = sigma_k1 * sigma_k1;
  const double e2 = eta * eta;
  const double d = sk2 - sl2;

  ClosedFormIntermediates out;
  out.c = 0.5 * (sk2 + sl2) - e2;
  // c - sigma_k sigma_k1 factored as (g - eta)(g + eta) keeps w accurate as
  // eta approaches the Case1 threshold g, where w -> 0.
  const double g = (sigma_k - sigma_k1) / std::numbers::sqrt2;
  out.w = (g - eta) * (g + eta) * (out.c + sigma_k * sigma_k1) / (d * d);
  // 1 - 4w expanded so the eta -> 0 limit does not cancel either.
  const double one_minus_4w = 4.0 * e2 * (sk2 + sl2 - e2) / (d * d);
  const double q = std::sqrt(std::clamp(one_minus_4w, 0.0, 1.0));
  const double one_minus_q = 4.0 * out.w / (1.0 + q);
  out.e = std::sqrt((1.0 + q) / one_minus_q);
  // (e^2 - 1) / (2e) with e^2 - 1 = 2q / (1 - q).
  out.lambda_max = q / (one_minus_q * out.e);
  out.theta_star = 0.5 * std::atan(out.lambda_max);

  const BlockGeometry geo = geometry_from_lambda(out.lambda_max, sigma_k, sigma_k1);
  out.p11 = geo.p11;
  out.p21 = geo.p21;
  out.r = geo.r;
  out.alpha = std::atan2(geo.sin_alpha, geo.cos_alpha);
  out.beta = std::atan2(geo.sin_beta, geo.cos_beta);
  return out;
}

CanonicalEntries recover_entries(const ClosedFormIntermediates& ci, double sigma_k,
                                 double sigma_k1) {
  const BlockGeometry geo = geometry_from_lambda(ci.lambda_max, sigma_k, sigma_k1);
  const double v0 = geo.r * geo.cos_alpha;
  const double v1 = geo.r * geo.cos_beta;
  const double v2 = geo.r * geo.sin_alpha;
  const double v3 = geo.r * geo.sin_beta;
  // u = diag(P, P) v with P = [[p11, -p21], [p21, p11]].
  const double u0 = geo.p11 * v0 - geo.p21 * v1;
  const double u1 = geo.p21 * v0 + geo.p11 * v1;
  const double u2 = geo.p11 * v2 - geo.p21 * v3;
  const double u3 = geo.p21 * v2 + geo.p11 * v3;

  CanonicalEntries out;
  out.b_kk = u0 - sigma_k;
  out.b_k1k = u1;
  out.b_kk1 = u2;
  out.b_k1k1 = u3 - sigma_k1;
  return out;
}

CanonicalEntries paired_solution(const CanonicalEntries& entries) {
  return {entries.b_kk, -entries.b_k1k, -entries.b_kk1, entries.b_k1k1};
}

double theta_from_entries(const CanonicalEntries& entries, double sigma_k, double sigma_k1) {
  const double m11 = sigma_k + entries.b_kk;
  const double m12 = entries.b_kk1;
  const double m21 = entries.b_k1k;
  const double m22 = sigma_k1 + entries.b_k1k1;
  const double bx = m11 * m11 + m12 * m12 - m22 * m22 - m21 * m21;
  const double by = 2.0 * (m11 * m21 + m22 * m12);
  return std::abs(0.5 * std::atan2(by, bx));
}

PerturbationMatrix lift_to_data_space(const CanonicalEntries& entries, const SvdTriple& svd,
                                      Index k) {
  if (k < 1 || k + 1 > std::min(svd.rows(), svd.cols())) {
    throw Error(ErrorKind::InvalidDimension,
                "four-entry block needs 1 <= k and k + 1 <= min(d, n), got k=" + std::to_string(k));
  }
  const Index i = k - 1;
  const auto uk = svd.u.col(i);
  const auto uk1 = svd.u.col(i + 1);
  const auto vk = svd.v.col(i);
  const auto vk1 = svd.v.col(i + 1);

  PerturbationMatrix out;
  out.delta = (entries.b_kk * uk + entries.b_k1k * uk1) * vk.transpose() +
              (entries.b_kk1 * uk + entries.b_k1k1 * uk1) * vk1.transpose();
  out.canonical = entries;
  out.fro_norm = out.delta.norm();
  return out;
}

UnconstrainedResult attack_unconstrained(const DataMatrix& x, Index k, const AttackBudget& budget) {
  const Index p = std::min(x.rows(), x.cols());
  if (k < 1 || k >= p) {
    throw Error(ErrorKind::InvalidDimension,
                "unconstrained attack needs 1 <= k < min(d, n), got k=" + std::to_string(k));
  }
  const SvdTriple svd = full_svd(x);
  const Index rank = svd.rank();
  if (k > rank) {
    throw Error(ErrorKind::RegimeError, "k=" + std::to_string(k) + " exceeds numerical rank " +
                                            std::to_string(rank));
  }
  const double sigma_k = svd.sigma(k - 1);
  const double sigma_k1 = k < rank ? svd.sigma(k) : 0.0;
  const double eta = budget.eta;
  const double threshold = (sigma_k - sigma_k1) / std::numbers::sqrt2;
  const double tie_scale = kDefaultTieTol * svd.sigma(0);
  const bool tied = std::abs(sigma_k - sigma_k1) <= tie_scale;

  UnconstrainedResult out;
  CanonicalEntries entries;
  if (eta == 0.0) {
    out.report.regime = Regime::UnconstrainedCase2;
  } else if (tied || eta >= threshold) {
    entries.b_kk = -eta / std::numbers::sqrt2;
    entries.b_k1k1 = eta / std::numbers::sqrt2;
    out.report.regime = Regime::UnconstrainedCase1;
    out.report.theta_predicted = std::numbers::pi / 2.0;
    out.report.ambiguous_subspace = tied || std::abs(eta - threshold) <= tie_scale;
  } else {
    const ClosedFormIntermediates ci = closed_form_lambda(sigma_k, sigma_k1, eta);
    entries = recover_entries(ci, sigma_k, sigma_k1);
    out.report.regime = Regime::UnconstrainedCase2;
    out.report.theta_predicted = ci.theta_star;
    out.closed_form = ci;
  }
  out.perturbation = lift_to_data_space(entries, svd, k);

  const OrthonormalBasis before = leading_subspace(svd, k);
  const OrthonormalBasis after = leading_subspace(DataMatrix(x.values() + out.perturbation.delta), k);

  AttackReport& rep = out.report;
  rep.strategy = "unconstrained";
  rep.k = static_cast<long>(k);
  rep.eta = eta;
  rep.sigma.assign(svd.sigma.data(), svd.sigma.data() + svd.sigma.size());
  rep.theta_achieved = asimov_distance(before, after);
  rep.delta_fro_norm = out.perturbation.fro_norm;
  rep.ambiguous_subspace = rep.ambiguous_subspace || before.ambiguous();
  return out;
}

}  // namespace subattack
