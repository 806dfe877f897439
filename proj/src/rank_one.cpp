#include "subattack/rank_one.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <string>

#include "subattack/error.hpp"
#include "subattack/kernels.hpp"

namespace subattack {

namespace {

constexpr double kPi = std::numbers::pi;

bool near_tie(double lhs, double rhs, double scale) {
  return std::abs(lhs - rhs) <= kDefaultTieTol * scale;
}

RankOneAttack zero_attack(const SvdTriple& svd, Index col, Regime regime) {
  RankOneAttack out;
  out.a = Vector::Zero(svd.rows());
  out.b = svd.v.col(col);
  out.regime = regime;
  return out;
}

std::vector<double> sigma_list(const SvdTriple& svd) {
  return {svd.sigma.data(), svd.sigma.data() + svd.sigma.size()};
}

}  // namespace

AttackBudget::AttackBudget(double eta_value) : eta(eta_value) {
  if (!std::isfinite(eta) || eta < 0.0) {
    throw Error(ErrorKind::InvalidArgument, "budget eta must be finite and >= 0");
  }
}

RankOneSetting select_rank_one_setting(Index d, Index n, Index rank, Index k) {
  const Index p = std::min(d, n);
  if (k < 1 || k > p) {
    throw Error(ErrorKind::InvalidDimension,
                "k=" + std::to_string(k) + " outside [1, " + std::to_string(p) + "]");
  }
  if (k < rank) return RankOneSetting::KLtRank;
  if (k > rank) {
    throw Error(ErrorKind::RegimeError, "k=" + std::to_string(k) + " exceeds numerical rank " +
                                            std::to_string(rank));
  }
  if (k == n) return RankOneSetting::FullRank;
  if (k < p) return RankOneSetting::LowRank;
  throw Error(ErrorKind::RegimeError,
              "k equals the row count d < n; no rank-one setting covers full row rank");
}

RankOneClosedForm rank_one_closed_form(double sigma_k, double sigma_k1, double eta) {
  if (!(sigma_k > sigma_k1) || sigma_k1 < 0.0 || eta < 0.0 || !(eta < sigma_k - sigma_k1)) {
    throw Error(ErrorKind::RegimeError,
                "closed form needs sigma_k > sigma_k1 >= 0 and 0 <= eta < sigma_k - sigma_k1");
  }
  const double sk2 = sigma_k * sigma_k;
  const double sl2 = sigma_k1 * sigma_k1;
  const double e2 = eta * eta;
  const double d = sk2 - sl2;

  RankOneClosedForm out;
  out.sigma_k = sigma_k;
  out.sigma_k1 = sigma_k1;
  out.h = std::max(0.0, sk2 * sk2 + sl2 * sl2 + e2 * e2 - 2.0 * sk2 * sl2 - 2.0 * sk2 * e2 -
                            2.0 * sl2 * e2);

  // cos^2(beta) is a sum of positives; cos(alpha) and sin(beta) then follow
  // from the optimality relations cos(a)cos(b) = -sigma_k eta / D and
  // sin(a)sin(b) = sigma_k1 eta / D, which stay accurate as eta -> 0.
  const double cos2_beta = std::min(1.0, (d + e2 + std::sqrt(out.h)) / (2.0 * d));
  const double cos_beta = -std::sqrt(cos2_beta);
  const double cos_alpha = std::clamp(sigma_k * eta / (d * std::sqrt(cos2_beta)), 0.0, 1.0);
  const double sin_alpha = std::sqrt(std::max(0.0, 1.0 - cos_alpha * cos_alpha));
  const double sin_beta =
      sin_alpha > 0.0 ? std::clamp(sigma_k1 * eta / (d * sin_alpha), 0.0, 1.0) : 0.0;

  out.alpha_star = std::atan2(sin_alpha, cos_alpha);
  out.beta_star = std::atan2(sin_beta, cos_beta);
  out.theta_star = theta_from_angles(sigma_k, sigma_k1, eta, out.alpha_star, out.beta_star);
  return out;
}

double rotation_from_angles(double sigma_k, double sigma_k1, double eta, double alpha,
                            double beta) {
  const double ca = std::cos(alpha);
  const double sa = std::sin(alpha);
  const double cb = std::cos(beta);
  const double sb = std::sin(beta);
  const double ax = sigma_k * sigma_k - sigma_k1 * sigma_k1 + 2.0 * sigma_k * eta * ca * cb -
                    2.0 * sigma_k1 * eta * sa * sb + eta * eta * (ca * ca - sa * sa);
  const double ay = 2.0 * eta * (sigma_k * sa * cb + sigma_k1 * ca * sb + eta * ca * sa);
  return 0.5 * std::atan2(ay, ax);
}

double theta_from_angles(double sigma_k, double sigma_k1, double eta, double alpha, double beta) {
  return std::abs(rotation_from_angles(sigma_k, sigma_k1, eta, alpha, beta));
}

std::array<std::pair<double, double>, 4> equivalent_solutions(double alpha, double beta) {
  return {{{alpha, beta}, {-alpha, -beta}, {kPi - alpha, kPi - beta}, {alpha - kPi, beta - kPi}}};
}

RankOneAttack attack_full_rank(const SvdTriple& svd, const AttackBudget& budget) {
  const Index d = svd.rows();
  const Index n = svd.cols();
  if (svd.rank() != n || n > d) {
    throw Error(ErrorKind::RegimeError, "full-rank attack needs rank(X) = n <= d");
  }
  const Index last = n - 1;
  const double sigma_n = svd.sigma(last);
  const double eta = budget.eta;
  if (eta == 0.0) return zero_attack(svd, last, Regime::FullRankCase2);
  if (d == n) {
    throw Error(ErrorKind::NoOrthogonalComplement,
                "d = n leaves no direction orthogonal to the column space");
  }
  const auto u_n = svd.u.col(last);
  const auto u_q = svd.u.col(n);

  RankOneAttack out;
  out.b = svd.v.col(last);
  if (eta >= sigma_n) {
    const double a_hat = std::sqrt(eta * eta - sigma_n * sigma_n);
    out.a = -sigma_n * u_n + a_hat * u_q;
    out.regime = Regime::FullRankCase1;
    out.theta_predicted = kPi / 2.0;
    out.ambiguous = near_tie(eta, sigma_n, svd.sigma(0));
  } else {
    const double ratio = eta / sigma_n;
    out.a = -(eta * ratio) * u_n + eta * std::sqrt(1.0 - ratio * ratio) * u_q;
    out.regime = Regime::FullRankCase2;
    out.theta_predicted = std::asin(ratio);
  }
  return out;
}

RankOneAttack attack_full_rank(const DataMatrix& x, const AttackBudget& budget) {
  return attack_full_rank(full_svd(x), budget);
}

RankOneAttack attack_low_rank(const SvdTriple& svd, const AttackBudget& budget) {
  const Index k = svd.rank();
  if (k < 1 || k >= std::min(svd.rows(), svd.cols())) {
    throw Error(ErrorKind::RegimeError, "low-rank attack needs 1 <= rank(X) < min(d, n)");
  }
  const Index kk = k - 1;
  const double sigma_k = svd.sigma(kk);
  const double eta = budget.eta;
  if (eta == 0.0) return zero_attack(svd, kk, Regime::LowRankCase2);

  RankOneAttack out;
  if (eta >= sigma_k) {
    out.a = eta * svd.u.col(k);
    out.b = svd.v.col(k);
    out.regime = Regime::LowRankCase1;
    out.theta_predicted = kPi / 2.0;
    out.ambiguous = near_tie(eta, sigma_k, svd.sigma(0));
  } else {
    const double ratio = eta / sigma_k;
    out.a = -(eta * ratio) * svd.u.col(kk) + eta * std::sqrt(1.0 - ratio * ratio) * svd.u.col(k);
    out.b = svd.v.col(kk);
    out.regime = Regime::LowRankCase2;
    out.theta_predicted = std::asin(ratio);
  }
  return out;
}

RankOneAttack attack_low_rank(const DataMatrix& x, const AttackBudget& budget) {
  return attack_low_rank(full_svd(x), budget);
}

KLtRankResult attack_k_lt_rank(const SvdTriple& svd, Index k, const AttackBudget& budget) {
  if (k < 1 || k >= svd.rank()) {
    throw Error(ErrorKind::RegimeError, "k < rank attack needs 1 <= k < rank(X)");
  }
  const Index kk = k - 1;
  const double sigma_k = svd.sigma(kk);
  const double sigma_k1 = svd.sigma(k);
  const double eta = budget.eta;

  KLtRankResult out;
  if (eta == 0.0) {
    out.attack = zero_attack(svd, kk, Regime::KLtRankCase2);
    return out;
  }
  const double gap = sigma_k - sigma_k1;
  const bool tied = near_tie(sigma_k, sigma_k1, svd.sigma(0));
  if (tied || eta >= gap) {
    out.attack.a = eta * svd.u.col(k);
    out.attack.b = svd.v.col(k);
    out.attack.regime = Regime::KLtRankCase1;
    out.attack.theta_predicted = kPi / 2.0;
    out.attack.ambiguous = tied || near_tie(eta, gap, svd.sigma(0));
    return out;
  }
  const RankOneClosedForm cf = rank_one_closed_form(sigma_k, sigma_k1, eta);
  out.attack.a = eta * (std::cos(cf.alpha_star) * svd.u.col(kk) +
                        std::sin(cf.alpha_star) * svd.u.col(k));
  out.attack.b = std::cos(cf.beta_star) * svd.v.col(kk) + std::sin(cf.beta_star) * svd.v.col(k);
  out.attack.regime = Regime::KLtRankCase2;
  out.attack.theta_predicted = cf.theta_star;
  out.closed_form = cf;
  return out;
}

KLtRankResult attack_k_lt_rank(const DataMatrix& x, Index k, const AttackBudget& budget) {
  return attack_k_lt_rank(full_svd(x), k, budget);
}

Matrix apply_rank_one(const Matrix& x, const Vector& a, const Vector& b) {
  if (a.size() != x.rows() || b.size() != x.cols()) {
    throw Error(ErrorKind::InvalidDimension, "rank-one factors do not match the matrix shape");
  }
  Matrix out(x.rows(), x.cols());
  kernels::rank_one_update(std::span<const double>(x.data(), static_cast<std::size_t>(x.size())),
                           std::span<const double>(a.data(), static_cast<std::size_t>(a.size())),
                           std::span<const double>(b.data(), static_cast<std::size_t>(b.size())),
                           std::span<double>(out.data(), static_cast<std::size_t>(out.size())));
  return out;
}

RankOneResult attack_rank_one(const DataMatrix& x, Index k, const AttackBudget& budget) {
  const SvdTriple svd = full_svd(x);
  RankOneResult out;
  switch (select_rank_one_setting(x.rows(), x.cols(), svd.rank(), k)) {
    case RankOneSetting::FullRank:
      out.attack = attack_full_rank(svd, budget);
      break;
    case RankOneSetting::LowRank:
      out.attack = attack_low_rank(svd, budget);
      break;
    case RankOneSetting::KLtRank: {
      KLtRankResult r = attack_k_lt_rank(svd, k, budget);
      out.attack = std::move(r.attack);
      out.closed_form = r.closed_form;
      break;
    }
  }
  const Matrix perturbed = apply_rank_one(x.values(), out.attack.a, out.attack.b);
  const OrthonormalBasis before = leading_subspace(svd, k);

  AttackReport& rep = out.report;
  rep.strategy = "rank_one";
  rep.regime = out.attack.regime;
  rep.k = static_cast<long>(k);
  rep.eta = budget.eta;
  rep.sigma = sigma_list(svd);
  rep.theta_predicted = out.attack.theta_predicted;
  rep.theta_achieved = asimov_distance(before, leading_subspace(DataMatrix(perturbed), k));
  rep.delta_fro_norm = out.attack.budget_used();
  rep.ambiguous_subspace = out.attack.ambiguous || before.ambiguous();
  return out;
}

}  // namespace subattack
