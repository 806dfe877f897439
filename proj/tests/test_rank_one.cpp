#include <doctest.h>

#include <cmath>
#include <numbers>

#include "subattack/error.hpp"
#include "subattack/experiments.hpp"
#include "subattack/oracle.hpp"
#include "subattack/random.hpp"
#include "subattack/rank_one.hpp"

using namespace subattack;

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

Matrix with_singular_values(Rng& rng, Index d, Index n, std::initializer_list<double> sigma) {
  Matrix s = Matrix::Zero(d, n);
  Index i = 0;
  for (double v : sigma) {
    s(i, i) = v;
    ++i;
  }
  return random_orthogonal(rng, d) * s * random_orthogonal(rng, n).transpose();
}

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an exception");
  return ErrorKind::IoError;
}

}  // namespace

TEST_CASE("AttackBudget rejects invalid eta") {
  CHECK(kind_of([] { AttackBudget(-1.0); }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([] { AttackBudget(std::nan("")); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("dispatch selects the rank-one setting") {
  CHECK(select_rank_one_setting(4, 4, 4, 4) == RankOneSetting::FullRank);
  CHECK(select_rank_one_setting(6, 4, 4, 4) == RankOneSetting::FullRank);
  CHECK(select_rank_one_setting(5, 5, 3, 3) == RankOneSetting::LowRank);
  CHECK(select_rank_one_setting(5, 5, 5, 3) == RankOneSetting::KLtRank);
  CHECK(kind_of([] { select_rank_one_setting(5, 5, 2, 3); }) == ErrorKind::RegimeError);
  CHECK(kind_of([] { select_rank_one_setting(3, 5, 3, 3); }) == ErrorKind::RegimeError);
  CHECK(kind_of([] { select_rank_one_setting(3, 5, 3, 4); }) == ErrorKind::InvalidDimension);
  CHECK(kind_of([] { select_rank_one_setting(3, 5, 3, 0); }) == ErrorKind::InvalidDimension);

  Rng rng(1);
  CHECK(attack_rank_one(DataMatrix(gaussian_matrix(rng, 4, 4)), 4, AttackBudget(0.0)).report.regime ==
        Regime::FullRankCase2);
  CHECK(attack_rank_one(synth_low_rank(5, 5, 3, 1), 3, AttackBudget(0.1)).report.regime ==
        Regime::LowRankCase2);
  CHECK(attack_rank_one(DataMatrix(gaussian_matrix(rng, 5, 5)), 3, AttackBudget(0.01)).report.regime ==
        Regime::KLtRankCase2);
}

TEST_CASE("full-rank attack follows arcsin(eta / sigma_n) and saturates above sigma_n") {
  Rng rng(2);
  const DataMatrix x(with_singular_values(rng, 5, 2, {3.0, 2.0}));
  const RankOneResult small = attack_rank_one(x, 2, AttackBudget(1.0));
  CHECK(small.report.theta_predicted == doctest::Approx(std::numbers::pi / 6.0).epsilon(1e-14));
  CHECK(std::abs(small.report.theta_achieved - std::numbers::pi / 6.0) < 1e-10);
  CHECK(small.attack.budget_used() == doctest::Approx(1.0).epsilon(1e-14));

  const RankOneResult big = attack_rank_one(x, 2, AttackBudget(2.5));
  CHECK(big.report.regime == Regime::FullRankCase1);
  CHECK(std::abs(big.report.theta_achieved - kHalfPi) < 1e-10);
  CHECK(big.attack.budget_used() == doctest::Approx(2.5).epsilon(1e-14));

  const RankOneResult zero = attack_rank_one(x, 2, AttackBudget(0.0));
  CHECK(zero.attack.a.norm() == 0.0);
  CHECK(zero.report.theta_achieved < 1e-12);
}

TEST_CASE("full-rank attack on a square matrix has no orthogonal complement") {
  Rng rng(3);
  const DataMatrix x(gaussian_matrix(rng, 3, 3));
  CHECK(kind_of([&] { attack_full_rank(x, AttackBudget(0.1)); }) == ErrorKind::NoOrthogonalComplement);
  CHECK(attack_full_rank(x, AttackBudget(0.0)).a.norm() == 0.0);
}

TEST_CASE("low-rank attack on diag(3, 2, 0)") {
  Matrix x = Matrix::Zero(3, 3);
  x(0, 0) = 3.0;
  x(1, 1) = 2.0;
  const RankOneResult r = attack_rank_one(DataMatrix(x), 2, AttackBudget(1.0));
  CHECK(r.report.theta_predicted == doctest::Approx(0.5235987755982988).epsilon(1e-14));
  CHECK(std::abs(r.report.theta_achieved - 0.5235987755982988) < 1e-10);

  const RankOneResult big = attack_rank_one(DataMatrix(x), 2, AttackBudget(2.5));
  CHECK(big.report.regime == Regime::LowRankCase1);
  CHECK(std::abs(big.report.theta_achieved - kHalfPi) < 1e-10);

  const RankOneResult tie = attack_rank_one(DataMatrix(x), 2, AttackBudget(2.0));
  CHECK(tie.report.regime == Regime::LowRankCase1);
  CHECK(tie.report.ambiguous_subspace);

  SearchConfig cfg;
  cfg.trials = 10000;
  cfg.seed = 17;
  CHECK(random_rank_one(DataMatrix(x), 2, AttackBudget(1.0), cfg).theta <= 0.5235987755982988 + 1e-6);
}

TEST_CASE("k < rank closed form at (2, 1, 0.5) matches the achieved distance") {
  Matrix x = Matrix::Zero(4, 4);
  x(0, 0) = 3.0;
  x(1, 1) = 2.0;
  x(2, 2) = 1.0;
  x(3, 3) = 0.5;
  const RankOneResult r = attack_rank_one(DataMatrix(x), 2, AttackBudget(0.5));
  REQUIRE(r.closed_form);
  CHECK(r.report.regime == Regime::KLtRankCase2);
  CHECK(r.closed_form->alpha_star == doctest::Approx(1.2252728993859025).epsilon(1e-13));
  CHECK(r.closed_form->beta_star == doctest::Approx(2.9635173054004885).epsilon(1e-13));
  CHECK(std::abs(r.report.theta_achieved - r.report.theta_predicted) < 1e-10);
  CHECK(r.attack.budget_used() == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(stationarity_residual(2.0, 1.0, 0.5, r.closed_form->alpha_star, r.closed_form->beta_star, 1e-5) <
        1e-6);
}

TEST_CASE("k < rank Case1 and ties") {
  Matrix x = Matrix::Zero(3, 3);
  x(0, 0) = 2.0;
  x(1, 1) = 1.0;
  x(2, 2) = 0.5;
  const RankOneResult r = attack_rank_one(DataMatrix(x), 1, AttackBudget(1.2));
  CHECK(r.report.regime == Regime::KLtRankCase1);
  CHECK(std::abs(r.report.theta_achieved - kHalfPi) < 1e-10);

  Matrix tied = Matrix::Zero(3, 3);
  tied(0, 0) = 2.0;
  tied(1, 1) = 2.0;
  tied(2, 2) = 1.0;
  const RankOneResult t = attack_rank_one(DataMatrix(tied), 1, AttackBudget(0.1));
  CHECK(t.report.regime == Regime::KLtRankCase1);
  CHECK(t.report.ambiguous_subspace);
}

TEST_CASE("k < rank works for tall matrices without transposing") {
  Rng rng(12);
  const DataMatrix x(with_singular_values(rng, 7, 4, {4.0, 3.0, 2.0, 1.0}));
  for (double eta : {0.1, 0.4, 0.8}) {
    const RankOneResult r = attack_rank_one(x, 2, AttackBudget(eta));
    CHECK(r.report.regime == Regime::KLtRankCase2);
    CHECK(std::abs(r.report.theta_achieved - r.report.theta_predicted) < 1e-8);
  }
}

TEST_CASE("zero-budget limit of the closed form") {
  const RankOneClosedForm cf = rank_one_closed_form(2.0, 1.0, 1e-9);
  CHECK(cf.theta_star < 1e-6);
  CHECK(std::cos(cf.alpha_star) < 1e-8);
  CHECK(rank_one_closed_form(2.0, 1.0, 0.0).theta_star == 0.0);
  CHECK(kind_of([] { rank_one_closed_form(2.0, 1.0, 1.0); }) == ErrorKind::RegimeError);
  CHECK(kind_of([] { rank_one_closed_form(1.0, 1.0, 0.1); }) == ErrorKind::RegimeError);
}

TEST_CASE("theta_from_angles basics") {
  CHECK(theta_from_angles(2.0, 1.0, 0.0, 0.3, 2.0) == 0.0);
  Rng rng(5);
  for (int t = 0; t < 50; ++t) {
    const double a = rng.uniform() * 6.0 - 3.0;
    const double b = rng.uniform() * 6.0 - 3.0;
    CHECK(theta_from_angles(2.0, 1.0, 0.4, a, b) ==
          doctest::Approx(theta_from_angles(2.0, 1.0, 0.4, std::numbers::pi - a, std::numbers::pi - b)));
  }
}

TEST_CASE("equivalent_solutions") {
  const auto z = equivalent_solutions(0.0, 0.0);
  CHECK(z[0] == std::pair{0.0, 0.0});
  CHECK(z[2] == std::pair{std::numbers::pi, std::numbers::pi});
  CHECK(z[3] == std::pair{-std::numbers::pi, -std::numbers::pi});

  const RankOneClosedForm cf = rank_one_closed_form(2.0, 1.0, 0.5);
  for (const auto& [a, b] : equivalent_solutions(cf.alpha_star, cf.beta_star)) {
    CHECK(std::abs(theta_from_angles(2.0, 1.0, 0.5, a, b) - cf.theta_star) < 1e-10);
  }
  const auto twice = equivalent_solutions(equivalent_solutions(0.4, 2.0)[1].first,
                                          equivalent_solutions(0.4, 2.0)[1].second);
  CHECK(twice[1].first == doctest::Approx(0.4));
  CHECK(twice[1].second == doctest::Approx(2.0));
}

TEST_CASE("optimal angle is monotone in eta and continuous at the low-rank boundary") {
  const DataMatrix x = synth_low_rank(5, 5, 3, 4);
  const double sk = full_svd(x).sigma(2);
  double prev = -1.0;
  for (int i = 1; i <= 50; ++i) {
    const double eta = 1.2 * sk * i / 50.0;
    const double th = attack_rank_one(x, 3, AttackBudget(eta)).report.theta_predicted;
    CHECK(th >= prev);
    prev = th;
  }
  CHECK(attack_rank_one(x, 3, AttackBudget(sk * (1 - 1e-12))).report.theta_predicted ==
        doctest::Approx(kHalfPi).epsilon(1e-5));
}
