// Reference numbers computed independently in 50-digit arithmetic and frozen
// here. The implementation must reproduce them.

#include <doctest.h>

#include <cmath>
#include <numbers>

#include "subattack/rank_one.hpp"
#include "subattack/unconstrained.hpp"

using namespace subattack;

namespace {
constexpr double kSigmaK = 2.0;
constexpr double kSigmaK1 = 1.0;
constexpr double kEta = 0.5;
}  // namespace

TEST_CASE("rank-one k<rank closed form at (2, 1, 0.5)") {
  const RankOneClosedForm cf = rank_one_closed_form(kSigmaK, kSigmaK1, kEta);
  CHECK(cf.h == doctest::Approx(6.5625).epsilon(1e-15));
  CHECK(std::cos(cf.alpha_star) * std::cos(cf.alpha_star) ==
        doctest::Approx(0.1147103847516834).epsilon(1e-13));
  CHECK(std::cos(cf.beta_star) * std::cos(cf.beta_star) ==
        doctest::Approx(0.9686229485816499).epsilon(1e-13));
  CHECK(cf.alpha_star == doctest::Approx(1.2252728993859025).epsilon(1e-13));
  CHECK(cf.beta_star == doctest::Approx(2.9635173054004885).epsilon(1e-13));
  CHECK(cf.theta_star == doctest::Approx(0.34552342740899410).epsilon(1e-13));
}

TEST_CASE("optimality relations between the angles hold at (2, 1, 0.5)") {
  const RankOneClosedForm cf = rank_one_closed_form(kSigmaK, kSigmaK1, kEta);
  const double d = kSigmaK * kSigmaK - kSigmaK1 * kSigmaK1;
  CHECK(std::cos(cf.alpha_star) * std::cos(cf.beta_star) ==
        doctest::Approx(-kSigmaK * kEta / d).epsilon(1e-14));
  CHECK(std::sin(cf.alpha_star) * std::sin(cf.beta_star) ==
        doctest::Approx(kEta * kSigmaK1 / d).epsilon(1e-14));
}

TEST_CASE("unconstrained chain at (2, 1, 0.5)") {
  const ClosedFormIntermediates ci = closed_form_lambda(kSigmaK, kSigmaK1, kEta);
  CHECK(ci.c == doctest::Approx(2.25).epsilon(1e-15));
  CHECK(ci.w == doctest::Approx(0.11805555555555556).epsilon(1e-14));
  CHECK(ci.e == doctest::Approx(2.5124020299598466).epsilon(1e-13));
  CHECK(ci.lambda_max == doctest::Approx(1.0571882797418487).epsilon(1e-13));
  CHECK(ci.theta_star == doctest::Approx(0.40659512501895352).epsilon(1e-13));
}

TEST_CASE("full-rank attack on diag(3, 2) with eta = 1 reaches pi/6") {
  Matrix x = Matrix::Zero(3, 2);
  x(0, 0) = 3.0;
  x(1, 1) = 2.0;
  const RankOneResult r = attack_rank_one(DataMatrix(x), 2, AttackBudget(1.0));
  CHECK(r.report.regime == Regime::FullRankCase2);
  CHECK(r.report.theta_predicted == doctest::Approx(0.5235987755982988).epsilon(1e-15));
  CHECK(r.report.theta_achieved == doctest::Approx(0.5235987755982988).epsilon(1e-12));
}

TEST_CASE("low-rank attack on diag(3, 2, 0) with eta = 1 reaches pi/6") {
  Matrix x = Matrix::Zero(3, 3);
  x(0, 0) = 3.0;
  x(1, 1) = 2.0;
  const RankOneResult r = attack_rank_one(DataMatrix(x), 2, AttackBudget(1.0));
  CHECK(r.report.regime == Regime::LowRankCase2);
  CHECK(r.report.theta_achieved == doctest::Approx(std::numbers::pi / 6.0).epsilon(1e-12));
}

TEST_CASE("unconstrained attack on diag(2, 1) reproduces the frozen distance") {
  Matrix x = Matrix::Zero(2, 2);
  x(0, 0) = 2.0;
  x(1, 1) = 1.0;
  const UnconstrainedResult r = attack_unconstrained(DataMatrix(x), 1, AttackBudget(0.5));
  CHECK(r.report.theta_achieved == doctest::Approx(0.40659512501895352).epsilon(1e-12));
  CHECK(r.perturbation.fro_norm == doctest::Approx(0.5).epsilon(1e-14));
}
