#include <doctest.h>

#include <cmath>
#include <numbers>

#include "subattack/error.hpp"
#include "subattack/oracle.hpp"
#include "subattack/random.hpp"
#include "subattack/rank_one.hpp"

using namespace subattack;

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

Matrix diag_matrix(Index d, Index n, std::initializer_list<double> sigma) {
  Matrix s = Matrix::Zero(d, n);
  Index i = 0;
  for (double v : sigma) {
    s(i, i) = v;
    ++i;
  }
  return s;
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

TEST_CASE("search config validation") {
  SearchConfig cfg;
  cfg.trials = 0;
  CHECK(kind_of([&] { validate(cfg); }) == ErrorKind::InvalidArgument);
  cfg.trials = 1;
  cfg.grid_resolution = 1;
  CHECK(kind_of([&] { validate(cfg); }) == ErrorKind::InvalidArgument);
  cfg.grid_resolution = 2;
  CHECK_NOTHROW(validate(cfg));
}

TEST_CASE("random rank-one search is deterministic and respects the budget") {
  const DataMatrix x(diag_matrix(5, 5, {4.0, 3.0, 2.0, 1.0, 0.5}));
  SearchConfig cfg;
  cfg.trials = 500;
  cfg.seed = 11;
  cfg.threads = 1;
  const auto r1 = random_rank_one(x, 2, AttackBudget(0.3), cfg);
  cfg.threads = 4;
  const auto r2 = random_rank_one(x, 2, AttackBudget(0.3), cfg);
  CHECK(r1.theta == r2.theta);
  CHECK(r1.trial == r2.trial);
  CHECK(r1.attack.budget_used() == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(r1.attack.b.norm() == doctest::Approx(1.0).epsilon(1e-12));
  const double measured =
      subspace_shift(x.values(), apply_rank_one(x.values(), r1.attack.a, r1.attack.b), 2);
  CHECK(measured == doctest::Approx(r1.theta).epsilon(1e-12));

  cfg.seed = 12;
  const auto r3 = random_rank_one(x, 2, AttackBudget(0.3), cfg);
  CHECK(r3.theta != r1.theta);
}

TEST_CASE("a single trial is a valid search") {
  const DataMatrix x(diag_matrix(4, 4, {3.0, 2.0, 1.0, 0.5}));
  SearchConfig cfg;
  cfg.trials = 1;
  const auto r = random_unconstrained(x, 1, AttackBudget(0.2), cfg);
  CHECK(r.trial == 0);
  CHECK(r.delta.norm() == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(r.theta >= 0.0);
}

TEST_CASE("random unconstrained search is independent of thread count") {
  Rng rng(3);
  const DataMatrix x(gaussian_matrix(rng, 6, 5));
  SearchConfig cfg;
  cfg.trials = 800;
  cfg.seed = 5;
  cfg.threads = 1;
  const auto a = random_unconstrained(x, 2, AttackBudget(0.1), cfg);
  cfg.threads = 3;
  const auto b = random_unconstrained(x, 2, AttackBudget(0.1), cfg);
  CHECK(a.theta == b.theta);
  CHECK(a.trial == b.trial);
  CHECK((a.delta - b.delta).norm() == 0.0);
}

TEST_CASE("random searches never beat the closed forms") {
  const DataMatrix x(diag_matrix(2, 2, {2.0, 1.0}));
  SearchConfig cfg;
  cfg.trials = 5000;
  const auto ro = random_rank_one(x, 1, AttackBudget(0.5), cfg);
  CHECK(ro.theta <= 0.34552342740899410 + 1e-9);
  const auto un = random_unconstrained(x, 1, AttackBudget(0.5), cfg);
  CHECK(un.theta <= 0.40659512501895352 + 1e-9);
  CHECK(un.theta > ro.theta - 0.05);
}

TEST_CASE("grid search recovers the closed-form optimum") {
  SearchConfig cfg;
  const auto res = grid_search_angles(2.0, 1.0, 0.5, cfg);
  CHECK(std::abs(res.theta - 0.34552342740899410) < 1e-5);
  CHECK(res.theta <= 0.34552342740899410 + 1e-10);
  CHECK(std::abs(res.alpha - 1.2252728993859025) < 1e-2);
  CHECK(std::abs(res.beta - 2.9635173054004885) < 1e-2);
  CHECK(res.theta == doctest::Approx(theta_from_angles(2.0, 1.0, 0.5, res.alpha, res.beta)));
}

TEST_CASE("grid search edge cases") {
  SearchConfig cfg;
  cfg.grid_resolution = 2;
  cfg.refine_steps = 0;
  const auto coarse = grid_search_angles(2.0, 1.0, 0.5, cfg);
  CHECK(coarse.theta >= 0.0);
  CHECK(coarse.theta <= 0.34552342740899410 + 1e-10);

  cfg.grid_resolution = 50;
  const auto zero = grid_search_angles(2.0, 1.0, 0.0, cfg);
  CHECK(zero.theta == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("stationarity residual separates optima from arbitrary points") {
  const auto cf = rank_one_closed_form(2.0, 1.0, 0.5);
  const double at_opt = stationarity_residual(2.0, 1.0, 0.5, cf.alpha_star, cf.beta_star, 1e-5);
  CHECK(at_opt < 1e-6);
  CHECK(stationarity_residual(2.0, 1.0, 0.5, 0.0, kHalfPi, 1e-5) > 1e-3);

  // Central differences of a smooth function are second-order accurate.
  const double coarse = stationarity_residual(2.0, 1.0, 0.5, cf.alpha_star, cf.beta_star, 1e-2);
  const double fine = stationarity_residual(2.0, 1.0, 0.5, cf.alpha_star, cf.beta_star, 1e-3);
  CHECK(fine < coarse);
  CHECK(coarse < 1e-3);
}

TEST_CASE("brute-force principal angles agree with the SVD route") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng(seed);
    const Index d = 4 + static_cast<Index>(seed % 3);
    const Index k = 1 + static_cast<Index>(seed % 3);
    const OrthonormalBasis a(random_orthogonal(rng, d).leftCols(k));
    const OrthonormalBasis b(random_orthogonal(rng, d).leftCols(k));
    SearchConfig cfg;
    cfg.seed = seed;
    const auto brute = brute_force_principal_angles(a, b, cfg);
    const auto exact = principal_angles(a, b);
    REQUIRE(brute.angles.size() == exact.angles.size());
    for (std::size_t i = 0; i < exact.angles.size(); ++i) {
      CHECK(std::abs(brute.angles[i] - exact.angles[i]) < 1e-6);
    }
  }
}

TEST_CASE("brute-force principal angles refuse large problems") {
  Rng rng(1);
  const OrthonormalBasis big(random_orthogonal(rng, 8).leftCols(2));
  const OrthonormalBasis wide(random_orthogonal(rng, 6).leftCols(4));
  CHECK(kind_of([&] { brute_force_principal_angles(big, big, SearchConfig{}); }) ==
        ErrorKind::OracleTooExpensive);
  CHECK(kind_of([&] { brute_force_principal_angles(wide, wide, SearchConfig{}); }) ==
        ErrorKind::OracleTooExpensive);
}

TEST_CASE("distance to leading matches the full computation") {
  Rng rng(9);
  const Matrix x = gaussian_matrix(rng, 6, 5);
  const Matrix y = x + 0.05 * gaussian_matrix(rng, 6, 5);
  const OrthonormalBasis base = leading_subspace(DataMatrix(x), 2);
  CHECK(distance_to_leading(base, y) == doctest::Approx(subspace_shift(x, y, 2)).epsilon(1e-10));
}
