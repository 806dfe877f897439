#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "subattack/error.hpp"
#include "subattack/experiments.hpp"

using namespace subattack;

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an exception");
  return ErrorKind::IoError;
}

SweepSpec parse(const std::string& text) {
  std::istringstream in(text);
  return parse_sweep_spec(in);
}

SweepSpec small_spec() {
  SweepSpec spec;
  spec.eta_grid = {0.25, 0.5, 0.8, 1.1};
  spec.oracle.trials = 200;
  spec.oracle.seed = 4;
  spec.seed = 2;
  return spec;
}

const SweepRow& find(const std::vector<SweepRow>& rows, double ratio, Strategy s) {
  for (const auto& row : rows) {
    if (row.eta_ratio == ratio && row.strategy == s) return row;
  }
  FAIL("row not found");
  return rows.front();
}

}  // namespace

TEST_CASE("strategy names round-trip") {
  for (Strategy s : {Strategy::R1Opt, Strategy::R1Rnd, Strategy::WrOpt, Strategy::WrRnd}) {
    CHECK(parse_strategy(strategy_name(s)) == s);
  }
  CHECK(strategy_name(Strategy::WrRnd) == "wr-rnd");
  CHECK(kind_of([] { parse_strategy("r2-opt"); }) == ErrorKind::ParseError);
}

TEST_CASE("default grid") {
  const auto grid = default_eta_grid();
  REQUIRE(grid.size() == 50);
  CHECK(grid.front() == doctest::Approx(0.024));
  CHECK(grid.back() == doctest::Approx(1.2));
}

TEST_CASE("spec parsing") {
  const SweepSpec spec = parse(
      "# comment\n"
      "d = 6\n"
      "n = 4\n"
      "k = 2\n"
      "data_kind = gaussian\n"
      "eta_max = 1.0\n"
      "eta_steps = 4\n"
      "strategies = r1-opt, wr-opt\n"
      "trials = 50\n"
      "oracle_seed = 9\n"
      "seed = 3\n");
  CHECK(spec.d == 6);
  CHECK(spec.n == 4);
  CHECK(spec.k == 2);
  CHECK(spec.data_kind == DataKind::Gaussian);
  REQUIRE(spec.eta_grid.size() == 4);
  CHECK(spec.eta_grid[0] == doctest::Approx(0.25));
  CHECK(spec.eta_grid[3] == doctest::Approx(1.0));
  REQUIRE(spec.strategies.size() == 2);
  CHECK(spec.strategies[1] == Strategy::WrOpt);
  CHECK(spec.oracle.trials == 50);
  CHECK(spec.oracle.seed == 9);
  CHECK(spec.seed == 3);

  const SweepSpec listed = parse("eta_grid = 0.1, 0.2, 0.4\n");
  REQUIRE(listed.eta_grid.size() == 3);
  CHECK(listed.eta_grid[2] == 0.4);
}

TEST_CASE("spec parsing errors") {
  CHECK(kind_of([] { parse("colour = blue\n"); }) == ErrorKind::ParseError);
  CHECK(kind_of([] { parse("d = 5\nd = 6\n"); }) == ErrorKind::ParseError);
  CHECK(kind_of([] { parse("eta_grid =\n"); }) == ErrorKind::ParseError);
  CHECK(kind_of([] { parse("d = five\n"); }) == ErrorKind::ParseError);
  CHECK(kind_of([] { parse("no equals sign\n"); }) == ErrorKind::ParseError);
  CHECK(kind_of([] { load_sweep_spec("/nonexistent/spec.txt"); }) == ErrorKind::IoError);
}

TEST_CASE("spec validation") {
  SweepSpec spec = small_spec();
  spec.eta_grid = {0.5, 0.2};
  CHECK_THROWS_AS(validate(spec), Error);
  spec = small_spec();
  spec.eta_grid = {-0.1};
  CHECK_THROWS_AS(validate(spec), Error);
  spec = small_spec();
  spec.strategies.clear();
  CHECK_THROWS_AS(validate(spec), Error);
  spec = small_spec();
  spec.k = 0;
  CHECK_THROWS_AS(validate(spec), Error);
}

TEST_CASE("synthetic data") {
  const DataMatrix low = synth_low_rank(5, 5, 3, 1);
  CHECK(full_svd(low).rank() == 3);
  CHECK((synth_low_rank(5, 5, 3, 1).values() - low.values()).norm() == 0.0);
  const DataMatrix g = synth_gaussian(6, 4, 1);
  CHECK(g.rows() == 6);
  CHECK(g.cols() == 4);
  CHECK(full_svd(g).rank() == 4);
}

TEST_CASE("sweep values on the low-rank setting") {
  const auto rows = run_sweep(small_spec());
  REQUIRE(rows.size() == 16);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const bool ordered = rows[i - 1].eta_ratio < rows[i].eta_ratio ||
                         (rows[i - 1].eta_ratio == rows[i].eta_ratio &&
                          rows[i - 1].strategy < rows[i].strategy);
    CHECK(ordered);
  }
  CHECK(find(rows, 0.5, Strategy::R1Opt).theta == doctest::Approx(std::asin(0.5)).epsilon(1e-9));
  CHECK(find(rows, 0.25, Strategy::WrOpt).theta ==
        doctest::Approx(std::asin(0.25)).epsilon(1e-9));
  CHECK(find(rows, 0.8, Strategy::WrOpt).theta == doctest::Approx(kHalfPi).epsilon(1e-9));
  CHECK(find(rows, 1.1, Strategy::R1Opt).theta == doctest::Approx(kHalfPi).epsilon(1e-9));
  for (const auto& row : rows) {
    CHECK_FALSE(row.error.has_value());
    if (row.strategy == Strategy::R1Rnd) {
      CHECK(row.theta <= find(rows, row.eta_ratio, Strategy::R1Opt).theta + 1e-9);
    }
    if (row.strategy == Strategy::WrRnd) {
      CHECK(row.theta <= find(rows, row.eta_ratio, Strategy::WrOpt).theta + 1e-9);
    }
  }
}

TEST_CASE("zero budget gives zero shift") {
  SweepSpec spec = small_spec();
  spec.eta_grid = {0.0};
  for (const auto& row : run_sweep(spec)) {
    CHECK(row.theta == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(row.budget_used == 0.0);
  }
}

TEST_CASE("failed strategies are marked and the sweep continues") {
  SweepSpec spec = small_spec();
  spec.data_kind = DataKind::Gaussian;
  spec.k = 5;
  spec.eta_grid = {0.5};
  const auto rows = run_sweep(spec);
  REQUIRE(rows.size() == 4);
  const SweepRow& r1 = find(rows, 0.5, Strategy::R1Opt);
  REQUIRE(r1.error.has_value());
  CHECK(*r1.error == ErrorKind::NoOrthogonalComplement);
  CHECK(sweep_csv(rows).find("ERR:NoOrthogonalComplement") != std::string::npos);
}

TEST_CASE("sweep csv is byte-identical across runs") {
  SweepSpec spec = small_spec();
  spec.oracle.threads = 1;
  const std::string a = sweep_csv(run_sweep(spec));
  spec.oracle.threads = 3;
  const std::string b = sweep_csv(run_sweep(spec));
  CHECK(a == b);
  CHECK(a.rfind("eta_ratio,strategy,theta,theta_predicted,budget_used\n", 0) == 0);
  std::size_t lines = 0;
  for (char c : a) lines += c == '\n';
  CHECK(lines == 17);
}
