#pragma once

// Budget sweeps over synthetic or loaded data: every strategy is run at every
// budget on one shared matrix and the results are emitted as a sorted CSV.
//
// Budgets are given as ratios. The base is sigma_k when the numerical rank of
// X equals k, and sigma_k - sigma_{k+1} otherwise.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "subattack/error.hpp"
#include "subattack/oracle.hpp"
#include "subattack/subspace.hpp"

namespace subattack {

enum class DataKind { LowRank, Gaussian, FromFile };

/// Declared in CSV sort order.
enum class Strategy { R1Opt, R1Rnd, WrOpt, WrRnd };

std::string_view strategy_name(Strategy s);
/// Accepts r1-opt, r1-rnd, wr-opt, wr-rnd. Throws ParseError otherwise.
Strategy parse_strategy(std::string_view name);

/// 50 evenly spaced ratios 1.2 * i / 50, i = 1..50.
std::vector<double> default_eta_grid();

struct SweepSpec {
  Index d = 5;
  Index n = 5;
  Index k = 3;
  DataKind data_kind = DataKind::LowRank;
  std::string data_path;
  std::vector<double> eta_grid = default_eta_grid();
  std::vector<Strategy> strategies = {Strategy::R1Opt, Strategy::R1Rnd, Strategy::WrOpt,
                                      Strategy::WrRnd};
  SearchConfig oracle;
  std::uint64_t seed = 0;
};

/// Throws InvalidArgument / InvalidDimension for malformed specs: empty or
/// non-increasing grid, negative ratios, no strategies, bad dimensions.
void validate(const SweepSpec& spec);

struct SweepRow {
  double eta_ratio = 0.0;
  Strategy strategy = Strategy::R1Opt;
  double theta = 0.0;
  std::optional<double> theta_predicted;
  double budget_used = 0.0;
  /// Set when the strategy failed at this budget; theta is then meaningless.
  std::optional<ErrorKind> error;
};

/// d x n product of seeded Gaussian d x k and n x k factors, A * B^T.
DataMatrix synth_low_rank(Index d, Index n, Index k, std::uint64_t seed);
DataMatrix synth_gaussian(Index d, Index n, std::uint64_t seed);

/// The matrix a spec describes.
DataMatrix sweep_matrix(const SweepSpec& spec);

/// Rows sorted by (eta_ratio, strategy). A failing strategy yields a row
/// with `error` set and the run continues.
std::vector<SweepRow> run_sweep(const SweepSpec& spec);

/// Header `eta_ratio,strategy,theta,theta_predicted,budget_used`. Failed rows
/// carry `ERR:<kind>` in the theta column.
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);
std::string sweep_csv(const std::vector<SweepRow>& rows);

/// Flat `key = value` lines; `#` starts a comment. Keys: d, n, k, data_kind
/// (low_rank | gaussian | file), data_path, eta_grid (comma list), eta_max and
/// eta_steps (ratios eta_max * i / eta_steps, i = 1..eta_steps), strategies
/// (comma list), trials, oracle_seed, grid_resolution, refine_steps, threads,
/// seed. Unknown or repeated keys are ParseError.
SweepSpec parse_sweep_spec(std::istream& in);
SweepSpec load_sweep_spec(const std::string& path);

}  // namespace subattack
