#pragma once

// Subcommand implementations behind the `subattack` executable. Each returns
// a process exit code so tests can drive them without spawning processes.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace subattack::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 2,
  kRegime = 3,
  kVerificationFailed = 4,
};

struct AttackOptions {
  std::string matrix_path;
  long k = 1;
  double eta = 0.0;
  std::string strategy = "rank_one";
  std::string out_path;    // empty writes to `out`
  std::string delta_path;  // empty skips the dX dump
};

struct SweepOptions {
  std::string spec_path;
  std::string out_path;
};

struct VerifyOptions {
  std::string matrix_path;
  long k = 1;
  double eta = 0.0;
  std::uint64_t trials = 10000;
  std::uint64_t seed = 0;
  long grid_resolution = 400;
  double inject_theta_offset = 0.0;
};

struct PcrOptions {
  std::string data_path;
  bool synthetic = false;
  long k = 4;
  std::string eta_grid;  // comma list; empty uses the default grid
  std::string strategy = "both";
  std::uint64_t seed = 0;
  double split_fraction = 0.8;
  std::string out_path;
};

int cmd_attack(const AttackOptions& opts, std::ostream& out, std::ostream& err);
int cmd_sweep(const SweepOptions& opts, std::ostream& out, std::ostream& err);
int cmd_verify(const VerifyOptions& opts, std::ostream& out, std::ostream& err);
int cmd_pcr(const PcrOptions& opts, std::ostream& out, std::ostream& err);

/// Parses argv and dispatches to one subcommand.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace subattack::cli
