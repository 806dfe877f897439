#include "subattack/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "subattack/error.hpp"
#include "subattack/io.hpp"
#include "subattack/random.hpp"
#include "subattack/rank_one.hpp"
#include "subattack/unconstrained.hpp"

namespace subattack {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::uint64_t parse_count(const std::string& value, const std::string& key) {
  const double v = parse_number(value, "key '" + key + "'");
  if (v < 0.0 || v != std::floor(v) || v > 9.0e15) {
    throw Error(ErrorKind::ParseError, "key '" + key + "' needs a non-negative integer, got '" + value + "'");
  }
  return static_cast<std::uint64_t>(v);
}

SweepRow evaluate(const DataMatrix& x, Index k, double ratio, double eta, Strategy strategy,
                  const SearchConfig& oracle) {
  SweepRow row;
  row.eta_ratio = ratio;
  row.strategy = strategy;
  try {
    const AttackBudget budget(eta);
    switch (strategy) {
      case Strategy::R1Opt: {
        const RankOneResult r = attack_rank_one(x, k, budget);
        row.theta = r.report.theta_achieved;
        row.theta_predicted = r.report.theta_predicted;
        row.budget_used = r.report.delta_fro_norm;
        break;
      }
      case Strategy::WrOpt: {
        const UnconstrainedResult r = attack_unconstrained(x, k, budget);
        row.theta = r.report.theta_achieved;
        row.theta_predicted = r.report.theta_predicted;
        row.budget_used = r.report.delta_fro_norm;
        break;
      }
      case Strategy::R1Rnd: {
        const RandomRankOneBest r = random_rank_one(x, k, budget, oracle);
        row.theta = r.theta;
        row.budget_used = r.attack.budget_used();
        break;
      }
      case Strategy::WrRnd: {
        const RandomUnconstrainedBest r = random_unconstrained(x, k, budget, oracle);
        row.theta = r.theta;
        row.budget_used = r.delta.norm();
        break;
      }
    }
  } catch (const Error& e) {
    row.error = e.kind();
  }
  return row;
}

}  // namespace

std::string_view strategy_name(Strategy s) {
  switch (s) {
    case Strategy::R1Opt: return "r1-opt";
    case Strategy::R1Rnd: return "r1-rnd";
    case Strategy::WrOpt: return "wr-opt";
    case Strategy::WrRnd: return "wr-rnd";
  }
  return "unknown";
}

Strategy parse_strategy(std::string_view name) {
  for (Strategy s : {Strategy::R1Opt, Strategy::R1Rnd, Strategy::WrOpt, Strategy::WrRnd}) {
    if (name == strategy_name(s)) return s;
  }
  throw Error(ErrorKind::ParseError, "unknown strategy '" + std::string(name) + "'");
}

std::vector<double> default_eta_grid() {
  std::vector<double> grid;
  for (int i = 1; i <= 50; ++i) grid.push_back(1.2 * i / 50.0);
  return grid;
}

void validate(const SweepSpec& spec) {
  if (spec.d < 1 || spec.n < 1 || spec.k < 1 || spec.k > std::min(spec.d, spec.n)) {
    throw Error(ErrorKind::InvalidDimension, "sweep needs d, n >= 1 and 1 <= k <= min(d, n)");
  }
  if (spec.eta_grid.empty()) throw Error(ErrorKind::InvalidArgument, "eta_grid is empty");
  for (std::size_t i = 0; i < spec.eta_grid.size(); ++i) {
    if (!(spec.eta_grid[i] >= 0.0)) throw Error(ErrorKind::InvalidArgument, "eta_grid values must be >= 0");
    if (i > 0 && !(spec.eta_grid[i] > spec.eta_grid[i - 1])) {
      throw Error(ErrorKind::InvalidArgument, "eta_grid must be strictly increasing");
    }
  }
  if (spec.strategies.empty()) throw Error(ErrorKind::InvalidArgument, "no strategies selected");
  if (spec.data_kind == DataKind::FromFile && spec.data_path.empty()) {
    throw Error(ErrorKind::InvalidArgument, "data_kind=file needs data_path");
  }
  validate(spec.oracle);
}

DataMatrix synth_low_rank(Index d, Index n, Index k, std::uint64_t seed) {
  if (d < 1 || n < 1 || k < 1 || k > std::min(d, n)) {
    throw Error(ErrorKind::InvalidDimension, "synth_low_rank needs 1 <= k <= min(d, n)");
  }
  Rng rng(seed);
  const Matrix a = gaussian_matrix(rng, d, k);
  const Matrix b = gaussian_matrix(rng, n, k);
  return DataMatrix(a * b.transpose());
}

DataMatrix synth_gaussian(Index d, Index n, std::uint64_t seed) {
  if (d < 1 || n < 1) throw Error(ErrorKind::InvalidDimension, "synth_gaussian needs d, n >= 1");
  Rng rng(seed);
  return DataMatrix(gaussian_matrix(rng, d, n));
}

DataMatrix sweep_matrix(const SweepSpec& spec) {
  switch (spec.data_kind) {
    case DataKind::LowRank: return synth_low_rank(spec.d, spec.n, spec.k, spec.seed);
    case DataKind::Gaussian: return synth_gaussian(spec.d, spec.n, spec.seed);
    case DataKind::FromFile: return read_matrix_csv(spec.data_path);
  }
  throw Error(ErrorKind::InvalidArgument, "unknown data kind");
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
  validate(spec);
  const DataMatrix x = sweep_matrix(spec);
  const Index k = spec.k;
  if (k > std::min(x.rows(), x.cols())) {
    throw Error(ErrorKind::InvalidDimension, "k exceeds min(d, n) of the loaded matrix");
  }
  const SvdTriple svd = full_svd(x);
  const double base = svd.rank() == k ? svd.sigma_at(k - 1) : svd.sigma_at(k - 1) - svd.sigma_at(k);
  if (!(base > 0.0)) {
    throw Error(ErrorKind::RegimeError, "budget ratio base is zero; sigma_k must exceed sigma_{k+1}");
  }

  std::vector<Strategy> strategies = spec.strategies;
  std::sort(strategies.begin(), strategies.end());
  strategies.erase(std::unique(strategies.begin(), strategies.end()), strategies.end());

  std::vector<SweepRow> rows;
  rows.reserve(spec.eta_grid.size() * strategies.size());
  for (double ratio : spec.eta_grid) {
    for (Strategy s : strategies) rows.push_back(evaluate(x, k, ratio, ratio * base, s, spec.oracle));
  }
  return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "eta_ratio,strategy,theta,theta_predicted,budget_used\n";
  for (const auto& r : rows) {
    out << format_number(r.eta_ratio) << ',' << strategy_name(r.strategy) << ',';
    if (r.error) {
      out << "ERR:" << error_kind_name(*r.error) << ",,\n";
      continue;
    }
    out << format_number(r.theta) << ',';
    if (r.theta_predicted) out << format_number(*r.theta_predicted);
    out << ',' << format_number(r.budget_used) << '\n';
  }
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  write_sweep_csv(out, rows);
  return out.str();
}

SweepSpec parse_sweep_spec(std::istream& in) {
  std::map<std::string, std::string> kv;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view body(line);
    if (const auto hash = body.find('#'); hash != std::string_view::npos) body = body.substr(0, hash);
    body = trim(body);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorKind::ParseError, "line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key(trim(body.substr(0, eq)));
    const std::string value(trim(body.substr(eq + 1)));
    if (key.empty()) throw Error(ErrorKind::ParseError, "line " + std::to_string(line_no) + ": empty key");
    if (!kv.emplace(key, value).second) {
      throw Error(ErrorKind::ParseError, "line " + std::to_string(line_no) + ": repeated key '" + key + "'");
    }
  }

  SweepSpec spec;
  std::optional<double> eta_max;
  std::optional<std::uint64_t> eta_steps;
  bool have_grid = false;
  for (const auto& [key, value] : kv) {
    if (key == "d") {
      spec.d = static_cast<Index>(parse_count(value, key));
    } else if (key == "n") {
      spec.n = static_cast<Index>(parse_count(value, key));
    } else if (key == "k") {
      spec.k = static_cast<Index>(parse_count(value, key));
    } else if (key == "data_kind") {
      if (value == "low_rank") spec.data_kind = DataKind::LowRank;
      else if (value == "gaussian") spec.data_kind = DataKind::Gaussian;
      else if (value == "file") spec.data_kind = DataKind::FromFile;
      else throw Error(ErrorKind::ParseError, "data_kind must be low_rank, gaussian or file");
    } else if (key == "data_path") {
      spec.data_path = value;
    } else if (key == "eta_grid") {
      spec.eta_grid.clear();
      if (!value.empty()) {
        for (const auto& f : split_fields(value)) spec.eta_grid.push_back(parse_number(f, "eta_grid"));
      }
      have_grid = true;
    } else if (key == "eta_max") {
      eta_max = parse_number(value, key);
    } else if (key == "eta_steps") {
      eta_steps = parse_count(value, key);
    } else if (key == "strategies") {
      spec.strategies.clear();
      for (const auto& f : split_fields(value)) {
        if (!f.empty()) spec.strategies.push_back(parse_strategy(f));
      }
    } else if (key == "trials") {
      spec.oracle.trials = parse_count(value, key);
    } else if (key == "oracle_seed") {
      spec.oracle.seed = parse_count(value, key);
    } else if (key == "grid_resolution") {
      spec.oracle.grid_resolution = static_cast<Index>(parse_count(value, key));
    } else if (key == "refine_steps") {
      spec.oracle.refine_steps = static_cast<int>(parse_count(value, key));
    } else if (key == "threads") {
      spec.oracle.threads = static_cast<unsigned>(parse_count(value, key));
    } else if (key == "seed") {
      spec.seed = parse_count(value, key);
    } else {
      throw Error(ErrorKind::ParseError, "unknown key '" + key + "'");
    }
  }
  if (eta_max || eta_steps) {
    if (have_grid) throw Error(ErrorKind::ParseError, "give either eta_grid or eta_max/eta_steps, not both");
    if (!eta_max || !eta_steps || *eta_steps == 0) {
      throw Error(ErrorKind::ParseError, "eta_max and eta_steps (>= 1) must be given together");
    }
    spec.eta_grid.clear();
    for (std::uint64_t i = 1; i <= *eta_steps; ++i) {
      spec.eta_grid.push_back(*eta_max * static_cast<double>(i) / static_cast<double>(*eta_steps));
    }
  }
  if (spec.eta_grid.empty()) throw Error(ErrorKind::ParseError, "eta_grid is empty");
  return spec;
}

SweepSpec load_sweep_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot open '" + path + "'");
  return parse_sweep_spec(in);
}

}  // namespace subattack
