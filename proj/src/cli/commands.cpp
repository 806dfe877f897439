#include "commands.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <sstream>
#include <vector>

#include "subattack/error.hpp"
#include "subattack/experiments.hpp"
#include "subattack/io.hpp"
#include "subattack/oracle.hpp"
#include "subattack/pcr.hpp"
#include "subattack/rank_one.hpp"
#include "subattack/unconstrained.hpp"

namespace subattack::cli {

namespace {

using nlohmann::ordered_json;

constexpr double kGridTol = 1e-6;
constexpr double kRandomTol = 1e-4;

int exit_code_for(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::RegimeError:
    case ErrorKind::NoOrthogonalComplement:
      return kRegime;
    default:
      return kUsage;
  }
}

void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty()) {
    out << text;
  } else {
    write_text_file(path, text);
  }
}

std::vector<double> as_std(const Vector& v) { return {v.data(), v.data() + v.size()}; }

ordered_json report_json(const AttackReport& rep) {
  ordered_json j;
  j["schema_version"] = 1;
  j["strategy"] = rep.strategy;
  j["regime"] = std::string(regime_name(rep.regime));
  j["k"] = rep.k;
  j["eta"] = rep.eta;
  j["sigma"] = rep.sigma;
  j["theta_predicted"] = rep.theta_predicted;
  j["theta_achieved"] = rep.theta_achieved;
  j["theta_degrees"] = rep.theta_achieved * 180.0 / std::numbers::pi;
  j["delta_fro_norm"] = rep.delta_fro_norm;
  return j;
}

template <typename Body>
int guarded(std::ostream& err, Body body) {
  try {
    return body();
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
}

std::string fixed(double v) {
  std::ostringstream s;
  s << std::setprecision(10) << std::fixed << v;
  return s.str();
}

}  // namespace

int cmd_attack(const AttackOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const DataMatrix x = read_matrix_csv(opts.matrix_path);
    const AttackBudget budget(opts.eta);
    ordered_json j;
    Matrix delta;
    if (opts.strategy == "rank_one") {
      const RankOneResult r = attack_rank_one(x, opts.k, budget);
      j = report_json(r.report);
      ordered_json sol;
      sol["a"] = as_std(r.attack.a);
      sol["b"] = as_std(r.attack.b);
      if (r.closed_form) {
        sol["alpha"] = r.closed_form->alpha_star;
        sol["beta"] = r.closed_form->beta_star;
        sol["h"] = r.closed_form->h;
      }
      j["solution"] = sol;
      j["ambiguous_subspace"] = r.report.ambiguous_subspace;
      delta = r.attack.a * r.attack.b.transpose();
    } else if (opts.strategy == "unconstrained") {
      const UnconstrainedResult r = attack_unconstrained(x, opts.k, budget);
      j = report_json(r.report);
      const CanonicalEntries& e = r.perturbation.canonical;
      ordered_json sol;
      sol["entries"] = {{"b_kk", e.b_kk}, {"b_k1k", e.b_k1k}, {"b_kk1", e.b_kk1}, {"b_k1k1", e.b_k1k1}};
      if (r.closed_form) {
        sol["lambda_max"] = r.closed_form->lambda_max;
        sol["alpha"] = r.closed_form->alpha;
        sol["beta"] = r.closed_form->beta;
      }
      j["solution"] = sol;
      j["ambiguous_subspace"] = r.report.ambiguous_subspace;
      delta = r.perturbation.delta;
    } else {
      err << "error: --strategy must be rank_one or unconstrained\n";
      return static_cast<int>(kUsage);
    }
    emit(opts.out_path, j.dump(2) + "\n", out);
    if (!opts.delta_path.empty()) write_matrix_csv(opts.delta_path, delta);
    return static_cast<int>(kOk);
  });
}

int cmd_sweep(const SweepOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const SweepSpec spec = load_sweep_spec(opts.spec_path);
    emit(opts.out_path, sweep_csv(run_sweep(spec)), out);
    return static_cast<int>(kOk);
  });
}

int cmd_verify(const VerifyOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (opts.trials < 1) {
      err << "error: --trials must be >= 1\n";
      return static_cast<int>(kUsage);
    }
    const DataMatrix x = read_matrix_csv(opts.matrix_path);
    const AttackBudget budget(opts.eta);
    SearchConfig cfg;
    cfg.trials = opts.trials;
    cfg.seed = opts.seed;
    cfg.grid_resolution = opts.grid_resolution;
    validate(cfg);

    struct Check {
      std::string strategy;
      std::string oracle;
      double closed_form;
      double oracle_theta;
      double tol;
    };
    std::vector<Check> checks;
    std::vector<std::string> skipped;

    try {
      const RankOneResult r = attack_rank_one(x, opts.k, budget);
      const double predicted = r.report.theta_predicted + opts.inject_theta_offset;
      checks.push_back({"rank_one", "random", predicted, random_rank_one(x, opts.k, budget, cfg).theta,
                        kRandomTol});
      if (r.closed_form) {
        const auto& cf = *r.closed_form;
        const AngleSearchResult g = grid_search_angles(cf.sigma_k, cf.sigma_k1, opts.eta, cfg);
        checks.push_back({"rank_one", "grid", predicted, g.theta, kGridTol});
      }
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::RegimeError && e.kind() != ErrorKind::NoOrthogonalComplement) throw;
      skipped.push_back(std::string("rank_one: ") + e.what());
    }
    try {
      const UnconstrainedResult r = attack_unconstrained(x, opts.k, budget);
      const double predicted = r.report.theta_predicted + opts.inject_theta_offset;
      checks.push_back({"unconstrained", "random", predicted,
                        random_unconstrained(x, opts.k, budget, cfg).theta, kRandomTol});
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::RegimeError && e.kind() != ErrorKind::InvalidDimension) throw;
      skipped.push_back(std::string("unconstrained: ") + e.what());
    }
    if (checks.empty()) {
      for (const auto& s : skipped) err << "error: " << s << '\n';
      return static_cast<int>(kRegime);
    }

    bool ok = true;
    out << "strategy       oracle  theta_closed_form  theta_oracle   tolerance  status\n";
    for (const auto& c : checks) {
      const bool pass = c.oracle_theta <= c.closed_form + c.tol;
      ok = ok && pass;
      out << std::left << std::setw(15) << c.strategy << std::setw(8) << c.oracle << std::setw(19)
          << fixed(c.closed_form) << std::setw(15) << fixed(c.oracle_theta) << std::setw(11)
          << c.tol << (pass ? "ok" : "VIOLATED") << '\n';
    }
    for (const auto& s : skipped) out << "skipped " << s << '\n';
    return static_cast<int>(ok ? kOk : kVerificationFailed);
  });
}

int cmd_pcr(const PcrOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (opts.synthetic == !opts.data_path.empty()) {
      err << "error: give exactly one of --data or --synthetic\n";
      return static_cast<int>(kUsage);
    }
    const FeatureSet data =
        opts.synthetic ? synth_collinear(CollinearSpec{}, opts.seed) : load_feature_csv(opts.data_path);

    PcrStudy study;
    study.k = opts.k;
    study.split_seed = opts.seed;
    study.split_fraction = opts.split_fraction;
    if (!opts.eta_grid.empty()) {
      study.eta_grid.clear();
      for (const auto& f : split_fields(opts.eta_grid)) study.eta_grid.push_back(parse_number(f, "--eta-grid"));
    }
    std::vector<PcrStrategy> strategies;
    if (opts.strategy == "both") {
      strategies = {PcrStrategy::RankOne, PcrStrategy::Unconstrained};
    } else {
      strategies = {parse_pcr_strategy(opts.strategy)};
    }
    std::vector<RegressionReport> rows;
    for (PcrStrategy s : strategies) {
      study.strategy = s;
      const auto part = attack_pcr(data.features, data.targets, study);
      rows.insert(rows.end(), part.begin(), part.end());
    }
    emit(opts.out_path, pcr_csv(rows), out);
    return static_cast<int>(kOk);
  });
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Optimal attacks on the PCA subspace", "subattack"};
  app.require_subcommand(1);

  AttackOptions attack;
  auto* attack_cmd = app.add_subcommand("attack", "Compute an optimal attack and write a JSON report");
  attack_cmd->add_option("--matrix", attack.matrix_path, "Matrix CSV (columns are samples)")->required();
  attack_cmd->add_option("--k", attack.k, "Subspace dimension")->required();
  attack_cmd->add_option("--eta", attack.eta, "Frobenius-norm budget")->required();
  attack_cmd->add_option("--strategy", attack.strategy, "rank_one or unconstrained")
      ->check(CLI::IsMember({"rank_one", "unconstrained"}));
  attack_cmd->add_option("--out", attack.out_path, "JSON output path (default stdout)");
  attack_cmd->add_option("--emit-delta", attack.delta_path, "Write the perturbation as matrix CSV");

  SweepOptions sweep;
  auto* sweep_cmd = app.add_subcommand("sweep", "Run a budget sweep described by a spec file");
  sweep_cmd->add_option("--spec", sweep.spec_path, "Sweep spec file")->required();
  sweep_cmd->add_option("--out", sweep.out_path, "CSV output path (default stdout)");

  VerifyOptions verify;
  auto* verify_cmd = app.add_subcommand("verify", "Check the closed forms against search oracles");
  verify_cmd->add_option("--matrix", verify.matrix_path, "Matrix CSV")->required();
  verify_cmd->add_option("--k", verify.k, "Subspace dimension")->required();
  verify_cmd->add_option("--eta", verify.eta, "Frobenius-norm budget")->required();
  verify_cmd->add_option("--trials", verify.trials, "Random trials per oracle");
  verify_cmd->add_option("--seed", verify.seed, "Oracle seed");
  verify_cmd->add_option("--grid-resolution", verify.grid_resolution, "Lattice points per axis");
  verify_cmd->add_option("--inject-theta-offset", verify.inject_theta_offset)->group("");

  PcrOptions pcr;
  auto* pcr_cmd = app.add_subcommand("pcr", "Principal component regression under attack");
  pcr_cmd->add_option("--data", pcr.data_path, "Feature CSV, one sample per line, target last");
  pcr_cmd->add_flag("--synthetic", pcr.synthetic, "Use the built-in collinear benchmark");
  pcr_cmd->add_option("--k", pcr.k, "Number of principal components");
  pcr_cmd->add_option("--eta-grid", pcr.eta_grid, "Comma-separated budget ratios");
  pcr_cmd->add_option("--strategy", pcr.strategy, "rank_one, unconstrained or both")
      ->check(CLI::IsMember({"rank_one", "unconstrained", "both"}));
  pcr_cmd->add_option("--seed", pcr.seed, "Split and synthetic-data seed");
  pcr_cmd->add_option("--split-fraction", pcr.split_fraction, "Training fraction");
  pcr_cmd->add_option("--out", pcr.out_path, "CSV output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kUsage;
  }

  if (*attack_cmd) return cmd_attack(attack, out, err);
  if (*sweep_cmd) return cmd_sweep(sweep, out, err);
  if (*verify_cmd) return cmd_verify(verify, out, err);
  if (*pcr_cmd) return cmd_pcr(pcr, out, err);
  return kUsage;
}

}  // namespace subattack::cli
