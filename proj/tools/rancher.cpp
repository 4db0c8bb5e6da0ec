// Command-line front end: simulate, verify, stats, constants, render.
//
// Exit codes: 0 ok, 1 invariant violation, 2 usage or unreadable input,
// 3 insufficient data for a requested estimate.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "rancher/analysis.hpp"
#include "rancher/drift.hpp"
#include "rancher/error.hpp"
#include "rancher/montecarlo.hpp"
#include "rancher/observables.hpp"
#include "rancher/report.hpp"
#include "rancher/rng.hpp"
#include "rancher/svg.hpp"
#include "rancher/trajectory_io.hpp"
#include "rancher/walk.hpp"

namespace {

using rancher::json;

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitUsage = 2;
constexpr int kExitInsufficient = 3;

struct Options {
  std::size_t steps{10'000};
  std::size_t runs{1};
  std::uint64_t seed{1};
  std::string mode{"rejection"};
  std::vector<std::size_t> checkpoints;
  std::string out;
  std::string svg;
  std::string in;
  double tol{rancher::kFrameTol};
  std::size_t workers{0};
  std::vector<double> ldp_speeds{0.05, 0.1, 0.2};
  bool no_drift{false};
};

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream os(path);
  if (!os) throw rancher::Error(rancher::ErrorKind::Io, "cannot open '" + path + "' for writing");
  os << text;
}

rancher::Trajectory load_or_simulate(const Options& o, std::string* digest = nullptr) {
  if (!o.in.empty()) {
    auto file = rancher::read_csv_file(o.in);
    if (digest) *digest = file.constants_digest;
    return std::move(file.traj);
  }
  return rancher::run_walk(o.steps, rancher::derive_seed(o.seed, 0),
                           rancher::parse_sampler_mode(o.mode));
}

int cmd_simulate(const Options& o, const rancher::WalkConstants& k) {
  const auto traj = rancher::run_walk(o.steps, rancher::derive_seed(o.seed, 0),
                                      rancher::parse_sampler_mode(o.mode));
  const std::string digest = rancher::constants_digest(k);
  if (o.out.empty() || o.out == "-") {
    rancher::write_csv(std::cout, traj, digest);
  } else {
    rancher::write_csv_file(o.out, traj, digest);
  }
  if (!o.svg.empty()) {
    rancher::render_svg_file(o.svg, traj, rancher::extract_ladders(traj, k.gamma), k.gamma);
  }
  return kExitOk;
}

int cmd_verify(const Options& o, const rancher::WalkConstants& k) {
  rancher::AnalysisOptions opt;
  opt.tol = o.tol;
  opt.drift_checks = !o.no_drift;
  json report;
  report["constants"] = rancher::to_json(k);
  rancher::Violations v;
  std::optional<std::string> failure;

  if (!o.in.empty()) {
    std::string digest;
    const auto traj = load_or_simulate(o, &digest);
    report["input"] = {{"path", o.in}, {"seed", traj.seed}, {"mode", rancher::to_string(traj.mode)},
                       {"steps", traj.n_steps()}, {"constants_digest", digest},
                       {"digest_matches", digest == rancher::constants_digest(k)}};
    try {
      v = rancher::analyze_run(traj, k, opt).violations;
    } catch (const rancher::Error& e) {
      failure = std::string(rancher::to_string(e.kind())) + ": " + e.what();
    }
  } else {
    const rancher::SamplerMode mode = rancher::parse_sampler_mode(o.mode);
    report["input"] = {{"seed", o.seed}, {"runs", o.runs}, {"steps", o.steps}, {"mode", o.mode}};
    try {
      for (std::size_t r = 0; r < o.runs; ++r) {
        const auto traj = rancher::run_walk(o.steps, rancher::derive_seed(o.seed, r), mode);
        v.merge(rancher::analyze_run(traj, k, opt).violations);
      }
    } catch (const rancher::Error& e) {
      failure = std::string(rancher::to_string(e.kind())) + ": " + e.what();
    }
  }
  report["tolerance"] = o.tol;
  report["checks"] = rancher::to_json(v);
  if (failure) report["error"] = *failure;
  const bool ok = !failure && v.total() == 0;
  report["ok"] = ok;
  write_text(o.out, report.dump(2) + "\n");
  return ok ? kExitOk : kExitViolation;
}

int cmd_stats(const Options& o, const rancher::WalkConstants& k) {
  rancher::EnsembleConfig cfg;
  cfg.runs = o.runs;
  cfg.steps = o.steps;
  cfg.master_seed = o.seed;
  cfg.mode = rancher::parse_sampler_mode(o.mode);
  cfg.workers = o.workers;
  cfg.checkpoints = o.checkpoints.empty() ? rancher::default_checkpoints(o.steps) : o.checkpoints;
  cfg.validate();

  const auto runs = rancher::run_ensemble(cfg, k);
  bool insufficient = false;
  auto section = [&](auto&& compute) -> json {
    try {
      return compute();
    } catch (const rancher::Error& e) {
      if (e.kind() == rancher::ErrorKind::InsufficientData) {
        insufficient = true;
        return rancher::insufficient(e.what());
      }
      if (e.kind() == rancher::ErrorKind::ModeMismatch) {
        return json{{"not_applicable", true}, {"reason", e.what()}};
      }
      throw;
    }
  };

  json doc;
  doc["config"] = {{"runs", cfg.runs}, {"steps", cfg.steps}, {"seed", cfg.master_seed},
                   {"mode", rancher::to_string(cfg.mode)}, {"checkpoints", cfg.checkpoints},
                   {"m_horizon", cfg.m_horizon}};
  doc["constants"] = rancher::to_json(k);
  doc["checks"] = rancher::to_json(rancher::merged_violations(runs));
  doc["speed"] = section([&] { return rancher::to_json(rancher::estimate_speed(runs)); });
  doc["tails"] = section([&] { return rancher::to_json(rancher::delta_tails(runs)); });
  doc["ldp"] = section([&] { return rancher::to_json(rancher::ldp_curve(runs, o.ldp_speeds)); });
  doc["supermartingale"] =
      section([&] { return rancher::to_json(rancher::supermartingale_decay(runs, k)); });
  doc["ladder_events"] =
      section([&] { return rancher::to_json(rancher::a_statistics(cfg, runs)); });
  write_text(o.out, doc.dump(2) + "\n");
  return insufficient ? kExitInsufficient : kExitOk;
}

int cmd_constants(const Options& o, const rancher::WalkConstants& k) {
  json doc = rancher::to_json(k);
  doc["supermartingale_prefactor"] = rancher::supermartingale_prefactor(k);
  doc["good_drift_threshold"] = rancher::kGoodDriftThreshold;
  doc["drift_sum_bound"] = rancher::kDriftSumBound;
  write_text(o.out, doc.dump(2) + "\n");
  return kExitOk;
}

int cmd_render(const Options& o, const rancher::WalkConstants& k) {
  const auto traj = load_or_simulate(o);
  const auto ladders = rancher::extract_ladders(traj, k.gamma);
  if (o.svg.empty() || o.svg == "-") {
    rancher::render_svg(std::cout, traj, ladders, k.gamma);
  } else {
    rancher::render_svg_file(o.svg, traj, ladders, k.gamma);
  }
  return kExitOk;
}

// Fill options not given on the command line from a key=value file.
// Blank lines and lines starting with '#' are skipped; unknown keys are errors.
void apply_config_file(CLI::App& sub, const std::string& path) {
  std::ifstream is(path);
  if (!is) throw CLI::FileError::Missing(path);
  std::string line;
  for (int lineno = 1; std::getline(is, line); ++lineno) {
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto eq = line.find('=');
    const std::string where = path + ":" + std::to_string(lineno);
    if (eq == std::string::npos) throw CLI::ConversionError(where + ": expected key=value");
    const std::string key = CLI::detail::trim_copy(line.substr(0, eq));
    const std::string value = CLI::detail::trim_copy(line.substr(eq + 1));
    CLI::Option* opt = key == "config" ? nullptr : sub.get_option_no_throw("--" + key);
    if (opt == nullptr) throw CLI::ExtrasError(where + ": unknown key '" + key + "'", CLI::ExitCodes::ExtrasError);
    if (opt->count() > 0) continue;
    if (opt->get_type_size() == 0) {
      opt->add_result(value == "true" || value == "1" ? "true" : "false");
    } else {
      opt->add_result(value);
    }
    opt->run_callback();
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulate and check the planar random walk that avoids its own convex hull."};
  app.require_subcommand(1);
  Options o;
  std::string config_path;

  auto add_walk = [&](CLI::App* sub) {
    sub->add_option("--steps", o.steps, "number of steps per walk")->check(CLI::NonNegativeNumber);
    sub->add_option("--seed", o.seed, "master seed");
    sub->add_option("--mode", o.mode, "direction sampler")
        ->check(CLI::IsMember({"direct", "rejection"}));
    sub->add_option("--config", config_path, "key=value file; command-line flags take precedence")
        ->check(CLI::ExistingFile);
  };

  auto* simulate = app.add_subcommand("simulate", "run one walk and write its trajectory CSV");
  add_walk(simulate);
  simulate->add_option("--out", o.out, "CSV path (default stdout)");
  simulate->add_option("--svg", o.svg, "also render an SVG picture here");

  auto* verify = app.add_subcommand("verify", "check every invariant on stored or fresh walks");
  add_walk(verify);
  verify->add_option("--in", o.in, "trajectory CSV to check instead of simulating");
  verify->add_option("--runs", o.runs, "number of fresh walks")->check(CLI::PositiveNumber);
  verify->add_option("--tol", o.tol, "tolerance on frame identities")->check(CLI::PositiveNumber);
  verify->add_option("--out", o.out, "JSON report path (default stdout)");
  verify->add_flag("--no-drift", o.no_drift, "skip the drift integrals");

  auto* stats = app.add_subcommand("stats", "ensemble estimates of speed, tails and decay");
  add_walk(stats);
  stats->add_option("--runs", o.runs, "number of independent walks")->check(CLI::PositiveNumber);
  stats->add_option("--checkpoints", o.checkpoints, "comma-separated step counts")
      ->delimiter(',')
      ->check(CLI::PositiveNumber);
  stats->add_option("--workers", o.workers, "worker threads (0 = all cores)");
  stats->add_option("--ldp", o.ldp_speeds, "comma-separated speeds c for P[|X_n| <= c n]")
      ->delimiter(',')
      ->check(CLI::PositiveNumber);
  stats->add_option("--out", o.out, "JSON path (default stdout)");

  auto* constants = app.add_subcommand("constants", "print the derived constants as JSON");
  constants->add_option("--out", o.out, "JSON path (default stdout)");

  auto* render = app.add_subcommand("render", "draw a stored or fresh walk as SVG");
  add_walk(render);
  render->add_option("--in", o.in, "trajectory CSV to draw instead of simulating");
  render->add_option("--svg", o.svg, "SVG path (default stdout)");

  try {
    app.parse(argc, argv);
    if (!config_path.empty()) apply_config_file(*app.get_subcommands().front(), config_path);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    const rancher::WalkConstants k = rancher::derive_constants();
    if (*simulate) return cmd_simulate(o, k);
    if (*verify) return cmd_verify(o, k);
    if (*stats) return cmd_stats(o, k);
    if (*constants) return cmd_constants(o, k);
    if (*render) return cmd_render(o, k);
  } catch (const rancher::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    if (e.kind() == rancher::ErrorKind::InsufficientData) return kExitInsufficient;
    return kExitUsage;
  }
  return kExitUsage;
}
