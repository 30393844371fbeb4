#pragma once
// Command-line front end: scenario-driven runs, poset inspection, function
// grids, the demo reproductions, and the verification suite. Thin sequential
// driver; all parallelism lives inside monte_carlo. Exit codes: 0 success,
// 1 verification failure, 2 config error.

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "herdlab/analysis.hpp"
#include "herdlab/csv.hpp"
#include "herdlab/dynamics.hpp"
#include "herdlab/ensemble.hpp"
#include "herdlab/errors.hpp"
#include "herdlab/g_function.hpp"
#include "herdlab/perron.hpp"
#include "herdlab/report.hpp"
#include "herdlab/scc.hpp"
#include "herdlab/scenario.hpp"
#include "herdlab/time_variant.hpp"
#include "herdlab/verify.hpp"
#include "herdlab/version.hpp"
#include "herdlab/weight_matrix.hpp"

namespace herdlab {

// Fixed demo seeds, chosen so the bundled runs show both qualitative
// outcomes: every agent settling at 1, and the two autonomous camps
// splitting 1 versus 0 with the bottom pair left fluctuating. Each emitted
// file records its seed in the metadata header.
inline constexpr std::uint64_t kSeedReproduceConsensus = 0;
inline constexpr std::uint64_t kSeedReproduceSplit = 4;

namespace cli_detail {

inline unsigned resolve_threads(long long flag_value) {
  long long v = flag_value;
  if (v < 0) {  // flag unset: fall back to the environment, then 1
    v = 1;
    if (const char* env = std::getenv("HERDLAB_THREADS")) {
      char* end = nullptr;
      v = std::strtoll(env, &end, 10);
      if (end == env || *end != '\0' || v < 0)
        throw InvalidArgument("HERDLAB_THREADS must be a nonnegative integer");
    }
  }
  if (v == 0) {
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
  }
  return static_cast<unsigned>(v);
}

inline void write_text_file(const std::string& dir, const std::string& name,
                            const std::function<void(std::ostream&)>& body, std::ostream& err) {
  std::filesystem::create_directories(dir);
  const std::string path = (std::filesystem::path(dir) / name).string();
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot open output file: " + path);
  body(out);
  if (!out) throw InvalidArgument("failed while writing: " + path);
  err << "wrote " << path << "\n";
}

inline void print_poset(std::ostream& out, const SccPoset& poset) {
  out << "components " << poset.count() << "\n";
  for (int r = 0; r < poset.count(); ++r) {
    out << "C" << r + 1 << " = {";
    for (std::size_t k = 0; k < poset.components[r].size(); ++k)
      out << (k ? "," : "") << "v" << poset.components[r][k] + 1;
    out << "}\n";
  }
  out << "covers";
  for (const auto& [r, s] : poset.covers) out << " (C" << r + 1 << ",C" << s + 1 << ")";
  out << "\n";
  out << "maximal";
  for (int r : poset.maximal) out << " C" << r + 1;
  out << "\n";
  out << "minimal";
  for (int r : poset.minimal) out << " C" << r + 1;
  out << "\n";
}

}  // namespace cli_detail

inline int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"numerical laboratory for random-actions opinion dynamics"};
  app.name("herdlab");
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  std::string config_path, out_dir, weights_path;
  std::uint64_t seed = 0, runs = 0;
  double delta = 0.05;
  long long window = 50;
  long long threads = -1;
  bool record_actions = false;
  std::vector<long long> probe_times;

  auto* sim = app.add_subcommand("simulate", "run one trajectory and emit CSV");
  sim->add_option("--config", config_path, "scenario file")->required()->check(CLI::ExistingFile);
  auto* sim_seed = sim->add_option("--seed", seed, "master seed override");
  sim->add_option("--out", out_dir, "output directory (default: CSV to stdout)");
  sim->add_flag("--record-actions", record_actions, "also record per-step actions");

  auto* ens_cmd = app.add_subcommand("ensemble", "Monte Carlo verdicts and corner statistics");
  ens_cmd->add_option("--config", config_path, "scenario file")
      ->required()
      ->check(CLI::ExistingFile);
  auto* ens_seed = ens_cmd->add_option("--seed", seed, "master seed override");
  auto* ens_runs = ens_cmd->add_option("--runs", runs, "number of runs");
  auto* ens_delta = ens_cmd->add_option("--delta", delta, "corner radius");
  auto* ens_window = ens_cmd->add_option("--window", window, "verdict window length");
  ens_cmd->add_option("--threads", threads, "worker threads (0 = auto; never affects results)");
  ens_cmd->add_option("--probe", probe_times, "extra probe times for the corner table");
  ens_cmd->add_option("--out", out_dir, "output directory (default: summary to stdout)");

  auto* scc_cmd = app.add_subcommand("scc", "print the component poset of a weights file");
  scc_cmd->add_option("weights", weights_path, "weight matrix file")
      ->required()
      ->check(CLI::ExistingFile);

  int alpha_grid = 12, gamma_grid = 101, g_n = 6;
  auto* gfunc = app.add_subcommand("gfunc", "export the corner-mass product on a grid");
  gfunc->add_option("--alpha-grid", alpha_grid, "alpha count, evenly spaced in [0.001, 0.999]");
  gfunc->add_option("--n", g_n, "number of agents N");
  gfunc->add_option("--gamma-grid", gamma_grid, "gamma count, evenly spaced in [0, 1]");
  gfunc->add_option("--out", out_dir, "output directory (default: CSV to stdout)");

  double tv_beta = 0.25;
  long long tv_steps = 100;
  std::string tv_schedule = "halving";
  std::vector<double> tv_x0 = {1.0, 0.0};
  auto* tv = app.add_subcommand("timevariant", "two-agent time-varying mixing demo");
  tv->add_option("--beta", tv_beta, "initial mixing weight in [0, 0.5]");
  tv->add_option("--schedule", tv_schedule, "constant or halving")
      ->check(CLI::IsMember({"constant", "halving"}));
  tv->add_option("--steps", tv_steps, "number of steps");
  tv->add_option("--x0", tv_x0, "initial opinions (two values)")->expected(2);
  tv->add_option("--out", out_dir, "output directory (default: CSV to stdout)");

  std::string suite = "all";
  auto* ver = app.add_subcommand("verify", "run the property and acceptance suites");
  ver->add_option("--suite", suite, "all, acceptance, or invariants")
      ->check(CLI::IsMember({"all", "acceptance", "invariants"}));
  ver->add_option("--out", out_dir, "directory for report.csv (default: stdout)");

  auto* rep = app.add_subcommand("reproduce", "emit the bundled demo data files");
  rep->add_option("--out", out_dir, "output directory (default: current directory)");

  try {
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand(sim)) {
      Scenario sc = parse_scenario_file(config_path);
      if (sim_seed->count()) sc.seed = seed;
      SimulationConfig cfg = scenario_to_config(sc);
      cfg.record_actions = record_actions;
      const Trajectory traj = simulate(cfg);
      MetaLines meta;
      meta.emplace_back("seed", std::to_string(cfg.seed));
      const std::string dir = !out_dir.empty() ? out_dir : sc.output_dir.value_or("");
      if (dir.empty()) {
        write_trajectory_csv(out, traj, meta);
      } else {
        cli_detail::write_text_file(
            dir, "trajectory.csv", [&](std::ostream& os) { write_trajectory_csv(os, traj, meta); },
            err);
        if (record_actions)
          cli_detail::write_text_file(
              dir, "actions.csv", [&](std::ostream& os) { write_actions_csv(os, traj, meta); },
              err);
      }
      return 0;
    }

    if (app.got_subcommand(ens_cmd)) {
      Scenario sc = parse_scenario_file(config_path);
      if (ens_seed->count()) sc.seed = seed;
      const SimulationConfig cfg = scenario_to_config(sc);
      const std::uint64_t run_count =
          ens_runs->count() ? runs : sc.runs.value_or(1000);
      const double use_delta = ens_delta->count() ? delta : sc.delta.value_or(0.05);
      const long long use_window = ens_window->count() ? window : sc.window.value_or(50);
      MonteCarloProbes probes;
      std::sort(probe_times.begin(), probe_times.end());
      probe_times.erase(std::unique(probe_times.begin(), probe_times.end()), probe_times.end());
      probes.times = probe_times;
      const Ensemble ens = monte_carlo(cfg, run_count, use_delta, use_window, probes,
                                       cli_detail::resolve_threads(threads));
      const std::string dir = !out_dir.empty() ? out_dir : sc.output_dir.value_or("");
      if (dir.empty()) {
        write_ensemble_summary_csv(out, ens);
      } else {
        cli_detail::write_text_file(
            dir, "summary.csv", [&](std::ostream& os) { write_ensemble_summary_csv(os, ens); },
            err);
        cli_detail::write_text_file(
            dir, "corners.csv",
            [&](std::ostream& os) { write_corner_table_csv(os, ens, use_delta); }, err);
        cli_detail::write_text_file(
            dir, "runs.csv", [&](std::ostream& os) { write_run_summaries_csv(os, ens); }, err);
      }
      return 0;
    }

    if (app.got_subcommand(scc_cmd)) {
      const WeightMatrix w = load_weight_matrix_file(weights_path);
      const SccPoset poset = strongly_connected_components(w);
      cli_detail::print_poset(out, poset);
      if (poset.count() == 1) {
        const PerronVector pi = perron_left_vector(w);
        out << "pi";
        for (double v : pi.values) out << " " << format_g17(v);
        out << "\n";
      }
      return 0;
    }

    if (app.got_subcommand(gfunc)) {
      if (alpha_grid < 2 || gamma_grid < 2)
        throw InvalidArgument("gfunc: grids need at least 2 points");
      const auto alphas = linspace(0.001, 0.999, alpha_grid);
      const auto gammas = linspace(0.0, 1.0, gamma_grid);
      if (out_dir.empty()) {
        write_g_grid_csv(out, alphas, g_n, gammas);
      } else {
        cli_detail::write_text_file(
            out_dir, "g_grid.csv",
            [&](std::ostream& os) { write_g_grid_csv(os, alphas, g_n, gammas); }, err);
      }
      return 0;
    }

    if (app.got_subcommand(tv)) {
      const Schedule schedule =
          tv_schedule == "constant" ? Schedule::constant : Schedule::halving;
      const TimeVariantResult res =
          time_variant_two_agent(tv_beta, schedule, {tv_x0[0], tv_x0[1]}, tv_steps);
      const auto body = [&](std::ostream& os) {
        MetaLines meta;
        meta.emplace_back("beta", format_g17(tv_beta));
        meta.emplace_back("schedule", tv_schedule);
        std::string limit;
        for (const auto& row : res.limit_matrix)
          for (double v : row) limit += (limit.empty() ? "" : " ") + format_g17(v);
        meta.emplace_back("limit_matrix", limit);
        write_meta(os, meta);
        write_csv_row(os, {"t", "x1", "x2"});
        for (std::size_t k = 0; k < res.states.size(); ++k)
          write_csv_row(os, {std::to_string(k), format_g17(res.states[k][0]),
                             format_g17(res.states[k][1])});
      };
      if (out_dir.empty())
        body(out);
      else
        cli_detail::write_text_file(out_dir, "timevariant.csv", body, err);
      return 0;
    }

    if (app.got_subcommand(ver)) {
      const std::vector<Check> checks = suite == "acceptance" ? acceptance_checks()
                                        : suite == "invariants" ? invariant_checks()
                                                                : all_checks();
      std::vector<CheckResult> results;
      bool all_passed = true;
      for (const auto& check : checks) {
        const CheckResult r = run_check(check);
        char timing[32];
        std::snprintf(timing, sizeof timing, "%.2f", r.seconds);
        err << (r.passed ? "pass" : "FAIL") << "  " << r.name << " (" << timing
            << "s): " << r.details << "\n";
        all_passed = all_passed && r.passed;
        results.push_back(r);
      }
      if (out_dir.empty())
        write_check_report_csv(out, results);
      else
        cli_detail::write_text_file(
            out_dir, "report.csv", [&](std::ostream& os) { write_check_report_csv(os, results); },
            err);
      return all_passed ? 0 : 1;
    }

    if (app.got_subcommand(rep)) {
      const std::string dir = out_dir.empty() ? "." : out_dir;
      const WeightMatrix w = demo_network();
      cli_detail::write_text_file(
          dir, "demo7.weights", [&](std::ostream& os) { save_weight_matrix(os, w); }, err);
      cli_detail::write_text_file(
          dir, "g_grid.csv",
          [&](std::ostream& os) {
            write_g_grid_csv(os, linspace(0.001, 0.999, 12), 6, linspace(0.0, 1.0, 101));
          },
          err);
      SimulationConfig cfg;
      cfg.w = w;
      cfg.alpha = 0.5;
      cfg.x1.assign(7, 0.5);
      cfg.t_max = 60;
      cfg.seed = kSeedReproduceConsensus;
      MetaLines meta;
      meta.emplace_back("alpha", format_g17(cfg.alpha));
      meta.emplace_back("seed", std::to_string(cfg.seed));
      const Trajectory agree = simulate(cfg);
      cli_detail::write_text_file(
          dir, "consensus_demo.csv",
          [&](std::ostream& os) { write_trajectory_csv(os, agree, meta); }, err);
      cfg.t_max = 120;
      cfg.seed = kSeedReproduceSplit;
      meta.back().second = std::to_string(cfg.seed);
      const Trajectory split = simulate(cfg);
      cli_detail::write_text_file(
          dir, "non_consensus_demo.csv",
          [&](std::ostream& os) { write_trajectory_csv(os, split, meta); }, err);
      return 0;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace herdlab
