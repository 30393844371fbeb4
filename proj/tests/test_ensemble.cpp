#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <sstream>

#include "herdlab/ensemble.hpp"
#include "herdlab/errors.hpp"
#include "herdlab/g_function.hpp"
#include "herdlab/report.hpp"
#include "herdlab/time_variant.hpp"
#include "herdlab/verify.hpp"

using namespace herdlab;

namespace {

SimulationConfig demo_config() {
  SimulationConfig cfg;
  cfg.w = demo_network();
  cfg.alpha = 0.3;
  cfg.x1.assign(7, 0.5);
  cfg.t_max = 300;
  cfg.seed = 77;
  return cfg;
}

}  // namespace

// ---- ensembles ----

TEST_CASE("a one-run ensemble reproduces simulate bit for bit") {
  const SimulationConfig cfg = demo_config();
  MonteCarloProbes probes;
  probes.times = {1, 50, 300};
  const Ensemble ens = monte_carlo(cfg, 1, 0.05, 50, probes, 1);
  REQUIRE(ens.runs.size() == 1);

  // run 0 draws from the same stream simulate derives from the master seed
  const Trajectory traj = simulate(cfg);
  REQUIRE(ens.runs[0].final_x == traj.states.back().x);
  for (const auto& probe : ens.runs[0].probes) {
    const auto& state = traj.states[static_cast<std::size_t>(probe.t - 1)];
    REQUIRE(state.t == probe.t);
    REQUIRE(probe.x == state.x);
  }
}

TEST_CASE("thread count never changes ensemble results") {
  const SimulationConfig cfg = demo_config();
  MonteCarloProbes probes;
  probes.times = {10, 100};
  const Ensemble one = monte_carlo(cfg, 64, 0.05, 50, probes, 1);
  const Ensemble three = monte_carlo(cfg, 64, 0.05, 50, probes, 3);
  REQUIRE(one.runs == three.runs);
}

TEST_CASE("corner counts agree with a direct tally of the runs") {
  const SimulationConfig cfg = demo_config();
  const Ensemble ens = monte_carlo(cfg, 200, 0.05, 50, {}, 2);
  const CornerProbability table = empirical_corner_probability(ens, cfg.t_max, 0.05);
  std::uint64_t zero = 0, one = 0, mixed = 0;
  for (const auto& run : ens.runs) {
    OpinionState s;
    s.t = cfg.t_max;
    s.x = run.final_x;
    const auto label = corner_event(s, 0.05);
    if (!label) continue;
    if (label->all_zero())
      ++zero;
    else if (label->all_one())
      ++one;
    else
      ++mixed;
  }
  REQUIRE(table.count_zero == zero);
  REQUIRE(table.count_one == one);
  REQUIRE(table.count_mixed == mixed);
  REQUIRE(table.p_corner_any ==
          Catch::Approx(double(zero + one + mixed) / 200.0).margin(1e-15));
}

TEST_CASE("residual moments need recorded probe actions") {
  const SimulationConfig cfg = demo_config();
  const Ensemble ens = monte_carlo(cfg, 8, 0.05, 50, {}, 1);
  REQUIRE_THROWS_AS(residual_moments(ens, {10}), MissingActions);
}

TEST_CASE("residual moments average the squared action gap") {
  SimulationConfig cfg = demo_config();
  cfg.t_max = 40;
  MonteCarloProbes probes;
  probes.times = {5};
  probes.record_actions = true;
  const Ensemble ens = monte_carlo(cfg, 50, 0.05, 10, probes, 1);
  const ResidualMoments mom = residual_moments(ens, {5});
  double manual = 0.0;
  for (const auto& run : ens.runs) {
    const auto& probe = run.probes.front();
    const double y = probe.a[0] - probe.x[0];
    manual += y * y;
  }
  manual /= 50.0;
  REQUIRE(mom.second_moment[0][0] == Catch::Approx(manual).margin(1e-15));
  // correlations live in [-1, 1] and the diagonal is exactly 1
  REQUIRE(mom.correlation[0][2][2] == 1.0);
  REQUIRE(std::abs(mom.correlation[0][0][3]) <= 1.0);
}

TEST_CASE("fast absorbing chain matches its predicted consensus fraction") {
  // alpha -> 1 with identity mixing absorbs each agent after one step, so the
  // consensus fraction over one agent equals its initial opinion.
  SimulationConfig cfg;
  cfg.w = validate_weight_matrix({{1.0}});
  cfg.alpha = 0.999;
  cfg.x1 = {0.3};
  cfg.t_max = 600;
  cfg.seed = 5;
  const Ensemble ens = monte_carlo(cfg, 2000, 0.05, 50, {}, 2);
  const PerronVector pi = perron_left_vector(cfg.w);
  const ConsensusFractionReport report = consensus_fraction_report(ens, pi, cfg.x1);
  REQUIRE(report.consensus_0 + report.consensus_1 == 2000);
  REQUIRE(report.predicted == Catch::Approx(0.3).margin(1e-12));
  REQUIRE(report.fraction == Catch::Approx(0.3).margin(0.05));
  REQUIRE(report.agrees);
}

TEST_CASE("undecided runs poison the consensus fraction") {
  SimulationConfig cfg;
  cfg.w = validate_weight_matrix({{0.5, 0.5}, {0.5, 0.5}});
  cfg.alpha = 0.01;  // tiny steps: nowhere near a corner within the horizon
  cfg.x1 = {0.5, 0.5};
  cfg.t_max = 60;
  cfg.seed = 6;
  const Ensemble ens = monte_carlo(cfg, 4, 0.05, 50, {}, 1);
  const PerronVector pi = perron_left_vector(cfg.w);
  REQUIRE_THROWS_AS(consensus_fraction_report(ens, pi, cfg.x1), UndecidedRuns);
}

// ---- corner-mass product ----

TEST_CASE("corner-mass product hits the exact endpoints") {
  for (double alpha : {0.001, 0.3, 0.999}) {
    REQUIRE(g_function(alpha, 6, 0.0) == 1.0);
    REQUIRE(g_function(alpha, 6, 1.0) == 0.0);
    REQUIRE(g_function_log(alpha, 6, 0.0) == 0.0);
    REQUIRE(std::isinf(g_function_log(alpha, 6, 1.0)));
  }
}

TEST_CASE("corner-mass product matches a long truncated product") {
  for (double gamma : {0.1, 0.5, 0.9})
    for (double alpha : {0.2, 0.5, 0.8}) {
      const double brute = oracle::g_truncated(alpha, 6, gamma, 2000);
      REQUIRE(g_function(alpha, 6, gamma) == Catch::Approx(brute).margin(1e-10));
    }
}

TEST_CASE("corner-mass product falls strictly in gamma") {
  double prev = g_function_log(0.4, 6, 0.0);
  for (int k = 1; k <= 20; ++k) {
    const double cur = g_function_log(0.4, 6, k / 20.0);
    REQUIRE(cur < prev);
    prev = cur;
  }
}

// ---- time-varying mixing ----

TEST_CASE("constant mixing averages two agents to the midpoint") {
  const TimeVariantResult res =
      time_variant_two_agent(0.25, Schedule::constant, {1.0, 0.0}, 200);
  REQUIRE(res.states.front()[0] == 1.0);
  REQUIRE(res.states.back()[0] == Catch::Approx(0.5).margin(1e-12));
  REQUIRE(res.states.back()[1] == Catch::Approx(0.5).margin(1e-12));
  for (const auto& row : res.limit_matrix)
    REQUIRE(row[0] + row[1] == Catch::Approx(1.0).margin(1e-15));
  REQUIRE(res.limit_matrix[0][0] == Catch::Approx(0.5).margin(1e-12));
}

TEST_CASE("halving mixing preserves a positive terminal gap") {
  const TimeVariantResult res =
      time_variant_two_agent(0.25, Schedule::halving, {1.0, 0.0}, 60);
  const double gap = res.states.back()[0] - res.states.back()[1];
  REQUIRE(gap > 0.0);
  // the gap shrinks by (1 - 2 b_t) each step, so it equals the product
  double expected = 1.0;
  double b = 0.25;
  for (int t = 0; t < 60; ++t) {
    expected *= 1.0 - 2.0 * b;
    b *= 0.5;
  }
  REQUIRE(gap == Catch::Approx(expected).epsilon(1e-12));
}

// ---- reports ----

TEST_CASE("grid export starts at one and carries the grid in its header") {
  std::ostringstream os;
  write_g_grid_csv(os, {0.2, 0.8}, 6, {0.0, 0.5, 1.0});
  std::istringstream is(os.str());
  const CsvDocument doc = parse_csv(is, "grid");
  REQUIRE(doc.header == std::vector<std::string>{"gamma", "g1", "g2"});
  REQUIRE(doc.rows.size() == 3);
  REQUIRE(doc.rows[0][0] == "0");
  REQUIRE(doc.rows[0][1] == "1");
  REQUIRE(doc.rows[0][2] == "1");
  REQUIRE(doc.rows[2][1] == "0");
}

TEST_CASE("ensemble summary counts every run exactly once") {
  const SimulationConfig cfg = demo_config();
  const Ensemble ens = monte_carlo(cfg, 32, 0.05, 50, {}, 1);
  std::ostringstream os;
  write_ensemble_summary_csv(os, ens);
  std::istringstream is(os.str());
  const CsvDocument doc = parse_csv(is, "summary");
  REQUIRE(doc.header == std::vector<std::string>{"key", "value"});
  const auto value = [&](const std::string& key) -> std::string {
    for (const auto& row : doc.rows)
      if (row.size() == 2 && row[0] == key) return row[1];
    FAIL("missing key " + key);
    return "";
  };
  std::uint64_t total = 0;
  for (const char* key : {"consensus_0", "consensus_1", "non_consensus", "undecided"})
    total += std::stoull(value(key));
  REQUIRE(total == 32);
  REQUIRE(value("runs") == "32");
  REQUIRE(doc.find_meta("seed") != nullptr);
}
