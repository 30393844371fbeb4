#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "herdlab/analysis.hpp"
#include "herdlab/dynamics.hpp"
#include "herdlab/errors.hpp"
#include "herdlab/perron.hpp"
#include "herdlab/rng.hpp"
#include "herdlab/scc.hpp"
#include "herdlab/verify.hpp"

using namespace herdlab;

namespace {

SimulationConfig two_agent_config() {
  SimulationConfig cfg;
  cfg.w = validate_weight_matrix({{0.5, 0.5}, {0.5, 0.5}});
  cfg.alpha = 0.5;
  cfg.x1 = {0.25, 0.75};
  cfg.t_max = 100;
  cfg.seed = 9;
  return cfg;
}

Trajectory synthetic(std::vector<std::vector<double>> xs) {
  Trajectory traj;
  traj.stride = 1;
  long long t = 1;
  for (auto& x : xs) traj.states.push_back({t++, std::move(x)});
  return traj;
}

}  // namespace

// ---- random streams ----

TEST_CASE("generator replays exactly from the same seed") {
  Xoshiro256PlusPlus a(12345), b(12345);
  for (int k = 0; k < 64; ++k) REQUIRE(a.next() == b.next());
}

TEST_CASE("run streams with different indices diverge") {
  Xoshiro256PlusPlus r0 = run_stream(7, 0), r1 = run_stream(7, 1);
  bool differs = false;
  for (int k = 0; k < 8; ++k) differs = differs || (r0.next() != r1.next());
  REQUIRE(differs);
}

TEST_CASE("uniform draws stay in the half-open unit interval") {
  Xoshiro256PlusPlus rng(1);
  double mean = 0.0;
  const int n = 20000;
  for (int k = 0; k < n; ++k) {
    const double u = uniform01(rng);
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    mean += u;
  }
  REQUIRE(mean / n == Catch::Approx(0.5).margin(0.02));
}

TEST_CASE("coin flips are exact at the endpoints") {
  Xoshiro256PlusPlus rng(2);
  for (int k = 0; k < 100; ++k) {
    REQUIRE(bernoulli(rng, 0.0) == 0);
    REQUIRE(bernoulli(rng, 1.0) == 1);
  }
}

// ---- one-step update ----

TEST_CASE("one step matches the hand-computed affine update") {
  const SimulationConfig cfg = two_agent_config();
  OpinionState s;
  s.t = 1;
  s.x = {0.25, 0.75};
  ActionVector a;
  a.t = 1;
  a.a = {1, 0};
  const OpinionState next = step(s, a, cfg.w, cfg.alpha);
  // Wa = (0.5, 0.5); x' = x + 0.5 (Wa - x), all dyadic so exact.
  REQUIRE(next.t == 2);
  REQUIRE(next.x[0] == 0.375);
  REQUIRE(next.x[1] == 0.625);
}

TEST_CASE("both unanimous corners are exact fixed points") {
  const WeightMatrix w = demo_network();
  for (double corner : {0.0, 1.0}) {
    SimulationConfig cfg;
    cfg.w = w;
    cfg.alpha = 0.3;
    cfg.x1.assign(7, corner);
    cfg.t_max = 50;
    cfg.seed = 11;
    const Trajectory traj = simulate(cfg);
    for (const auto& state : traj.states)
      for (double v : state.x) REQUIRE(v == corner);
  }
}

TEST_CASE("a pinned agent never moves and still drives the rest") {
  SimulationConfig cfg;
  cfg.w = validate_weight_matrix({{0.5, 0.5}, {0.5, 0.5}});
  cfg.alpha = 0.4;
  cfg.x1 = {1.0, 0.2};
  cfg.t_max = 2000;
  cfg.seed = 3;
  cfg.stubborn = {0};
  const Trajectory traj = simulate(cfg);
  for (const auto& state : traj.states) REQUIRE(state.x[0] == 1.0);
  REQUIRE(traj.states.back().x[1] > 0.99);  // dragged toward the pinned value
}

TEST_CASE("configuration validation rejects inconsistent input") {
  SimulationConfig cfg = two_agent_config();
  cfg.x1 = {0.5};
  REQUIRE_THROWS_AS(validate_config(cfg), DimensionMismatch);
  cfg = two_agent_config();
  cfg.alpha = 1.5;
  REQUIRE_THROWS_AS(validate_config(cfg), InvalidArgument);
  cfg = two_agent_config();
  cfg.x1 = {0.25, 2.0};
  REQUIRE_THROWS_AS(validate_config(cfg), InvalidArgument);
  cfg = two_agent_config();
  cfg.stubborn = {1};  // interior value without a unit self-loop
  REQUIRE_THROWS_AS(validate_config(cfg), InvalidArgument);
}

// ---- trajectories ----

TEST_CASE("simulate stores the full history for short runs") {
  const SimulationConfig cfg = two_agent_config();
  const Trajectory traj = simulate(cfg);
  REQUIRE(traj.stride == 1);
  REQUIRE(traj.states.size() == 100);
  REQUIRE(traj.states.front().t == 1);
  REQUIRE(traj.states.back().t == 100);
  REQUIRE(traj.actions.empty());
}

TEST_CASE("recorded actions replay the trajectory") {
  SimulationConfig cfg = two_agent_config();
  cfg.record_actions = true;
  const Trajectory traj = simulate(cfg);
  REQUIRE(traj.actions.size() == 99);
  REQUIRE(trajectory_satisfies_update(traj, cfg.w, cfg.alpha));

  Trajectory broken = traj;
  broken.states[50].x[0] += 1e-9;
  REQUIRE_FALSE(trajectory_satisfies_update(broken, cfg.w, cfg.alpha));
}

TEST_CASE("long runs decimate storage and refuse action recording") {
  SimulationConfig cfg = two_agent_config();
  cfg.t_max = kFullHistoryStates + 1;
  const Trajectory traj = simulate(cfg);
  REQUIRE(traj.stride > 1);
  REQUIRE(traj.states.back().t == cfg.t_max);
  REQUIRE(traj.states.size() <= kFullHistoryStates);

  cfg.record_actions = true;
  REQUIRE_THROWS_AS(simulate(cfg), InvalidArgument);
}

TEST_CASE("same seed reproduces the trajectory bit for bit") {
  const SimulationConfig cfg = two_agent_config();
  const Trajectory a = simulate(cfg), b = simulate(cfg);
  REQUIRE(a.states.size() == b.states.size());
  for (std::size_t k = 0; k < a.states.size(); ++k) REQUIRE(a.states[k].x == b.states[k].x);
  SimulationConfig other = cfg;
  other.seed = cfg.seed + 1;
  const Trajectory c = simulate(other);
  bool differs = false;
  for (std::size_t k = 0; k < a.states.size(); ++k)
    differs = differs || (a.states[k].x != c.states[k].x);
  REQUIRE(differs);
}

TEST_CASE("config digest tracks every field that changes the run") {
  const SimulationConfig cfg = two_agent_config();
  REQUIRE(config_digest(cfg) == config_digest(cfg));
  SimulationConfig other = cfg;
  other.alpha = 0.25;
  REQUIRE(config_digest(other) != config_digest(cfg));
  other = cfg;
  other.seed += 1;
  REQUIRE(config_digest(other) != config_digest(cfg));
}

// ---- verdicts ----

TEST_CASE("corner events label strict bands only") {
  OpinionState s;
  s.t = 5;
  s.x = {0.04, 0.97};
  const auto label = corner_event(s, 0.05);
  REQUIRE(label.has_value());
  REQUIRE(label->m == std::vector<std::uint8_t>{0, 1});
  REQUIRE_FALSE(label->all_zero());
  REQUIRE_FALSE(label->all_one());

  s.x = {0.05, 0.97};  // boundary is outside the open band
  REQUIRE_FALSE(corner_event(s, 0.05).has_value());
  REQUIRE_THROWS_AS(corner_event(s, 0.5), InvalidDelta);
}

TEST_CASE("constant corner trajectories are consensus with first hit at the start") {
  const SccPoset scc = strongly_connected_components(validate_weight_matrix({{0.5, 0.5}, {0.5, 0.5}}));
  AnalysisConfig cfg;
  cfg.delta = 0.05;
  cfg.window = 10;
  const Trajectory ones = synthetic(std::vector<std::vector<double>>(30, {1.0, 1.0}));
  const ConvergenceVerdict v1 = detect_consensus(ones, scc, cfg);
  REQUIRE(v1.kind == VerdictKind::consensus_1);
  REQUIRE(v1.first_hit.has_value());
  REQUIRE(*v1.first_hit == 1);

  const Trajectory zeros = synthetic(std::vector<std::vector<double>>(30, {0.0, 0.0}));
  REQUIRE(detect_consensus(zeros, scc, cfg).kind == VerdictKind::consensus_0);
}

TEST_CASE("full-range alternation is an oscillating non-consensus") {
  const SccPoset scc = strongly_connected_components(validate_weight_matrix({{0.5, 0.5}, {0.5, 0.5}}));
  AnalysisConfig cfg;
  cfg.delta = 0.05;
  cfg.window = 10;
  std::vector<std::vector<double>> xs;
  for (int t = 0; t < 40; ++t) xs.push_back({t % 2 ? 1.0 : 0.0, t % 2 ? 1.0 : 0.0});
  const ConvergenceVerdict v = detect_consensus(synthetic(std::move(xs)), scc, cfg);
  REQUIRE(v.kind == VerdictKind::non_consensus);
  REQUIRE(v.per_component[0] == ComponentStatus::oscillating);
}

TEST_CASE("mid-range drift stays undecided") {
  const SccPoset scc = strongly_connected_components(validate_weight_matrix({{0.5, 0.5}, {0.5, 0.5}}));
  AnalysisConfig cfg;
  cfg.delta = 0.05;
  cfg.window = 10;
  std::vector<std::vector<double>> xs;
  for (int t = 0; t < 40; ++t) xs.push_back({0.4 + 0.004 * t, 0.5});
  const ConvergenceVerdict v = detect_consensus(synthetic(std::move(xs)), scc, cfg);
  REQUIRE(v.kind == VerdictKind::undecided);
  REQUIRE_FALSE(v.first_hit.has_value());
}

TEST_CASE("escape bound is the smaller of the pull-in and jump terms") {
  REQUIRE(max_escape_delta(0.5, 0.5) == 0.25);
  // alpha = 0.9: (1 - alpha) / (2 - alpha) = 0.1 / 1.1 < alpha * w.
  REQUIRE(max_escape_delta(0.9, 0.9) == Catch::Approx(0.1 / 1.1).epsilon(1e-15));
  REQUIRE_THROWS_AS(max_escape_delta(0.0, 0.5), InvalidArgument);
}

// ---- martingale checks ----

TEST_CASE("weighted average increments follow the recorded actions") {
  SimulationConfig cfg;
  cfg.w = verify_detail::dyadic_circulant(4);
  cfg.alpha = 0.375;
  cfg.x1 = {0.1, 0.6, 0.3, 0.9};
  cfg.t_max = 200;
  cfg.seed = 21;
  cfg.record_actions = true;
  const Trajectory traj = simulate(cfg);

  PerronVector pi;  // exact uniform vector: every entry the same double
  pi.values.assign(4, 0.25);
  const MartingaleSeries series = martingale_series(traj, pi);
  REQUIRE(series.q.size() == traj.states.size());
  REQUIRE(series.dq.size() == traj.states.size() - 1);
  for (std::size_t t = 0; t + 1 < traj.states.size(); ++t) {
    double drive = 0.0;
    for (int i = 0; i < 4; ++i)
      drive += pi.values[i] * (traj.actions[t].a[i] - traj.states[t].x[i]);
    REQUIRE(std::abs(series.dq[t] - cfg.alpha * drive) <= 1e-14);
  }
}

TEST_CASE("martingale series rejects mismatched weights") {
  SimulationConfig cfg = two_agent_config();
  cfg.record_actions = true;
  const Trajectory traj = simulate(cfg);
  PerronVector pi;
  pi.values.assign(3, 1.0 / 3.0);
  REQUIRE_THROWS_AS(martingale_series(traj, pi), DimensionMismatch);
}
