#pragma once
// Verification suite. Every check pits a library result against an
// independently coded oracle, a closed-form value, or a statistical bound
// with the tolerance pinned right here. A check passes by returning a short
// summary string and fails by throwing; the runner turns either into a
// CheckResult row.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "herdlab/analysis.hpp"
#include "herdlab/csv.hpp"
#include "herdlab/dynamics.hpp"
#include "herdlab/ensemble.hpp"
#include "herdlab/errors.hpp"
#include "herdlab/g_function.hpp"
#include "herdlab/perron.hpp"
#include "herdlab/report.hpp"
#include "herdlab/rng.hpp"
#include "herdlab/scc.hpp"
#include "herdlab/scenario.hpp"
#include "herdlab/time_variant.hpp"
#include "herdlab/weight_matrix.hpp"

namespace herdlab {

struct CheckResult {
  std::string name;
  bool passed = false;
  double seconds = 0.0;
  std::string details;
};

// Frozen master seeds for the statistical checks. Chosen once and kept fixed
// so every run of the suite sees the same draws; each appears in the metadata
// of any file the corresponding scenario emits.
inline constexpr std::uint64_t kSeedGraphs = 101;
inline constexpr std::uint64_t kSeedMatrices = 102;
inline constexpr std::uint64_t kSeedMartingale = 103;
inline constexpr std::uint64_t kSeedOneStepMean = 104;
inline constexpr std::uint64_t kSeedConsensusFraction = 105;
inline constexpr std::uint64_t kSeedCornerAbsorption = 106;
inline constexpr std::uint64_t kSeedResidualMoments = 107;
inline constexpr std::uint64_t kSeedDichotomy = 108;
inline constexpr std::uint64_t kSeedStubborn = 109;
inline constexpr std::uint64_t kSeedDeterminism = 110;
inline constexpr std::uint64_t kSeedInvariants = 111;

// The bundled seven-agent demo network: two autonomous camps ({v1} and
// {v4,v5}) feeding a middle pair and a bottom pair, equal incoming weights.
// Components (ascending members): {0} {1,2} {3,4} {5,6}.
inline WeightMatrix demo_network() {
  return validate_weight_matrix({
      {1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0},
      {0.5, 0.0, 0.5, 0.0, 0.0, 0.0, 0.0},
      {0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0},
      {0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0},
      {0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0},
      {0.0, 0.0, 0.5, 0.0, 0.0, 0.0, 0.5},
      {0.0, 0.0, 0.0, 0.5, 0.0, 0.5, 0.0},
  });
}

namespace verify_detail {

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw Error(msg);
}

inline std::string fmt(double v) { return format_g17(v); }

// Random row-stochastic matrix; when `irreducible`, a cyclic backbone keeps
// the network strongly connected.
inline WeightMatrix random_stochastic(Xoshiro256PlusPlus& rng, int n, bool irreducible) {
  std::vector<std::vector<double>> rows(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i) {
    if (irreducible) rows[i][(i + 1) % n] = 0.5 + uniform01(rng);
    for (int j = 0; j < n; ++j)
      if (uniform01(rng) < 0.4) rows[i][j] += 0.1 + uniform01(rng);
    double sum = 0.0;
    for (double v : rows[i]) sum += v;
    if (sum == 0.0) {
      rows[i][static_cast<int>(uniform01(rng) * n) % n] = 1.0;
      sum = 1.0;
    }
    for (double& v : rows[i]) v /= sum;
  }
  return validate_weight_matrix(rows);
}

// Random digraph with equal weights on a random support (every row nonempty).
inline WeightMatrix random_digraph(Xoshiro256PlusPlus& rng, int n) {
  std::vector<std::vector<double>> rows(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i) {
    int count = 0;
    for (int j = 0; j < n; ++j)
      if (uniform01(rng) < 0.45) {
        rows[i][j] = 1.0;
        ++count;
      }
    if (count == 0) {
      rows[i][static_cast<int>(uniform01(rng) * n) % n] = 1.0;
      count = 1;
    }
    for (double& v : rows[i])
      if (v > 0.0) v = 1.0 / count;
  }
  return validate_weight_matrix(rows);
}

// Dyadic doubly stochastic circulants: columns sum to one exactly in floating
// point, so the uniform vector is an exact left fixed point.
inline WeightMatrix dyadic_circulant(int n) {
  std::vector<double> first(n, 0.0);
  switch (n) {
    case 2: first = {0.5, 0.5}; break;
    case 3: first = {0.5, 0.25, 0.25}; break;
    case 4: first = {0.5, 0.25, 0.0, 0.25}; break;
    case 8: first = {0.5, 0.25, 0.125, 0.0625, 0.0625, 0.0, 0.0, 0.0}; break;
    default: throw InvalidArgument("dyadic_circulant: unsupported size");
  }
  std::vector<std::vector<double>> rows(n, std::vector<double>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) rows[i][j] = first[(j - i + n) % n];
  return validate_weight_matrix(rows);
}

}  // namespace verify_detail

// ---- oracles ----
// Deliberately naive re-derivations; none shares code with the library path
// it cross-examines.

namespace oracle {

// Boolean reachability of the influence digraph (edge u -> v when v listens
// to u), empty path included.
inline std::vector<std::vector<char>> reachability(const WeightMatrix& w) {
  const int n = w.size();
  std::vector<std::vector<char>> reach(n, std::vector<char>(n, 0));
  for (int i = 0; i < n; ++i) reach[i][i] = 1;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (w(i, j) > 0.0) reach[j][i] = 1;
  for (int k = 0; k < n; ++k)
    for (int u = 0; u < n; ++u)
      if (reach[u][k])
        for (int v = 0; v < n; ++v)
          if (reach[k][v]) reach[u][v] = 1;
  return reach;
}

// Mutual-reachability classes, members ascending, ordered by smallest member.
inline std::vector<std::vector<int>> scc_classes(const WeightMatrix& w) {
  const auto reach = reachability(w);
  const int n = w.size();
  std::vector<bool> assigned(n, false);
  std::vector<std::vector<int>> classes;
  for (int i = 0; i < n; ++i) {
    if (assigned[i]) continue;
    std::vector<int> cls;
    for (int j = i; j < n; ++j)
      if (reach[i][j] && reach[j][i]) {
        cls.push_back(j);
        assigned[j] = true;
      }
    classes.push_back(std::move(cls));
  }
  return classes;
}

// Left Perron vector by repeated squaring of the half-lazy chain (W + I)/2,
// which is primitive for irreducible W and shares the fixed point. The rows
// of the squared power all converge to pi.
inline std::vector<double> perron_by_squaring(const WeightMatrix& w, int squarings = 60) {
  const int n = w.size();
  std::vector<std::vector<double>> m(n, std::vector<double>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m[i][j] = 0.5 * (w(i, j) + (i == j ? 1.0 : 0.0));
  std::vector<std::vector<double>> next(n, std::vector<double>(n));
  for (int round = 0; round < squarings; ++round) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double acc = 0.0;
        for (int k = 0; k < n; ++k) acc += m[i][k] * m[k][j];
        next[i][j] = acc;
      }
    for (int i = 0; i < n; ++i) {
      double sum = 0.0;
      for (double v : next[i]) sum += v;
      for (double& v : next[i]) v /= sum;  // keep rows stochastic against drift
    }
    m.swap(next);
  }
  std::vector<double> pi(n, 0.0);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) pi[j] += m[i][j];
  double sum = 0.0;
  for (double v : pi) sum += v;
  for (double& v : pi) v /= sum;
  return pi;
}

// Plain truncated product for g, factors s = 0..terms, no logarithms.
inline double g_truncated(double alpha, int n, double gamma, int terms) {
  const double r = 1.0 - alpha;
  double prod = 1.0;
  double pw = 1.0;
  for (int s = 0; s <= terms; ++s) {
    const double factor = 1.0 - pw * gamma;
    for (int k = 0; k < n; ++k) prod *= factor;
    pw *= r;
  }
  return prod;
}

// Accumulates the explicit product of per-step two-agent mixing matrices and
// applies it to x0.
inline std::array<double, 2> time_variant_direct(double beta, Schedule schedule,
                                                 std::array<double, 2> x0, long long t_steps) {
  double p00 = 1.0, p01 = 0.0, p10 = 0.0, p11 = 1.0;
  double b = beta;
  for (long long t = 0; t < t_steps; ++t) {
    const double d0 = 1.0 - b, d1 = b;
    const double q00 = d0 * p00 + d1 * p10, q01 = d0 * p01 + d1 * p11;
    const double q10 = d1 * p00 + d0 * p10, q11 = d1 * p01 + d0 * p11;
    p00 = q00;
    p01 = q01;
    p10 = q10;
    p11 = q11;
    if (schedule == Schedule::halving) b *= 0.5;
  }
  return {p00 * x0[0] + p01 * x0[1], p10 * x0[0] + p11 * x0[1]};
}

}  // namespace oracle

// ---- acceptance checks ----

// Golden poset on the demo network: components, covers, maximal, minimal.
inline std::string check_scc_poset_golden() {
  using verify_detail::require;
  const SccPoset poset = strongly_connected_components(demo_network());
  const std::vector<std::vector<int>> want_components = {{0}, {1, 2}, {3, 4}, {5, 6}};
  const std::vector<std::pair<int, int>> want_covers = {{1, 0}, {3, 1}, {3, 2}};
  require(poset.components == want_components, "components do not match the known partition");
  require(poset.covers == want_covers, "cover pairs do not match the known Hasse diagram");
  require(poset.maximal == std::vector<int>{0, 2}, "maximal components should be C1 and C3");
  require(poset.minimal == std::vector<int>{3}, "minimal component should be C4");
  require(poset.order[3][0] && poset.order[3][2] && poset.order[1][0],
          "expected order relations missing");
  require(!poset.order[0][3] && !poset.order[1][2] && !poset.order[2][1],
          "unexpected order relations present");
  return "4 components, 3 covers, maximal {C1,C3}, minimal {C4}";
}

// Components, order, extrema and covers against the transitive-closure oracle
// on 1000 random digraphs.
inline std::string check_scc_oracle_equivalence() {
  using verify_detail::require;
  auto rng = run_stream(kSeedGraphs, 0);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 1 + trial % 5;
    const WeightMatrix w = verify_detail::random_digraph(rng, n);
    const SccPoset poset = strongly_connected_components(w);
    require(poset.components == oracle::scc_classes(w),
            "component partition disagrees with the transitive-closure oracle");

    const auto reach = oracle::reachability(w);
    const int m = poset.count();
    for (int r = 0; r < m; ++r)
      for (int s = 0; s < m; ++s) {
        const bool want = reach[poset.components[s][0]][poset.components[r][0]] != 0;
        require(poset.order[r][s] == want, "order relation disagrees with reachability");
      }
    std::vector<std::pair<int, int>> covers;
    for (int r = 0; r < m; ++r)
      for (int s = 0; s < m; ++s) {
        if (r == s || !poset.order[r][s]) continue;
        bool between = false;
        for (int t = 0; t < m && !between; ++t)
          between = t != r && t != s && poset.order[r][t] && poset.order[t][s];
        if (!between) covers.emplace_back(r, s);
      }
    require(poset.covers == covers, "cover pairs disagree with the order relation");
    for (int r = 0; r < m; ++r) {
      bool is_max = true, is_min = true;
      for (int s = 0; s < m; ++s) {
        if (s == r) continue;
        if (poset.order[r][s]) is_max = false;
        if (poset.order[s][r]) is_min = false;
      }
      const bool in_max = std::find(poset.maximal.begin(), poset.maximal.end(), r) !=
                          poset.maximal.end();
      const bool in_min = std::find(poset.minimal.begin(), poset.minimal.end(), r) !=
                          poset.minimal.end();
      require(in_max == is_max && in_min == is_min, "extremal elements disagree with the order");
    }
  }
  return "1000 random digraphs (n <= 5) agree with the closure oracle";
}

// pi > 0, sums to one, residual below 1e-10, and agreement with a repeated-
// squaring oracle on 100 random irreducible matrices.
inline std::string check_perron_residual() {
  using verify_detail::require;
  auto rng = run_stream(kSeedMatrices, 0);
  double worst_residual = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + trial % 7;
    const WeightMatrix w = verify_detail::random_stochastic(rng, n, true);
    const PerronVector pi = perron_left_vector(w);
    double sum = 0.0;
    for (double v : pi.values) {
      require(v > 0.0, "pi must be strictly positive");
      sum += v;
    }
    require(std::fabs(sum - 1.0) <= 1e-12, "pi must sum to one");
    double residual = 0.0;
    for (int j = 0; j < n; ++j) {
      double acc = 0.0;
      for (int i = 0; i < n; ++i) acc += pi.values[i] * w(i, j);
      residual = std::max(residual, std::fabs(acc - pi.values[j]));
    }
    require(residual <= 1e-10, "residual ||pi^T W - pi^T|| above 1e-10");
    worst_residual = std::max(worst_residual, residual);
    const auto squared = oracle::perron_by_squaring(w);
    for (int j = 0; j < n; ++j)
      require(std::fabs(squared[j] - pi.values[j]) <= 1e-8,
              "pi disagrees with the repeated-squaring oracle");
  }
  return "100 matrices, worst residual " + verify_detail::fmt(worst_residual);
}

// dq_t = alpha pi^T (a_t - x_t) to 1e-14 on 100 recorded trajectories over
// column-exact matrices, plus a 10^5-draw one-step mean test.
inline std::string check_martingale_identity() {
  using verify_detail::require;
  const int sizes[4] = {2, 3, 4, 8};
  const double alphas[5] = {0.5, 0.25, 0.375, 0.7, 0.111};
  auto rng = run_stream(kSeedMartingale, 0);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = sizes[trial % 4];
    SimulationConfig cfg;
    cfg.w = verify_detail::dyadic_circulant(n);
    cfg.alpha = alphas[trial % 5];
    cfg.x1.resize(n);
    for (double& v : cfg.x1) v = uniform01(rng);
    cfg.t_max = 120;
    cfg.seed = kSeedMartingale + 17 * trial + 1;
    cfg.record_actions = true;
    const Trajectory traj = simulate(cfg);

    const PerronVector solved = perron_left_vector(cfg.w);
    PerronVector pi;  // exact uniform: the circulant columns sum to one exactly
    pi.values.assign(n, 1.0 / n);
    for (int i = 0; i < n; ++i)
      require(std::fabs(solved.values[i] - pi.values[i]) <= 1e-9,
              "solved pi should be uniform for a doubly stochastic matrix");

    const MartingaleSeries series = martingale_series(traj, pi);
    for (std::size_t k = 0; k < traj.actions.size(); ++k) {
      double rhs = 0.0;
      for (int i = 0; i < n; ++i)
        rhs += pi.values[i] * (static_cast<double>(traj.actions[k].a[i]) - traj.states[k].x[i]);
      rhs *= cfg.alpha;
      const double err = std::fabs(series.dq[k] - rhs);
      worst = std::max(worst, err);
      require(err <= 1e-14, "martingale increment identity off by " + verify_detail::fmt(err));
    }
  }

  // one-step drift from a fixed interior state
  const WeightMatrix w3 = verify_detail::dyadic_circulant(3);
  const PerronVector pi3 = perron_left_vector(w3);
  const std::vector<double> x = {0.3, 0.55, 0.7};
  const double alpha = 0.4;
  auto draw = run_stream(kSeedOneStepMean, 0);
  const long long m = 100000;
  double sum = 0.0, sum_sq = 0.0;
  for (long long k = 0; k < m; ++k) {
    double dq = 0.0;
    for (int i = 0; i < 3; ++i) {
      const double a = bernoulli(draw, x[i]) ? 1.0 : 0.0;
      dq += pi3.values[i] * (a - x[i]);
    }
    dq *= alpha;
    sum += dq;
    sum_sq += dq * dq;
  }
  const double mean = sum / static_cast<double>(m);
  const double var = (sum_sq - sum * sum / static_cast<double>(m)) / static_cast<double>(m - 1);
  const double se = std::sqrt(var / static_cast<double>(m));
  require(se > 0.0, "one-step increment must have positive variance");
  require(std::fabs(mean) <= 4.0 * se,
          "one-step mean " + verify_detail::fmt(mean) + " outside 4 standard errors " +
              verify_detail::fmt(se));
  return "worst identity error " + verify_detail::fmt(worst) + ", one-step mean " +
         verify_detail::fmt(mean) + " (se " + verify_detail::fmt(se) + ")";
}

// Two symmetric agents from (0.3, 0.3): every run decides and the fraction
// reaching consensus 1 brackets the conserved mean 0.3 at 99%.
inline std::string check_consensus_fraction() {
  using verify_detail::require;
  SimulationConfig cfg;
  cfg.w = validate_weight_matrix({{0.5, 0.5}, {0.5, 0.5}});
  cfg.alpha = 0.5;
  cfg.x1 = {0.3, 0.3};
  cfg.t_max = 3000;
  cfg.seed = kSeedConsensusFraction;
  const Ensemble ens = monte_carlo(cfg, 10000, 0.01, 50);
  const PerronVector pi = perron_left_vector(cfg.w);
  const ConsensusFractionReport report = consensus_fraction_report(ens, pi, cfg.x1);
  require(report.non_consensus == 0, "two symmetric agents must reach consensus");
  require(std::fabs(report.predicted - 0.3) <= 1e-15, "conserved mean should be 0.3");
  require(report.agrees, "prediction 0.3 outside the 99% interval [" +
                             verify_detail::fmt(report.ci_low) + ", " +
                             verify_detail::fmt(report.ci_high) + "]");
  return "fraction " + verify_detail::fmt(report.fraction) + " in [" +
         verify_detail::fmt(report.ci_low) + ", " + verify_detail::fmt(report.ci_high) + "]";
}

// Irreducible three agents: by t = 2000 nearly all probability mass sits in
// the two consensus corners and almost none in mixed corners.
inline std::string check_corner_absorption() {
  using verify_detail::require;
  SimulationConfig cfg;
  cfg.w = verify_detail::dyadic_circulant(3);
  cfg.alpha = 0.3;
  cfg.x1 = {0.5, 0.5, 0.5};
  cfg.t_max = 2000;
  cfg.seed = kSeedCornerAbsorption;
  const Ensemble ens = monte_carlo(cfg, 10000, 0.05, 50);
  const CornerProbability p = empirical_corner_probability(ens, 2000, 0.05);
  require(p.p_zero + p.p_one > 0.99, "pure-corner mass " + verify_detail::fmt(p.p_zero + p.p_one) +
                                         " not above 0.99");
  require(p.p_mixed < 0.01, "mixed-corner mass " + verify_detail::fmt(p.p_mixed) +
                                " not below 0.01");
  return "p0+p1 = " + verify_detail::fmt(p.p_zero + p.p_one) +
         ", mixed = " + verify_detail::fmt(p.p_mixed);
}

// E{y^2} for y = a - x falls strictly across t in {1,50,200,800}, ends below
// 0.01, and distinct agents' residuals are uncorrelated at t = 1.
inline std::string check_residual_moment_decay() {
  using verify_detail::require;
  SimulationConfig cfg;
  cfg.w = verify_detail::dyadic_circulant(3);
  cfg.alpha = 0.3;
  cfg.x1 = {0.5, 0.5, 0.5};
  cfg.t_max = 801;  // actions are drawn before t_max, so probe 800 keeps its a_t
  cfg.seed = kSeedResidualMoments;
  MonteCarloProbes probes;
  probes.times = {1, 50, 200, 800};
  probes.record_actions = true;
  const Ensemble ens = monte_carlo(cfg, 10000, 0.05, 50, probes);
  const ResidualMoments mom = residual_moments(ens, probes.times);

  std::vector<double> mean_m2;
  for (const auto& per_agent : mom.second_moment) {
    double acc = 0.0;
    for (double v : per_agent) acc += v;
    mean_m2.push_back(acc / static_cast<double>(per_agent.size()));
  }
  for (std::size_t k = 1; k < mean_m2.size(); ++k)
    require(mean_m2[k] < mean_m2[k - 1], "E{y^2} must fall strictly across the probe times");
  for (double v : mom.second_moment.back())
    require(v < 0.01, "E{y^2} at t = 800 should be below 0.01, got " + verify_detail::fmt(v));
  double worst_corr = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j)
      worst_corr = std::max(worst_corr, std::fabs(mom.correlation[0][i][j]));
  require(worst_corr < 0.03, "cross-agent residual correlation at t = 1 reached " +
                                 verify_detail::fmt(worst_corr));
  return "E{y^2}: " + verify_detail::fmt(mean_m2[0]) + " -> " + verify_detail::fmt(mean_m2[3]) +
         ", worst |corr| " + verify_detail::fmt(worst_corr);
}

// Exact endpoints, strict monotonicity (checked in log space, which stays
// representable even where g itself underflows), and agreement with the
// truncated-product oracle for the larger alphas.
inline std::string check_g_function_grid() {
  using verify_detail::require;
  const std::vector<double> alphas = linspace(0.001, 0.999, 12);
  const std::vector<double> gammas = linspace(0.0, 1.0, 101);
  double worst_gap = 0.0;
  for (double alpha : alphas) {
    require(g_function(alpha, 6, 0.0) == 1.0, "g(alpha, 6, 0) must equal 1 exactly");
    require(g_function(alpha, 6, 1.0) == 0.0, "g(alpha, 6, 1) must equal 0 exactly");
    double prev_log = 1.0;  // above any possible log g
    double prev_val = 2.0;
    for (double gamma : gammas) {
      const double log_g = g_function_log(alpha, 6, gamma);
      const double val = g_function(alpha, 6, gamma);
      require(log_g < prev_log || prev_log == 1.0, "log g must decrease strictly in gamma");
      require(val <= prev_val, "g must be nonincreasing in gamma");
      prev_log = log_g;
      prev_val = val;
      if (alpha >= 0.1) {
        const double brute = oracle::g_truncated(alpha, 6, gamma, 200);
        const double gap = std::fabs(val - brute);
        worst_gap = std::max(worst_gap, gap);
        require(gap <= 1e-10, "g differs from the 200-term product by " +
                                  verify_detail::fmt(gap));
      }
    }
  }
  return "12 alphas x 101 gammas, worst oracle gap " + verify_detail::fmt(worst_gap);
}

// On the demo network every decided run obeys the dichotomy: agreeing
// autonomous camps drag the whole network to their corner; disagreeing camps
// doom the bottom pair to oscillate.
inline std::string check_component_dichotomy() {
  using verify_detail::require;
  SimulationConfig cfg;
  cfg.w = demo_network();
  cfg.alpha = 0.1;
  cfg.x1.assign(7, 0.5);
  cfg.t_max = 5000;
  cfg.seed = kSeedDichotomy;
  const Ensemble ens = monte_carlo(cfg, 2000, 0.05, 50);
  // canonical component order: C1 = {0}, C2 = {1,2}, C3 = {3,4}, C4 = {5,6}
  std::uint64_t undecided = 0, same_corner = 0, split_corner = 0;
  const auto settled = [](ComponentStatus s) {
    return s == ComponentStatus::to_0 || s == ComponentStatus::to_1;
  };
  for (const auto& run : ens.runs) {
    if (run.verdict.kind == VerdictKind::undecided) {
      ++undecided;
      continue;
    }
    const auto& st = run.verdict.per_component;
    if (!settled(st[0]) || !settled(st[2])) continue;  // outside both branches
    if (st[0] == st[2]) {
      ++same_corner;
      const VerdictKind want = st[0] == ComponentStatus::to_1 ? VerdictKind::consensus_1
                                                              : VerdictKind::consensus_0;
      require(run.verdict.kind == want, "agreeing camps must yield their consensus verdict");
      require(st[3] == st[0], "the bottom pair must follow the agreeing camps");
    } else {
      ++split_corner;
      require(run.verdict.kind == VerdictKind::non_consensus,
              "disagreeing camps must yield non_consensus");
      require(st[3] == ComponentStatus::oscillating,
              "the bottom pair must oscillate between disagreeing camps");
    }
  }
  require(same_corner > 0 && split_corner > 0, "both dichotomy branches must occur");
  require(undecided * 100 < ens.run_count, "more than 1% undecided runs");
  return std::to_string(same_corner) + " agreeing, " + std::to_string(split_corner) +
         " split, " + std::to_string(undecided) + " undecided";
}

// A pinned agent in an otherwise strongly connected ring drags all 1000 runs
// to consensus on its value.
inline std::string check_stubborn_consensus() {
  using verify_detail::require;
  const int n = 7;
  std::vector<std::vector<double>> rows(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i) {
    rows[i][(i + n - 1) % n] = 0.5;
    rows[i][(i + 1) % n] = 0.5;
  }
  SimulationConfig cfg;
  cfg.w = validate_weight_matrix(rows);
  cfg.alpha = 0.3;
  cfg.x1.assign(n, 0.5);
  cfg.x1[0] = 1.0;
  cfg.stubborn = {0};
  cfg.t_max = 3000;
  cfg.seed = kSeedStubborn;
  const Ensemble ens = monte_carlo(cfg, 1000, 0.05, 50);
  std::uint64_t hits = 0;
  for (const auto& run : ens.runs)
    if (run.verdict.kind == VerdictKind::consensus_1) ++hits;
  require(hits == ens.run_count, std::to_string(hits) + " of " + std::to_string(ens.run_count) +
                                     " runs reached consensus 1");
  return "1000 of 1000 runs consensus_1";
}

// Constant mixing averages the two agents exactly; halving mixing freezes a
// positive gap that matches both the direct product oracle and g.
inline std::string check_time_variant_limit() {
  using verify_detail::require;
  const TimeVariantResult constant = time_variant_two_agent(0.25, Schedule::constant, {1.0, 0.0}, 200);
  for (const auto& row : constant.limit_matrix)
    for (double entry : row)
      require(std::fabs(entry - 0.5) <= 1e-12, "constant-schedule limit must average the agents");
  for (double v : constant.states.back())
    require(std::fabs(v - 0.5) <= 1e-12, "constant-schedule states must reach the average");

  const TimeVariantResult halving = time_variant_two_agent(0.25, Schedule::halving, {1.0, 0.0}, 100);
  const auto direct = oracle::time_variant_direct(0.25, Schedule::halving, {1.0, 0.0}, 100);
  const double gap = std::fabs(halving.states.back()[0] - halving.states.back()[1]);
  const double gap_direct = std::fabs(direct[0] - direct[1]);
  require(std::fabs(gap - gap_direct) <= 1e-10, "halving gap differs from the product oracle");
  require(gap > 0.0, "halving schedule must not reach consensus");
  const double g = g_function(0.5, 1, 0.5);
  require(std::fabs(gap - g) <= 1e-10, "halving gap " + verify_detail::fmt(gap) +
                                           " should equal g(1/2, 1, 1/2) = " +
                                           verify_detail::fmt(g));
  for (int i = 0; i < 2; ++i) {
    const double predicted = halving.limit_matrix[i][0] * 1.0 + halving.limit_matrix[i][1] * 0.0;
    require(std::fabs(predicted - halving.states.back()[i]) <= 1e-10,
            "halving limit matrix disagrees with the states");
  }
  return "halving gap " + verify_detail::fmt(gap);
}

// The alternating corner sequence is non_consensus/oscillating; constant
// corner sequences are consensus verdicts with first_hit at the start.
inline std::string check_oscillation_classifier() {
  using verify_detail::require;
  const AnalysisConfig acfg{0.05, 50, 60};
  const auto make_traj = [](int n, long long t_max, const std::function<double(long long)>& value) {
    Trajectory traj;
    traj.stride = 1;
    traj.config_digest = "synthetic";
    for (long long t = 1; t <= t_max; ++t) {
      OpinionState state;
      state.t = t;
      state.x.assign(n, value(t));
      traj.states.push_back(std::move(state));
    }
    return traj;
  };

  const WeightMatrix w2 = validate_weight_matrix({{0.5, 0.5}, {0.5, 0.5}});
  const SccPoset scc2 = strongly_connected_components(w2);
  const auto alternating = detect_consensus(
      make_traj(2, 60, [](long long t) { return t % 2 ? 1.0 : 0.0; }), scc2, acfg);
  require(alternating.kind == VerdictKind::non_consensus,
          "alternating corners must classify as non_consensus");
  require(alternating.per_component[0] == ComponentStatus::oscillating,
          "alternating corners must classify as oscillating");

  const WeightMatrix w1 = WeightMatrix::identity(1);
  const SccPoset scc1 = strongly_connected_components(w1);
  const auto single = detect_consensus(
      make_traj(1, 60, [](long long t) { return t % 2 ? 1.0 : 0.0; }), scc1, acfg);
  require(single.kind == VerdictKind::non_consensus &&
              single.per_component[0] == ComponentStatus::oscillating,
          "a lone alternating agent must classify as oscillating");

  const auto ones = detect_consensus(make_traj(2, 60, [](long long) { return 1.0; }), scc2, acfg);
  require(ones.kind == VerdictKind::consensus_1, "constant ones must classify as consensus_1");
  require(ones.first_hit && *ones.first_hit == 1, "constant ones start in the corner");
  const auto zeros = detect_consensus(make_traj(2, 60, [](long long) { return 0.0; }), scc2, acfg);
  require(zeros.kind == VerdictKind::consensus_0, "constant zeros must classify as consensus_0");
  require(zeros.first_hit && *zeros.first_hit == 1, "constant zeros start in the corner");
  return "alternating -> oscillating, constant corners -> consensus";
}

// The same ensemble computed with 1 and 8 worker threads yields identical
// run tables and byte-identical CSV reports.
inline std::string check_thread_determinism() {
  using verify_detail::require;
  SimulationConfig cfg;
  cfg.w = demo_network();
  cfg.alpha = 0.3;
  cfg.x1.assign(7, 0.5);
  cfg.t_max = 400;
  cfg.seed = kSeedDeterminism;
  MonteCarloProbes probes;
  probes.times = {1, 100, 400};
  const Ensemble one = monte_carlo(cfg, 200, 0.05, 50, probes, 1);
  const Ensemble eight = monte_carlo(cfg, 200, 0.05, 50, probes, 8);
  require(one.runs == eight.runs, "run summaries differ between 1 and 8 threads");
  const auto render = [](const Ensemble& ens) {
    std::ostringstream summary, corners, runs;
    write_ensemble_summary_csv(summary, ens);
    write_corner_table_csv(corners, ens, ens.analysis.delta);
    write_run_summaries_csv(runs, ens);
    return summary.str() + "\x1f" + corners.str() + "\x1f" + runs.str();
  };
  require(render(one) == render(eight), "CSV reports differ between 1 and 8 threads");
  return "200 runs byte-identical across 1 and 8 threads";
}

// ---- module invariant checks ----

inline std::string check_weight_matrix_io() {
  using verify_detail::require;
  auto rng = run_stream(kSeedInvariants, 0);
  const WeightMatrix w = verify_detail::random_stochastic(rng, 5, false);
  std::ostringstream out;
  save_weight_matrix(out, w);
  std::istringstream in(out.str());
  const WeightMatrix back = load_weight_matrix(in, "<round-trip>");
  require(back.entries() == w.entries(), "weight matrix round-trip must be exact");

  bool threw = false;
  try {
    validate_weight_matrix({{1.0}, {0.5, 0.5}});
  } catch (const NonSquare&) {
    threw = true;
  }
  require(threw, "jagged rows must raise NonSquare");
  threw = false;
  try {
    validate_weight_matrix({{1.5, -0.5}, {0.5, 0.5}});
  } catch (const NegativeEntry& e) {
    threw = e.i == 0 && e.j == 1;
  }
  require(threw, "negative entries must raise NegativeEntry with coordinates");
  threw = false;
  try {
    validate_weight_matrix({{0.5, 0.4}, {0.5, 0.5}});
  } catch (const RowSumViolation& e) {
    threw = e.row == 0;
  }
  require(threw, "bad row sums must raise RowSumViolation with the row");
  threw = false;
  try {
    std::istringstream bad("2\n1 0\n0.5\n");
    load_weight_matrix(bad, "<bad>");
  } catch (const ParseError& e) {
    threw = e.line == 3;
  }
  require(threw, "short rows must raise ParseError with the line number");

  const auto succ = demo_network().successors(2);
  require(succ == std::vector<int>{1, 5}, "successors(v3) should be the agents listening to it");
  return "round-trip exact, error taxonomy intact";
}

inline std::string check_rng_streams() {
  using verify_detail::require;
  auto a = run_stream(42, 0);
  auto b = run_stream(42, 0);
  for (int k = 0; k < 8; ++k) require(a.next() == b.next(), "equal seeds must replay equally");
  auto c0 = run_stream(42, 0);
  auto c1 = run_stream(42, 1);
  bool differs = false;
  for (int k = 0; k < 8; ++k) differs = differs || c0.next() != c1.next();
  require(differs, "distinct run streams must differ");

  auto u = run_stream(kSeedInvariants, 1);
  double sum = 0.0;
  for (int k = 0; k < 10000; ++k) {
    const double v = uniform01(u);
    require(v >= 0.0 && v < 1.0, "uniform01 must land in [0,1)");
    sum += v;
  }
  require(std::fabs(sum / 10000.0 - 0.5) < 0.02, "uniform01 mean drifted");
  for (int k = 0; k < 1000; ++k) {
    require(!bernoulli(u, 0.0), "bernoulli(0) must never fire");
    require(bernoulli(u, 1.0), "bernoulli(1) must always fire");
  }
  return "streams replay, uniform01 in range, bernoulli exact at the ends";
}

inline std::string check_state_bounds() {
  using verify_detail::require;
  auto rng = run_stream(kSeedInvariants, 2);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + trial % 5;
    SimulationConfig cfg;
    cfg.w = verify_detail::random_stochastic(rng, n, trial % 2 == 0);
    cfg.alpha = 0.05 + 0.9 * uniform01(rng);
    cfg.x1.resize(n);
    for (double& v : cfg.x1) v = uniform01(rng);
    cfg.t_max = 200;
    cfg.seed = kSeedInvariants + trial;
    const Trajectory traj = simulate(cfg);
    for (const auto& state : traj.states)
      for (double v : state.x)
        require(v >= 0.0 && v <= 1.0, "opinions escaped the unit cube");

    cfg.x1.assign(n, 0.0);
    for (const auto& state : simulate(cfg).states)
      for (double v : state.x) require(v == 0.0, "the all-zero corner must be an exact fixed point");
  }
  // with exactly representable row sums the all-one corner is exact as well
  SimulationConfig cfg;
  cfg.w = demo_network();
  cfg.alpha = 0.37;
  cfg.x1.assign(7, 1.0);
  cfg.t_max = 200;
  cfg.seed = kSeedInvariants;
  for (const auto& state : simulate(cfg).states)
    for (double v : state.x) require(v == 1.0, "the all-one corner must be an exact fixed point");
  return "unit cube invariant, corners exact";
}

inline std::string check_update_replay() {
  using verify_detail::require;
  auto rng = run_stream(kSeedInvariants, 3);
  SimulationConfig cfg;
  cfg.w = verify_detail::random_stochastic(rng, 4, true);
  cfg.alpha = 0.35;
  cfg.x1 = {0.2, 0.8, 0.5, 1.0};
  cfg.stubborn = {3};
  cfg.t_max = 300;
  cfg.seed = kSeedInvariants + 50;
  cfg.record_actions = true;
  Trajectory traj = simulate(cfg);
  require(trajectory_satisfies_update(traj, cfg.w, cfg.alpha, cfg.stubborn),
          "a recorded trajectory must replay bit for bit");
  for (const auto& state : traj.states)
    require(state.x[3] == 1.0, "a pinned agent must never move");
  traj.states[10].x[0] += 1e-9;
  require(!trajectory_satisfies_update(traj, cfg.w, cfg.alpha, cfg.stubborn),
          "a perturbed trajectory must fail the replay");
  return "replay detects exact and perturbed trajectories";
}

inline std::string check_ensemble_matches_simulate() {
  using verify_detail::require;
  for (int variant = 0; variant < 2; ++variant) {
    SimulationConfig cfg;
    if (variant == 0) {
      cfg.w = validate_weight_matrix({{0.5, 0.5}, {0.5, 0.5}});
      cfg.x1 = {0.3, 0.6};
    } else {
      cfg.w = demo_network();
      cfg.x1.assign(7, 0.5);
    }
    cfg.alpha = 0.4;
    cfg.t_max = 2000;
    cfg.seed = kSeedInvariants + 60 + variant;
    const Trajectory traj = simulate(cfg);
    MonteCarloProbes probes;
    probes.times = {1, 57, cfg.t_max};
    const Ensemble ens = monte_carlo(cfg, 1, 0.05, 50, probes);
    const SccPoset scc = strongly_connected_components(cfg.w);
    const AnalysisConfig acfg{0.05, 50, cfg.t_max};
    require(ens.runs[0].final_x == traj.states.back().x,
            "ensemble run 0 must equal the single simulation bit for bit");
    require(ens.runs[0].verdict == detect_consensus(traj, scc, acfg),
            "ensemble verdict must match the trajectory verdict");
    for (const auto& probe : ens.runs[0].probes)
      require(probe.x == traj.states[static_cast<std::size_t>(probe.t - 1)].x,
              "probe states must match the stored trajectory");
  }
  return "single-run ensembles are bitwise equal to simulate";
}

inline std::string check_trajectory_csv_round_trip() {
  using verify_detail::require;
  SimulationConfig cfg;
  cfg.w = verify_detail::dyadic_circulant(3);
  cfg.alpha = 0.3;
  cfg.x1 = {0.1, 0.5, 0.9};
  cfg.t_max = 50;
  cfg.seed = kSeedInvariants + 70;
  const Trajectory traj = simulate(cfg);
  std::ostringstream out;
  write_trajectory_csv(out, traj);
  std::istringstream in(out.str());
  const Trajectory back = read_trajectory_csv(in, "<round-trip>");
  require(back.states.size() == traj.states.size(), "state count must survive the round trip");
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    require(back.states[k].t == traj.states[k].t, "times must survive the round trip");
    require(back.states[k].x == traj.states[k].x, "states must survive bit for bit");
  }
  require(back.config_digest == traj.config_digest, "digest must survive the round trip");

  std::ostringstream grid;
  const std::vector<double> alphas = {0.25, 0.75};
  const std::vector<double> gammas = linspace(0.0, 1.0, 5);
  write_g_grid_csv(grid, alphas, 6, gammas);
  std::istringstream grid_in(grid.str());
  const CsvDocument doc = parse_csv(grid_in, "<grid>");
  require(doc.rows.size() == gammas.size(), "grid row count must survive");
  for (std::size_t r = 0; r < doc.rows.size(); ++r)
    for (std::size_t c = 0; c < alphas.size(); ++c) {
      const double want = g_function(alphas[c], 6, gammas[r]);
      const double got = detail::parse_double_token(doc.rows[r][c + 1], "<grid>", 0);
      require(got == want, "grid values must round-trip bit for bit");
    }
  return "trajectory and grid CSV round-trip exactly";
}

inline std::string check_corner_events() {
  using verify_detail::require;
  const auto label_of = [](std::vector<double> x, double delta) {
    OpinionState state;
    state.t = 1;
    state.x = std::move(x);
    return corner_event(state, delta);
  };
  require(!label_of({0.05, 0.01}, 0.05).has_value(), "bands are strict: 0.05 is interior");
  require(!label_of({0.5, 0.5}, 0.05).has_value(), "interior states have no corner");
  const auto zero = label_of({0.04, 0.04}, 0.05);
  require(zero && zero->all_zero(), "states under delta label the zero corner");
  const auto one = label_of({0.96, 0.96}, 0.05);
  require(one && one->all_one(), "states above 1 - delta label the one corner");
  const auto mixed = label_of({0.01, 0.99}, 0.05);
  require(mixed && !mixed->all_zero() && !mixed->all_one(), "mixed corners carry mixed labels");
  bool threw = false;
  try {
    label_of({0.5}, 0.5);
  } catch (const InvalidDelta&) {
    threw = true;
  }
  require(threw, "delta = 0.5 must raise InvalidDelta");
  return "strict bands and labels behave";
}

inline std::string check_escape_bound() {
  using verify_detail::require;
  for (double alpha : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    for (double w_kl : {0.2, 0.5, 1.0}) {
      const double bound = max_escape_delta(alpha, w_kl);
      require(bound > 0.0 && bound < 0.5, "escape bound must lie in (0, 1/2)");
      const double delta = bound * 0.999999;
      const WeightMatrix w = validate_weight_matrix({{1.0 - w_kl, w_kl}, {0.5, 0.5}});
      OpinionState low{1, {delta * 0.999, delta * 0.999}};
      const OpinionState after_ones = step(low, ActionVector{1, {1, 1}}, w, alpha);
      require(after_ones.x[0] >= delta, "a unanimous burst of ones must clear the zero band");
      OpinionState high{1, {1.0 - delta * 0.999, 1.0 - delta * 0.999}};
      const OpinionState after_zeros = step(high, ActionVector{1, {0, 0}}, w, alpha);
      require(after_zeros.x[0] >= delta && after_zeros.x[0] <= 1.0 - delta,
              "a unanimous burst of zeros must leave the one band");
    }
  }
  return "one unanimous step escapes any corner narrower than the bound";
}

inline std::string check_g_tail_bound() {
  using verify_detail::require;
  auto rng = run_stream(kSeedInvariants, 4);
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const double alpha = 0.05 + 0.9 * uniform01(rng);
    const double gamma = uniform01(rng);
    const int n = trial % 3 == 0 ? 1 : (trial % 3 == 1 ? 6 : 40);
    const double fine = g_function(alpha, n, gamma, 1e-15);
    const double coarse = g_function(alpha, n, gamma, 1e-12);
    require(std::fabs(fine - coarse) <= 2e-12, "tolerance parameter not honored");
    const double brute = oracle::g_truncated(alpha, n, gamma, 2000);
    worst = std::max(worst, std::fabs(fine - brute));
    require(std::fabs(fine - brute) <= 1e-9, "g drifted from the long product");
  }
  return "200 samples, worst long-product gap " + verify_detail::fmt(worst);
}

inline std::string check_scenario_parsing() {
  using verify_detail::require;
  std::istringstream text(
      "# sample scenario\n"
      "weights = 0.5 0.5; 0.5 0.5\n"
      "alpha = 0.25\n"
      "x1 = 1\n"
      "t_max = 100\n"
      "seed = 7\n"
      "stubborn = 1\n");
  const Scenario sc = parse_scenario(text, "<inline>");
  const SimulationConfig cfg = scenario_to_config(sc);
  require(cfg.w.size() == 2 && cfg.w(0, 1) == 0.5, "inline matrix must parse");
  require(cfg.x1 == std::vector<double>{1.0, 1.0}, "scalar x1 must broadcast");
  require(cfg.stubborn == std::vector<int>{0}, "stubborn agents are 1-based in files");
  require(cfg.t_max == 100 && cfg.seed == 7, "explicit keys must carry through");

  bool threw = false;
  try {
    std::istringstream bad("weights = 0.5 0.5; 0.5 0.5\nalpha 0.3\n");
    parse_scenario(bad, "<bad>");
  } catch (const ParseError& e) {
    threw = e.line == 2;
  }
  require(threw, "a malformed line must raise ParseError with its line number");
  threw = false;
  try {
    std::istringstream dup("alpha = 0.5\nalpha = 0.6\n");
    parse_scenario(dup, "<dup>");
  } catch (const ParseError& e) {
    threw = e.line == 2;
  }
  require(threw, "duplicate keys must raise ParseError");
  threw = false;
  try {
    std::istringstream unknown("gamma = 0.5\n");
    parse_scenario(unknown, "<unknown>");
  } catch (const ParseError& e) {
    threw = e.line == 1;
  }
  require(threw, "unknown keys must raise ParseError");
  return "scenario keys, broadcasts and error lines behave";
}

// ---- registry ----

struct Check {
  std::string name;
  std::string (*fn)();
};

inline const std::vector<Check>& acceptance_checks() {
  static const std::vector<Check> checks = {
      {"scc_poset_golden", &check_scc_poset_golden},
      {"scc_oracle_equivalence", &check_scc_oracle_equivalence},
      {"perron_residual", &check_perron_residual},
      {"martingale_identity", &check_martingale_identity},
      {"consensus_fraction", &check_consensus_fraction},
      {"corner_absorption", &check_corner_absorption},
      {"residual_moment_decay", &check_residual_moment_decay},
      {"g_function_grid", &check_g_function_grid},
      {"component_dichotomy", &check_component_dichotomy},
      {"stubborn_consensus", &check_stubborn_consensus},
      {"time_variant_limit", &check_time_variant_limit},
      {"oscillation_classifier", &check_oscillation_classifier},
      {"thread_determinism", &check_thread_determinism},
  };
  return checks;
}

inline const std::vector<Check>& invariant_checks() {
  static const std::vector<Check> checks = {
      {"weight_matrix_io", &check_weight_matrix_io},
      {"rng_streams", &check_rng_streams},
      {"state_bounds", &check_state_bounds},
      {"update_replay", &check_update_replay},
      {"ensemble_matches_simulate", &check_ensemble_matches_simulate},
      {"trajectory_csv_round_trip", &check_trajectory_csv_round_trip},
      {"corner_events", &check_corner_events},
      {"escape_bound", &check_escape_bound},
      {"g_tail_bound", &check_g_tail_bound},
      {"scenario_parsing", &check_scenario_parsing},
  };
  return checks;
}

inline std::vector<Check> all_checks() {
  std::vector<Check> checks = invariant_checks();
  const auto& acceptance = acceptance_checks();
  checks.insert(checks.end(), acceptance.begin(), acceptance.end());
  return checks;
}

inline CheckResult run_check(const Check& check) {
  CheckResult result;
  result.name = check.name;
  const auto start = std::chrono::steady_clock::now();
  try {
    result.details = check.fn();
    result.passed = true;
  } catch (const std::exception& e) {
    result.passed = false;
    result.details = e.what();
  }
  result.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

// Machine-readable failure report; commas and newlines in details are
// flattened so each row stays a clean four-cell record.
inline void write_check_report_csv(std::ostream& out, const std::vector<CheckResult>& results) {
  write_meta(out, {});
  write_csv_row(out, {"name", "status", "seconds", "details"});
  for (const auto& r : results) {
    std::string details = r.details;
    for (char& ch : details)
      if (ch == ',' || ch == '\n') ch = ';';
    char seconds[32];
    std::snprintf(seconds, sizeof seconds, "%.3f", r.seconds);
    write_csv_row(out, {r.name, r.passed ? "pass" : "fail", seconds, details});
  }
}

}  // namespace herdlab
