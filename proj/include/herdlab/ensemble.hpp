#pragma once
// Monte Carlo ensembles. Each run streams one trajectory without storing it:
// the verdict needs only the final `window` states (kept in a ring buffer),
// plus whatever probe times the caller asked to sample. Runs write into
// preassigned slots, so results are identical for any thread count.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <optional>
#include <thread>
#include <vector>

#include "herdlab/analysis.hpp"
#include "herdlab/dynamics.hpp"
#include "herdlab/errors.hpp"
#include "herdlab/perron.hpp"
#include "herdlab/scc.hpp"

namespace herdlab {

struct ProbeSample {
  long long t = 0;
  std::vector<double> x;
  std::vector<std::uint8_t> a;  // action drawn at t; empty unless recorded
  bool has_actions = false;

  friend bool operator==(const ProbeSample& l, const ProbeSample& r) {
    return l.t == r.t && l.x == r.x && l.a == r.a && l.has_actions == r.has_actions;
  }
};

struct RunSummary {
  std::uint64_t run_index = 0;
  ConvergenceVerdict verdict;
  std::vector<double> final_x;  // state at t_max
  std::vector<ProbeSample> probes;

  friend bool operator==(const RunSummary& l, const RunSummary& r) {
    return l.run_index == r.run_index && l.verdict == r.verdict && l.final_x == r.final_x &&
           l.probes == r.probes;
  }
};

struct MonteCarloProbes {
  std::vector<long long> times;  // strictly ascending, within [1, t_max]
  bool record_actions = false;   // keep a_t at each probe time (t < t_max)
};

struct Ensemble {
  SimulationConfig config;  // config.seed is the master seed
  AnalysisConfig analysis;
  SccPoset scc;
  std::uint64_t master_seed = 0;
  std::uint64_t run_count = 0;
  std::vector<RunSummary> runs;
};

namespace detail {

inline RunSummary run_one(const SimulationConfig& cfg, const SccPoset& scc,
                          const AnalysisConfig& analysis, const MonteCarloProbes& probes,
                          std::uint64_t run_index) {
  const int n = cfg.w.size();
  const long long window = analysis.window;
  Xoshiro256PlusPlus rng = run_stream(cfg.seed, run_index);

  RunSummary summary;
  summary.run_index = run_index;
  summary.probes.reserve(probes.times.size());

  std::vector<double> x = cfg.x1;
  std::vector<double> next(n);
  std::vector<std::uint8_t> a(n);
  std::vector<std::vector<double>> ring(static_cast<std::size_t>(window));

  // current streak of identical full-state corner labels, for first_hit
  std::optional<CornerLabel> streak_label;
  long long streak_start = 1;

  // once the state is an exact binary fixed point, action draws are
  // deterministic and the state never moves; skip the arithmetic
  bool absorbed = false;

  std::size_t probe_idx = 0;
  for (long long t = 1; t <= cfg.t_max; ++t) {
    ring[static_cast<std::size_t>((t - 1) % window)] = x;

    OpinionState view{t, x};
    auto label = corner_event(view, analysis.delta);
    if (!label) {
      streak_label.reset();
    } else if (!streak_label || !(*streak_label == *label)) {
      streak_label = std::move(label);
      streak_start = t;
    }

    const bool probed = probe_idx < probes.times.size() && probes.times[probe_idx] == t;
    if (probed) {
      ProbeSample sample;
      sample.t = t;
      sample.x = x;
      summary.probes.push_back(std::move(sample));
    }
    if (t == cfg.t_max) break;

    if (!absorbed) {
      for (int i = 0; i < n; ++i) a[i] = bernoulli(rng, x[i]) ? 1 : 0;
      update_opinions(cfg.w, cfg.alpha, x, a, next);
      for (int k : cfg.stubborn) next[k] = x[k];
      if (probed && probes.record_actions) {
        summary.probes.back().a = a;
        summary.probes.back().has_actions = true;
      }
      x.swap(next);
      bool binary = true;
      for (double v : x) binary = binary && (v == 0.0 || v == 1.0);
      if (binary) {
        for (int i = 0; i < n; ++i) a[i] = x[i] == 1.0 ? 1 : 0;
        update_opinions(cfg.w, cfg.alpha, x, a, next);
        for (int k : cfg.stubborn) next[k] = x[k];
        absorbed = next == x;
      }
    } else if (probed && probes.record_actions) {
      // frozen at a binary fixed point: the drawn action equals the state
      summary.probes.back().a.resize(n);
      for (int i = 0; i < n; ++i) summary.probes.back().a[i] = x[i] == 1.0 ? 1 : 0;
      summary.probes.back().has_actions = true;
    }
    if (probed) ++probe_idx;
  }

  std::vector<const std::vector<double>*> win;
  win.reserve(static_cast<std::size_t>(window));
  for (long long t = cfg.t_max - window + 1; t <= cfg.t_max; ++t)
    win.push_back(&ring[static_cast<std::size_t>((t - 1) % window)]);
  summary.verdict.per_component = classify_window(win, scc, analysis.delta);
  summary.verdict.kind = aggregate_kind(summary.verdict.per_component, scc);
  if (summary.verdict.kind == VerdictKind::consensus_0 ||
      summary.verdict.kind == VerdictKind::consensus_1) {
    summary.verdict.first_hit = streak_start;
  }
  summary.final_x = std::move(x);
  return summary;
}

}  // namespace detail

inline Ensemble monte_carlo(const SimulationConfig& config, std::uint64_t runs, double delta,
                            long long window, const MonteCarloProbes& probes = {},
                            unsigned threads = 1) {
  validate_config(config);
  if (runs < 1) throw InvalidArgument("monte_carlo: runs must be >= 1");
  AnalysisConfig analysis{delta, window, config.t_max};
  validate_analysis_config(analysis);
  if (window > config.t_max)
    throw TrajectoryTooShort("monte_carlo: window exceeds the horizon t_max");
  long long prev = 0;
  for (long long t : probes.times) {
    if (t < 1 || t > config.t_max) throw InvalidArgument("monte_carlo: probe time out of range");
    if (t <= prev) throw InvalidArgument("monte_carlo: probe times must be strictly ascending");
    prev = t;
  }

  Ensemble ens;
  ens.config = config;
  ens.analysis = analysis;
  ens.scc = strongly_connected_components(config.w);
  ens.master_seed = config.seed;
  ens.run_count = runs;
  ens.runs.resize(runs);

  const auto work = [&](std::uint64_t r) {
    ens.runs[r] = detail::run_one(config, ens.scc, analysis, probes, r);
  };

  if (threads <= 1) {
    for (std::uint64_t r = 0; r < runs; ++r) work(r);
  } else {
    std::atomic<std::uint64_t> next{0};
    std::vector<std::thread> pool;
    const unsigned count = std::min<std::uint64_t>(threads, runs);
    pool.reserve(count);
    for (unsigned i = 0; i < count; ++i) {
      pool.emplace_back([&] {
        for (std::uint64_t r = next.fetch_add(1); r < runs; r = next.fetch_add(1)) work(r);
      });
    }
    for (auto& th : pool) th.join();
  }
  return ens;
}

// ---- ensemble statistics ----

struct CornerProbability {
  long long t = 0;
  std::uint64_t runs = 0;
  std::uint64_t count_zero = 0, count_one = 0, count_mixed = 0;
  double p_corner_any = 0.0, p_zero = 0.0, p_one = 0.0, p_mixed = 0.0;
};

namespace detail {

inline const std::vector<double>* state_at(const RunSummary& run, const Ensemble& ens,
                                           long long t) {
  for (const auto& probe : run.probes)
    if (probe.t == t) return &probe.x;
  if (t == ens.config.t_max) return &run.final_x;
  return nullptr;
}

}  // namespace detail

// Fraction of runs whose state at time t lies in the all-zero corner, the
// all-one corner, or a mixed corner. Counts are exact; p_corner_any is
// computed from the summed count.
inline CornerProbability empirical_corner_probability(const Ensemble& ens, long long t,
                                                      double delta) {
  if (!(delta > 0.0 && delta < 0.5)) throw InvalidDelta(delta);
  if (t < 1 || t > ens.config.t_max)
    throw InvalidArgument("empirical_corner_probability: t outside the horizon");
  CornerProbability out;
  out.t = t;
  out.runs = ens.run_count;
  for (const auto& run : ens.runs) {
    const auto* x = detail::state_at(run, ens, t);
    if (!x)
      throw InvalidArgument("empirical_corner_probability: state at t=" + std::to_string(t) +
                            " was not sampled; add a probe time");
    OpinionState view{t, *x};
    auto label = corner_event(view, delta);
    if (!label) continue;
    if (label->all_zero())
      ++out.count_zero;
    else if (label->all_one())
      ++out.count_one;
    else
      ++out.count_mixed;
  }
  const double r = static_cast<double>(ens.run_count);
  out.p_zero = static_cast<double>(out.count_zero) / r;
  out.p_one = static_cast<double>(out.count_one) / r;
  out.p_mixed = static_cast<double>(out.count_mixed) / r;
  out.p_corner_any = static_cast<double>(out.count_zero + out.count_one + out.count_mixed) / r;
  return out;
}

struct ResidualMoments {
  std::vector<long long> times;
  std::vector<std::vector<double>> second_moment;             // [time][agent], E{y^2}
  std::vector<std::vector<std::vector<double>>> correlation;  // [time][i][j], Pearson
};

// y_t = a_t - x_t per agent. Second moments are plain averages of y^2 across
// runs (unbiased for E{y^2}); correlations use the (R-1) covariance estimate.
inline ResidualMoments residual_moments(const Ensemble& ens, const std::vector<long long>& times) {
  const int n = ens.config.w.size();
  ResidualMoments out;
  out.times = times;
  for (long long t : times) {
    std::vector<double> sum_y(n, 0.0);
    std::vector<std::vector<double>> sum_yy(n, std::vector<double>(n, 0.0));
    for (const auto& run : ens.runs) {
      const ProbeSample* found = nullptr;
      for (const auto& probe : run.probes)
        if (probe.t == t) {
          found = &probe;
          break;
        }
      if (!found || !found->has_actions)
        throw MissingActions("residual_moments: actions at t=" + std::to_string(t) +
                             " were not recorded");
      std::vector<double> y(n);
      for (int i = 0; i < n; ++i) y[i] = static_cast<double>(found->a[i]) - found->x[i];
      for (int i = 0; i < n; ++i) {
        sum_y[i] += y[i];
        for (int j = i; j < n; ++j) sum_yy[i][j] += y[i] * y[j];
      }
    }
    const double r = static_cast<double>(ens.run_count);
    std::vector<double> m2(n);
    for (int i = 0; i < n; ++i) m2[i] = sum_yy[i][i] / r;

    std::vector<std::vector<double>> corr(n, std::vector<double>(n, 0.0));
    if (ens.run_count >= 2) {
      std::vector<double> var(n);
      for (int i = 0; i < n; ++i)
        var[i] = (sum_yy[i][i] - sum_y[i] * sum_y[i] / r) / (r - 1.0);
      for (int i = 0; i < n; ++i) {
        corr[i][i] = 1.0;
        for (int j = i + 1; j < n; ++j) {
          const double cov = (sum_yy[i][j] - sum_y[i] * sum_y[j] / r) / (r - 1.0);
          const double denom = var[i] * var[j];
          corr[i][j] = corr[j][i] = denom > 0.0 ? cov / std::sqrt(denom) : 0.0;
        }
      }
    } else {
      for (int i = 0; i < n; ++i) corr[i][i] = 1.0;
    }
    out.second_moment.push_back(std::move(m2));
    out.correlation.push_back(std::move(corr));
  }
  return out;
}

struct ConsensusFractionReport {
  std::uint64_t runs = 0;
  std::uint64_t consensus_0 = 0, consensus_1 = 0, non_consensus = 0;
  double fraction = 0.0;  // consensus_1 / runs
  double ci_low = 0.0, ci_high = 0.0;  // 99% normal-approximation binomial CI
  double predicted = 0.0;              // q_1 = pi^T x_1
  bool agrees = false;                 // predicted inside [ci_low, ci_high]
};

inline ConsensusFractionReport consensus_fraction_report(const Ensemble& ens,
                                                         const PerronVector& pi,
                                                         const std::vector<double>& x1) {
  if (pi.values.size() != x1.size() || static_cast<int>(x1.size()) != ens.config.w.size())
    throw DimensionMismatch("consensus_fraction_report: pi/x1 width mismatch");
  ConsensusFractionReport report;
  report.runs = ens.run_count;
  std::uint64_t undecided = 0;
  for (const auto& run : ens.runs) {
    switch (run.verdict.kind) {
      case VerdictKind::consensus_0: ++report.consensus_0; break;
      case VerdictKind::consensus_1: ++report.consensus_1; break;
      case VerdictKind::non_consensus: ++report.non_consensus; break;
      default: ++undecided;
    }
  }
  if (undecided > 0) throw UndecidedRuns(undecided);
  const double r = static_cast<double>(report.runs);
  report.fraction = static_cast<double>(report.consensus_1) / r;
  const double z99 = 2.5758293035489008;  // two-sided 99% normal quantile
  const double half = z99 * std::sqrt(report.fraction * (1.0 - report.fraction) / r);
  report.ci_low = std::max(0.0, report.fraction - half);
  report.ci_high = std::min(1.0, report.fraction + half);
  report.predicted = 0.0;
  for (std::size_t i = 0; i < x1.size(); ++i) report.predicted += pi.values[i] * x1[i];
  report.agrees = report.predicted >= report.ci_low && report.predicted <= report.ci_high;
  return report;
}

}  // namespace herdlab
