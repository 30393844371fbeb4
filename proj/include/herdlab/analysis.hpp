#pragma once
// Trajectory diagnostics: corner events, per-component convergence verdicts,
// and the conserved-mean (martingale) series q_t = pi^T x_t.

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "herdlab/dynamics.hpp"
#include "herdlab/errors.hpp"
#include "herdlab/perron.hpp"
#include "herdlab/scc.hpp"

namespace herdlab {

// Corner of the unit cube: bit m_i = 1 means agent i sits within delta of 1.
struct CornerLabel {
  std::vector<std::uint8_t> m;

  bool all_zero() const {
    for (auto b : m)
      if (b) return false;
    return true;
  }
  bool all_one() const {
    for (auto b : m)
      if (!b) return false;
    return true;
  }
  friend bool operator==(const CornerLabel& a, const CornerLabel& b) { return a.m == b.m; }
  friend bool operator!=(const CornerLabel& a, const CornerLabel& b) { return !(a == b); }
};

struct AnalysisConfig {
  double delta = 0.05;    // corner radius, in (0, 1/2) so corners are disjoint
  long long window = 50;  // consecutive final steps a verdict must hold for
  long long t_max = 0;    // horizon the trajectory was run to; 0 = unspecified
};

inline void validate_analysis_config(const AnalysisConfig& cfg) {
  if (!(cfg.delta > 0.0 && cfg.delta < 0.5)) throw InvalidDelta(cfg.delta);
  if (cfg.window < 1) throw InvalidArgument("analysis: window must be >= 1");
}

enum class ComponentStatus { to_0, to_1, oscillating, undecided };
enum class VerdictKind { consensus_0, consensus_1, non_consensus, undecided };

inline const char* to_string(ComponentStatus s) {
  switch (s) {
    case ComponentStatus::to_0: return "to_0";
    case ComponentStatus::to_1: return "to_1";
    case ComponentStatus::oscillating: return "oscillating";
    default: return "undecided";
  }
}
inline const char* to_string(VerdictKind k) {
  switch (k) {
    case VerdictKind::consensus_0: return "consensus_0";
    case VerdictKind::consensus_1: return "consensus_1";
    case VerdictKind::non_consensus: return "non_consensus";
    default: return "undecided";
  }
}

struct ConvergenceVerdict {
  VerdictKind kind = VerdictKind::undecided;
  std::vector<ComponentStatus> per_component;
  std::optional<long long> first_hit;  // when the final corner window began

  friend bool operator==(const ConvergenceVerdict& a, const ConvergenceVerdict& b) {
    return a.kind == b.kind && a.per_component == b.per_component && a.first_hit == b.first_hit;
  }
};

// Returns the corner label iff every coordinate is strictly inside a band:
// x_i < delta (bit 0) or x_i > 1 - delta (bit 1). Unique when it exists.
inline std::optional<CornerLabel> corner_event(const OpinionState& state, double delta) {
  if (!(delta > 0.0 && delta < 0.5)) throw InvalidDelta(delta);
  const double hi = 1.0 - delta;
  CornerLabel label;
  label.m.resize(state.x.size());
  for (std::size_t i = 0; i < state.x.size(); ++i) {
    const double v = state.x[i];
    if (v < delta)
      label.m[i] = 0;
    else if (v > hi)
      label.m[i] = 1;
    else
      return std::nullopt;
  }
  return label;
}

// Largest corner radius for which one unanimous-action step provably moves a
// listener off its corner: delta <= min(alpha * w_kl, (1-alpha)/(2-alpha)).
inline double max_escape_delta(double alpha, double w_kl) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("max_escape_delta: alpha in (0,1)");
  if (!(w_kl > 0.0)) throw InvalidArgument("max_escape_delta: weight must be positive");
  return std::min(alpha * w_kl, (1.0 - alpha) / (2.0 - alpha));
}

namespace detail {

// Classifies each component over the final `window` states (oldest first):
//   to_c        every member inside the c-band at every step;
//   oscillating not band-stable, and either some member's range spans
//               >= 1 - 2 delta or every maximal component has settled
//               (persistent fluctuation squeezed between settled sources);
//   undecided   anything else, including a frozen mixed-band pattern.
inline std::vector<ComponentStatus> classify_window(
    const std::vector<const std::vector<double>*>& win, const SccPoset& scc, double delta) {
  const int m = scc.count();
  const double hi = 1.0 - delta;
  const std::size_t n = scc.component_of.size();

  // per-agent band history: 0, 1, or interior; plus range over the window
  std::vector<int> stable_band(n);  // -1 unstable, else 0/1/2(=interior)
  std::vector<double> lo_seen(n), hi_seen(n);
  for (std::size_t i = 0; i < n; ++i) {
    stable_band[i] = -2;  // unset
    lo_seen[i] = 2.0;
    hi_seen[i] = -1.0;
  }
  for (const auto* xs : win) {
    for (std::size_t i = 0; i < n; ++i) {
      const double v = (*xs)[i];
      const int band = v < delta ? 0 : (v > hi ? 1 : 2);
      if (stable_band[i] == -2)
        stable_band[i] = band;
      else if (stable_band[i] != band)
        stable_band[i] = -1;
      lo_seen[i] = std::min(lo_seen[i], v);
      hi_seen[i] = std::max(hi_seen[i], v);
    }
  }

  std::vector<ComponentStatus> status(m, ComponentStatus::undecided);
  std::vector<bool> settled(m, false);
  for (int r = 0; r < m; ++r) {
    bool all0 = true, all1 = true;
    for (int agent : scc.components[r]) {
      all0 = all0 && stable_band[agent] == 0;
      all1 = all1 && stable_band[agent] == 1;
    }
    if (all0) status[r] = ComponentStatus::to_0;
    if (all1) status[r] = ComponentStatus::to_1;
    settled[r] = all0 || all1;
  }

  bool maximal_settled = true;
  for (int r : scc.maximal) maximal_settled = maximal_settled && settled[r];

  for (int r = 0; r < m; ++r) {
    if (settled[r]) continue;
    bool band_stable = true, range_spans = false;
    for (int agent : scc.components[r]) {
      band_stable = band_stable && stable_band[agent] >= 0 && stable_band[agent] != 2;
      range_spans = range_spans || hi_seen[agent] - lo_seen[agent] >= 1.0 - 2.0 * delta;
    }
    if (!band_stable && (range_spans || maximal_settled))
      status[r] = ComponentStatus::oscillating;
  }
  return status;
}

inline VerdictKind aggregate_kind(const std::vector<ComponentStatus>& status,
                                  const SccPoset& scc) {
  bool all0 = true, all1 = true, any_osc = false;
  for (auto s : status) {
    all0 = all0 && s == ComponentStatus::to_0;
    all1 = all1 && s == ComponentStatus::to_1;
    any_osc = any_osc || s == ComponentStatus::oscillating;
  }
  if (all0) return VerdictKind::consensus_0;
  if (all1) return VerdictKind::consensus_1;
  bool max_disagree = false;
  bool saw0 = false, saw1 = false;
  for (int r : scc.maximal) {
    saw0 = saw0 || status[r] == ComponentStatus::to_0;
    saw1 = saw1 || status[r] == ComponentStatus::to_1;
  }
  max_disagree = saw0 && saw1;
  if (any_osc || max_disagree) return VerdictKind::non_consensus;
  return VerdictKind::undecided;
}

}  // namespace detail

// Verdict from the final `window` stored states, which must be consecutive
// time steps. first_hit is the start of the contiguous stored suffix that
// stays in the winning corner (for consensus verdicts).
inline ConvergenceVerdict detect_consensus(const Trajectory& traj, const SccPoset& scc,
                                           const AnalysisConfig& cfg) {
  validate_analysis_config(cfg);
  const auto& states = traj.states;
  const auto window = static_cast<std::size_t>(cfg.window);
  if (states.size() < window)
    throw TrajectoryTooShort("trajectory stores " + std::to_string(states.size()) +
                             " states, window needs " + std::to_string(cfg.window));
  for (std::size_t k = states.size() - window; k + 1 < states.size(); ++k)
    if (states[k + 1].t != states[k].t + 1)
      throw TrajectoryTooShort("final window is not stored as consecutive steps");
  if (!states.empty() && scc.component_of.size() != states.back().x.size())
    throw DimensionMismatch("detect_consensus: poset does not match trajectory width");

  std::vector<const std::vector<double>*> win;
  win.reserve(window);
  for (std::size_t k = states.size() - window; k < states.size(); ++k) win.push_back(&states[k].x);

  ConvergenceVerdict verdict;
  verdict.per_component = detail::classify_window(win, scc, cfg.delta);
  verdict.kind = detail::aggregate_kind(verdict.per_component, scc);

  if (verdict.kind == VerdictKind::consensus_0 || verdict.kind == VerdictKind::consensus_1) {
    CornerLabel target;
    target.m.assign(states.back().x.size(),
                    verdict.kind == VerdictKind::consensus_1 ? 1 : 0);
    long long hit = states.back().t;
    for (std::size_t k = states.size(); k-- > 0;) {
      auto label = corner_event(states[k], cfg.delta);
      if (!label || !(*label == target)) break;
      hit = states[k].t;
      if (k > 0 && states[k - 1].t != states[k].t - 1) break;  // decimated gap: stop scanning
    }
    verdict.first_hit = hit;
  }
  return verdict;
}

struct MartingaleSeries {
  std::vector<double> q;   // q_t = pi^T x_t, one per stored state
  std::vector<double> dq;  // q_{t+1} - q_t
};

// Requires a full-history trajectory (stride 1) so consecutive differences
// mean one step. When actions were recorded, dq_t equals
// alpha * pi^T (a_t - x_t) up to floating round-off.
inline MartingaleSeries martingale_series(const Trajectory& traj, const PerronVector& pi) {
  if (traj.stride != 1)
    throw InvalidArgument("martingale_series: needs a full-history trajectory");
  MartingaleSeries series;
  series.q.reserve(traj.states.size());
  for (const auto& state : traj.states) {
    if (state.x.size() != pi.values.size())
      throw DimensionMismatch("martingale_series: pi does not match trajectory width");
    double q = 0.0;
    for (std::size_t i = 0; i < pi.values.size(); ++i) q += pi.values[i] * state.x[i];
    series.q.push_back(q < 0.0 ? 0.0 : (q > 1.0 ? 1.0 : q));
  }
  if (!series.q.empty()) {
    series.dq.reserve(series.q.size() - 1);
    for (std::size_t k = 0; k + 1 < series.q.size(); ++k)
      series.dq.push_back(series.q[k + 1] - series.q[k]);
  }
  return series;
}

}  // namespace herdlab
