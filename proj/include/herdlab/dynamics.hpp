#pragma once
// The stochastic engine: each step every agent acts 1 with probability equal
// to its own opinion, then opinions relax toward the trust-weighted mean of
// the observed actions, x' = (1-alpha) x + alpha W a.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "herdlab/errors.hpp"
#include "herdlab/rng.hpp"
#include "herdlab/weight_matrix.hpp"

namespace herdlab {

struct OpinionState {
  long long t = 1;  // time starts at 1
  std::vector<double> x;
};

struct ActionVector {
  long long t = 1;
  std::vector<std::uint8_t> a;  // bits
};

struct SimulationConfig {
  WeightMatrix w;
  double alpha = 0.5;
  std::vector<double> x1;
  long long t_max = 1000;
  std::uint64_t seed = 0;
  std::vector<int> stubborn;  // strictly ascending agent indices, pinned by the engine
  bool record_actions = false;
};

// Full history is kept up to this many stored states; longer runs store
// every k-th state plus a contiguous tail so window analyses still work.
inline constexpr long long kFullHistoryStates = 100000;
inline constexpr long long kDecimatedTail = 256;

struct Trajectory {
  std::vector<OpinionState> states;
  std::vector<ActionVector> actions;  // empty unless record_actions
  long long stride = 1;               // > 1 when decimated
  std::string config_digest;
};

inline void validate_config(const SimulationConfig& cfg) {
  if (cfg.w.empty()) throw InvalidArgument("config: weight matrix not set");
  const int n = cfg.w.size();
  if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0))
    throw InvalidArgument("config: alpha must lie in (0,1)");
  if (static_cast<int>(cfg.x1.size()) != n)
    throw DimensionMismatch("config: x1 has " + std::to_string(cfg.x1.size()) +
                            " entries for " + std::to_string(n) + " agents");
  for (double v : cfg.x1)
    if (!(v >= 0.0 && v <= 1.0)) throw InvalidArgument("config: opinions must lie in [0,1]");
  if (cfg.t_max < 1) throw InvalidArgument("config: t_max must be >= 1");
  int prev = -1;
  for (int k : cfg.stubborn) {
    if (k < 0 || k >= n) throw InvalidArgument("config: stubborn agent out of range");
    if (k <= prev) throw InvalidArgument("config: stubborn list must be strictly ascending");
    prev = k;
    const bool binary = cfg.x1[k] == 0.0 || cfg.x1[k] == 1.0;
    const bool self_loop = cfg.w(k, k) == 1.0;
    if (!binary && !self_loop)
      throw InvalidArgument("config: stubborn agent " + std::to_string(k) +
                            " needs opinion in {0,1} or a unit self-loop row");
  }
}

namespace detail {

inline std::uint64_t fnv1a(const void* data, std::size_t len, std::uint64_t h) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 1099511628211ull;
  }
  return h;
}

template <typename T>
std::uint64_t fnv1a_value(const T& v, std::uint64_t h) {
  return fnv1a(&v, sizeof v, h);
}

// x' = x + alpha (W a - x): algebraically the same update, but in increment
// form both consensus corners are exact fixed points in floating point
// (the increment is exactly zero there when row sums are exact).
inline void update_opinions(const WeightMatrix& w, double alpha, const std::vector<double>& x,
                            const std::vector<std::uint8_t>& a, std::vector<double>& out) {
  const int n = w.size();
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int j = 0; j < n; ++j)
      if (a[j]) s += w(i, j);
    double v = x[i] + alpha * (s - x[i]);
    out[i] = v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v);  // clamp absorbs row-sum tolerance
  }
}

}  // namespace detail

// 16 hex digits identifying the generating config (FNV-1a over all fields).
inline std::string config_digest(const SimulationConfig& cfg) {
  std::uint64_t h = 14695981039346656037ull;
  h = detail::fnv1a("herdlab.config.v1", 17, h);
  h = detail::fnv1a_value(cfg.w.size(), h);
  for (double v : cfg.w.entries()) h = detail::fnv1a_value(v, h);
  h = detail::fnv1a_value(cfg.alpha, h);
  for (double v : cfg.x1) h = detail::fnv1a_value(v, h);
  h = detail::fnv1a_value(cfg.t_max, h);
  h = detail::fnv1a_value(cfg.seed, h);
  h = detail::fnv1a_value(cfg.stubborn.size(), h);
  for (int k : cfg.stubborn) h = detail::fnv1a_value(k, h);
  h = detail::fnv1a_value(cfg.record_actions, h);
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

// One independent Bernoulli(x_i) draw per agent, ascending index order
// (the order is part of the reproducibility contract).
inline ActionVector sample_actions(const OpinionState& state, Xoshiro256PlusPlus& rng) {
  ActionVector av;
  av.t = state.t;
  av.a.resize(state.x.size());
  for (std::size_t i = 0; i < state.x.size(); ++i)
    av.a[i] = bernoulli(rng, state.x[i]) ? 1 : 0;
  return av;
}

inline OpinionState step(const OpinionState& state, const ActionVector& actions,
                         const WeightMatrix& w, double alpha,
                         const std::vector<int>& stubborn = {}) {
  const int n = w.size();
  if (static_cast<int>(state.x.size()) != n || static_cast<int>(actions.a.size()) != n)
    throw DimensionMismatch("step: state/action size does not match the matrix");
  for (int k : stubborn)
    if (k < 0 || k >= n) throw InvalidArgument("step: stubborn agent out of range");
  OpinionState next;
  next.t = state.t + 1;
  next.x.resize(n);
  detail::update_opinions(w, alpha, state.x, actions.a, next.x);
  for (int k : stubborn) next.x[k] = state.x[k];
  return next;
}

inline Trajectory simulate(const SimulationConfig& cfg) {
  validate_config(cfg);
  const long long stride =
      cfg.t_max <= kFullHistoryStates ? 1 : (cfg.t_max + kFullHistoryStates - 1) / kFullHistoryStates;
  if (cfg.record_actions && stride > 1)
    throw InvalidArgument("simulate: action recording needs full history (t_max <= " +
                          std::to_string(kFullHistoryStates) + ")");
  Trajectory traj;
  traj.stride = stride;
  traj.config_digest = config_digest(cfg);
  const auto stored = [&](long long t) {
    return stride == 1 || (t - 1) % stride == 0 || t > cfg.t_max - kDecimatedTail;
  };

  Xoshiro256PlusPlus rng = run_stream(cfg.seed, 0);
  OpinionState state{1, cfg.x1};
  if (stored(1)) traj.states.push_back(state);
  for (long long t = 1; t < cfg.t_max; ++t) {
    ActionVector a = sample_actions(state, rng);
    OpinionState next = step(state, a, cfg.w, cfg.alpha, cfg.stubborn);
    if (cfg.record_actions) traj.actions.push_back(std::move(a));
    state = std::move(next);
    if (stored(state.t)) traj.states.push_back(state);
  }
  return traj;
}

// Replays the update rule over recorded actions; true when every stored
// transition reproduces bit for bit.
inline bool trajectory_satisfies_update(const Trajectory& traj, const WeightMatrix& w,
                                        double alpha, const std::vector<int>& stubborn = {}) {
  if (traj.actions.empty() || traj.stride != 1) return false;
  for (std::size_t k = 0; k + 1 < traj.states.size(); ++k) {
    OpinionState next = step(traj.states[k], traj.actions[k], w, alpha, stubborn);
    if (next.x != traj.states[k + 1].x || next.t != traj.states[k + 1].t) return false;
  }
  return true;
}

}  // namespace herdlab
