#pragma once
// CSV reports for ensembles and function grids. Nothing here depends on wall
// time or thread count, so equal inputs produce byte-identical files.

#include <ostream>
#include <string>
#include <vector>

#include "herdlab/csv.hpp"
#include "herdlab/ensemble.hpp"
#include "herdlab/g_function.hpp"

namespace herdlab {

namespace detail {

inline MetaLines ensemble_meta(const Ensemble& ens) {
  MetaLines meta;
  meta.emplace_back("config_digest", config_digest(ens.config));
  meta.emplace_back("seed", std::to_string(ens.master_seed));
  return meta;
}

}  // namespace detail

// Aggregate key/value table: verdict counts plus the defining parameters.
inline void write_ensemble_summary_csv(std::ostream& out, const Ensemble& ens) {
  write_meta(out, detail::ensemble_meta(ens));
  write_csv_row(out, {"key", "value"});
  std::uint64_t kind_count[4] = {0, 0, 0, 0};
  std::uint64_t decided = 0;
  double first_hit_sum = 0.0;
  for (const auto& run : ens.runs) {
    kind_count[static_cast<int>(run.verdict.kind)]++;
    if (run.verdict.first_hit) {
      ++decided;
      first_hit_sum += static_cast<double>(*run.verdict.first_hit);
    }
  }
  const auto row = [&](const std::string& k, const std::string& v) {
    write_csv_row(out, {k, v});
  };
  row("runs", std::to_string(ens.run_count));
  row("agents", std::to_string(ens.config.w.size()));
  row("alpha", format_g17(ens.config.alpha));
  row("t_max", std::to_string(ens.config.t_max));
  row("delta", format_g17(ens.analysis.delta));
  row("window", std::to_string(ens.analysis.window));
  row("consensus_0", std::to_string(kind_count[0]));
  row("consensus_1", std::to_string(kind_count[1]));
  row("non_consensus", std::to_string(kind_count[2]));
  row("undecided", std::to_string(kind_count[3]));
  row("fraction_consensus_1",
      format_g17(static_cast<double>(kind_count[1]) / static_cast<double>(ens.run_count)));
  if (decided > 0)
    row("mean_first_hit", format_g17(first_hit_sum / static_cast<double>(decided)));
}

// Corner probabilities at every probe time plus the horizon.
inline void write_corner_table_csv(std::ostream& out, const Ensemble& ens, double delta) {
  write_meta(out, detail::ensemble_meta(ens));
  write_csv_row(out, {"t", "runs", "count_zero", "count_one", "count_mixed", "p_zero", "p_one",
                      "p_mixed", "p_corner_any"});
  std::vector<long long> times;
  if (!ens.runs.empty())
    for (const auto& probe : ens.runs.front().probes) times.push_back(probe.t);
  if (times.empty() || times.back() != ens.config.t_max) times.push_back(ens.config.t_max);
  for (long long t : times) {
    const CornerProbability p = empirical_corner_probability(ens, t, delta);
    write_csv_row(out, {std::to_string(p.t), std::to_string(p.runs), std::to_string(p.count_zero),
                        std::to_string(p.count_one), std::to_string(p.count_mixed),
                        format_g17(p.p_zero), format_g17(p.p_one), format_g17(p.p_mixed),
                        format_g17(p.p_corner_any)});
  }
}

// One row per run: verdict, per-component statuses, first hit, final state.
inline void write_run_summaries_csv(std::ostream& out, const Ensemble& ens) {
  write_meta(out, detail::ensemble_meta(ens));
  std::vector<std::string> cells = {"run", "kind", "first_hit"};
  for (int r = 0; r < ens.scc.count(); ++r) cells.push_back("c" + std::to_string(r + 1));
  for (int i = 0; i < ens.config.w.size(); ++i) cells.push_back("x" + std::to_string(i + 1));
  write_csv_row(out, cells);
  for (const auto& run : ens.runs) {
    cells.clear();
    cells.push_back(std::to_string(run.run_index));
    cells.push_back(to_string(run.verdict.kind));
    cells.push_back(run.verdict.first_hit ? std::to_string(*run.verdict.first_hit)
                                          : std::string());
    for (auto status : run.verdict.per_component) cells.push_back(to_string(status));
    for (double v : run.final_x) cells.push_back(format_g17(v));
    write_csv_row(out, cells);
  }
}

// gamma grid rows, one g column per alpha. The first data row is gamma = 0,
// where every column equals 1.
inline void write_g_grid_csv(std::ostream& out, const std::vector<double>& alphas, int n,
                             const std::vector<double>& gammas) {
  MetaLines meta;
  meta.emplace_back("n", std::to_string(n));
  std::string alpha_list;
  for (std::size_t k = 0; k < alphas.size(); ++k)
    alpha_list += (k ? " " : "") + format_g17(alphas[k]);
  meta.emplace_back("alphas", alpha_list);
  write_meta(out, meta);
  std::vector<std::string> cells = {"gamma"};
  for (std::size_t k = 1; k <= alphas.size(); ++k) cells.push_back("g" + std::to_string(k));
  write_csv_row(out, cells);
  for (double gamma : gammas) {
    cells.clear();
    cells.push_back(format_g17(gamma));
    for (double alpha : alphas) cells.push_back(format_g17(g_function(alpha, n, gamma)));
    write_csv_row(out, cells);
  }
}

// Evenly spaced grids used by the CLI: k points from lo to hi inclusive.
inline std::vector<double> linspace(double lo, double hi, int k) {
  if (k < 2) throw InvalidArgument("linspace: need at least 2 points");
  std::vector<double> out(k);
  for (int i = 0; i < k; ++i)
    out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(k - 1);
  out.front() = lo;
  out.back() = hi;
  return out;
}

}  // namespace herdlab
