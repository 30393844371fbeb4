#pragma once
// Strongly connected components of the influence digraph and the partial
// order they generate. Components communicate when each can reach the other;
// the empty path counts, so every agent communicates with itself and
// singleton components need no self-loop.

#include <algorithm>
#include <utility>
#include <vector>

#include "herdlab/weight_matrix.hpp"

namespace herdlab {

struct SccPoset {
  // members ascending; components numbered by smallest member (canonical)
  std::vector<std::vector<int>> components;
  // order[r][s]: C_r precedes C_s, i.e. a directed path runs from C_s into C_r
  std::vector<std::vector<bool>> order;
  // (r,s): C_s covers C_r; no third component sits strictly between
  std::vector<std::pair<int, int>> covers;
  std::vector<int> maximal;
  std::vector<int> minimal;
  // agent -> component index (derived convenience)
  std::vector<int> component_of;

  int count() const { return static_cast<int>(components.size()); }
};

namespace detail {

// Tarjan's single pass; components come out in reverse topological order and
// are renumbered canonically afterwards.
struct Tarjan {
  const std::vector<std::vector<int>>& adj;
  std::vector<int> dfs_num, low, stack;
  std::vector<bool> on_stack;
  std::vector<std::vector<int>> sccs;
  int counter = 0;

  explicit Tarjan(const std::vector<std::vector<int>>& adj_)
      : adj(adj_),
        dfs_num(adj_.size(), -1),
        low(adj_.size(), 0),
        on_stack(adj_.size(), false) {}

  void visit(int u) {
    dfs_num[u] = low[u] = counter++;
    stack.push_back(u);
    on_stack[u] = true;
    for (int v : adj[u]) {
      if (dfs_num[v] < 0) {
        visit(v);
        low[u] = std::min(low[u], low[v]);
      } else if (on_stack[v]) {
        low[u] = std::min(low[u], dfs_num[v]);
      }
    }
    if (low[u] == dfs_num[u]) {
      std::vector<int> scc;
      int v;
      do {
        v = stack.back();
        stack.pop_back();
        on_stack[v] = false;
        scc.push_back(v);
      } while (v != u);
      sccs.push_back(std::move(scc));
    }
  }
};

}  // namespace detail

inline SccPoset strongly_connected_components(const WeightMatrix& w) {
  const int n = w.size();
  std::vector<std::vector<int>> adj(n);  // adj[u]: agents that listen to u
  for (int u = 0; u < n; ++u) adj[u] = w.successors(u);

  detail::Tarjan tarjan(adj);
  for (int u = 0; u < n; ++u)
    if (tarjan.dfs_num[u] < 0) tarjan.visit(u);

  SccPoset poset;
  poset.components = std::move(tarjan.sccs);
  for (auto& comp : poset.components) std::sort(comp.begin(), comp.end());
  std::sort(poset.components.begin(), poset.components.end(),
            [](const std::vector<int>& a, const std::vector<int>& b) { return a[0] < b[0]; });

  const int m = poset.count();
  poset.component_of.assign(n, -1);
  for (int r = 0; r < m; ++r)
    for (int agent : poset.components[r]) poset.component_of[agent] = r;

  // condensation reachability: reach[a][b] means a directed path a -> b
  std::vector<std::vector<bool>> reach(m, std::vector<bool>(m, false));
  for (int a = 0; a < m; ++a) reach[a][a] = true;
  for (int u = 0; u < n; ++u)
    for (int v : adj[u]) reach[poset.component_of[u]][poset.component_of[v]] = true;
  for (int k = 0; k < m; ++k)
    for (int a = 0; a < m; ++a)
      if (reach[a][k])
        for (int b = 0; b < m; ++b)
          if (reach[k][b]) reach[a][b] = true;

  // C_r precedes C_s exactly when influence flows from C_s to C_r
  poset.order.assign(m, std::vector<bool>(m, false));
  for (int r = 0; r < m; ++r)
    for (int s = 0; s < m; ++s) poset.order[r][s] = reach[s][r];

  for (int r = 0; r < m; ++r) {
    for (int s = 0; s < m; ++s) {
      if (r == s || !poset.order[r][s]) continue;
      bool between = false;
      for (int t = 0; t < m && !between; ++t)
        if (t != r && t != s && poset.order[r][t] && poset.order[t][s]) between = true;
      if (!between) poset.covers.emplace_back(r, s);
    }
  }
  std::sort(poset.covers.begin(), poset.covers.end());

  for (int r = 0; r < m; ++r) {
    bool is_max = true, is_min = true;
    for (int s = 0; s < m; ++s) {
      if (s == r) continue;
      if (poset.order[r][s]) is_max = false;
      if (poset.order[s][r]) is_min = false;
    }
    if (is_max) poset.maximal.push_back(r);
    if (is_min) poset.minimal.push_back(r);
  }
  return poset;
}

inline bool is_irreducible(const WeightMatrix& w) {
  return strongly_connected_components(w).count() == 1;
}

}  // namespace herdlab
