// Copyright 2026 The commdet Authors.
// SPDX-License-Identifier: Apache-2.0

#include "commdet/louvain.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

#include "commdet/rng.hpp"

namespace commdet {

namespace {
constexpr double kGainThreshold = 1e-7;
}

WeightedAggGraph WeightedAggGraph::from_graph(const Graph& g) {
  WeightedAggGraph w;
  w.n = g.num_nodes();
  w.adj.resize(w.n);
  w.self_weight.assign(w.n, 0.0);
  w.strength.assign(w.n, 0.0);
  for (const auto& [u, v] : g.edges()) {
    w.adj[u].emplace_back(v, 1.0);
    w.adj[v].emplace_back(u, 1.0);
  }
  for (int u = 0; u < w.n; ++u) w.strength[u] = static_cast<double>(g.degree(u));
  w.total_weight = g.a1_norm();
  return w;
}

WeightedAggGraph WeightedAggGraph::aggregate(const std::vector<int>& community,
                                             int community_count) const {
  WeightedAggGraph out;
  out.n = community_count;
  out.adj.resize(out.n);
  out.self_weight.assign(out.n, 0.0);
  out.strength.assign(out.n, 0.0);
  out.total_weight = total_weight;

  for (int u = 0; u < n; ++u) out.self_weight[community[u]] += self_weight[u];
  std::vector<std::unordered_map<int, double>> cross(out.n);
  for (int u = 0; u < n; ++u) {
    const int cu = community[u];
    for (const auto& [v, weight] : adj[u]) {
      const int cv = community[v];
      if (cu == cv) {
        out.self_weight[cu] += weight;  // both directions pass here: ordered sum
      } else {
        cross[cu][cv] += weight;
      }
    }
  }
  for (int c = 0; c < out.n; ++c) {
    out.adj[c].assign(cross[c].begin(), cross[c].end());
    std::sort(out.adj[c].begin(), out.adj[c].end());
    out.strength[c] = out.self_weight[c];
    for (const auto& [other, weight] : out.adj[c]) out.strength[c] += weight;
  }
  return out;
}

namespace {

struct LevelState {
  std::vector<int> community;
  std::vector<double> tot;  // strength sum per community
  double q = 0.0;
};

double modularity_of_singletons(const WeightedAggGraph& g) {
  double q = 0.0;
  const double two_m = g.total_weight;
  for (int u = 0; u < g.n; ++u) {
    q += g.self_weight[u] / two_m - (g.strength[u] / two_m) * (g.strength[u] / two_m);
  }
  return q;
}

// One full local-moving phase; returns the number of accepted moves.
int local_moving(const WeightedAggGraph& g, LevelState& state, Rng& rng,
                 std::vector<double>& q_trace) {
  const double two_m = g.total_weight;
  std::vector<int> order(g.n);
  std::iota(order.begin(), order.end(), 0);
  rng.shuffle(order);

  std::vector<double> neighbor_weight(g.n, 0.0);
  int total_moves = 0;
  bool moved = true;
  while (moved) {
    moved = false;
    for (int u : order) {
      const int old_c = state.community[u];
      const double k_u = g.strength[u];

      std::vector<int> touched;
      for (const auto& [v, weight] : g.adj[u]) {
        const int c = state.community[v];
        if (neighbor_weight[c] == 0.0) touched.push_back(c);
        neighbor_weight[c] += weight;
      }

      state.tot[old_c] -= k_u;
      const double remove_gain =
          -(2.0 * neighbor_weight[old_c] / two_m -
            2.0 * state.tot[old_c] * k_u / (two_m * two_m));

      int best_c = old_c;
      double best_gain = 0.0;  // staying put
      for (int c : touched) {
        if (c == old_c) continue;
        const double gain = remove_gain + 2.0 * neighbor_weight[c] / two_m -
                            2.0 * state.tot[c] * k_u / (two_m * two_m);
        if (gain > best_gain || (gain == best_gain && best_c != old_c && c < best_c)) {
          best_gain = gain;
          best_c = c;
        }
      }
      if (best_gain <= kGainThreshold) best_c = old_c;

      state.tot[best_c] += k_u;
      for (int c : touched) neighbor_weight[c] = 0.0;
      if (best_c != old_c) {
        state.community[u] = best_c;
        state.q += best_gain;
        q_trace.push_back(state.q);
        moved = true;
        ++total_moves;
      }
    }
  }
  return total_moves;
}

int renumber(std::vector<int>& community) {
  std::vector<int> remap(community.size(), -1);
  int next = 0;
  for (int& c : community) {
    if (remap[c] < 0) remap[c] = next++;
    c = remap[c];
  }
  return next;
}

}  // namespace

LouvainResult louvain(const Graph& g, std::uint64_t seed) {
  if (g.num_edges() == 0) throw std::invalid_argument("louvain: graph has no edges");

  LouvainResult result;
  WeightedAggGraph level = WeightedAggGraph::from_graph(g);
  std::vector<int> flat(g.num_nodes());
  std::iota(flat.begin(), flat.end(), 0);

  double q = modularity_of_singletons(level);
  int level_index = 0;
  while (true) {
    result.level_total_weight.push_back(level.total_weight);
    LevelState state;
    state.community.resize(level.n);
    std::iota(state.community.begin(), state.community.end(), 0);
    state.tot = level.strength;
    state.q = q;

    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(level_index)));
    const int moves = local_moving(level, state, rng, result.q_trace);
    ++level_index;
    if (moves == 0) break;

    const int count = renumber(state.community);
    for (int& c : flat) c = state.community[c];
    level = level.aggregate(state.community, count);
    q = state.q;
    if (count == static_cast<int>(state.community.size())) break;
  }

  result.levels = level_index;
  result.labels = flat;
  renumber(result.labels);
  result.modularity = modularity_of_singletons(level);
  return result;
}

}  // namespace commdet
