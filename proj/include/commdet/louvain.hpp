// Copyright 2026 The commdet Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "commdet/graph.hpp"
#include "commdet/ssbm.hpp"

namespace commdet {

// Aggregated graph for the coarsening phase. Edges are held in both
// directions; self_weight stores intra-community mass in ordered-pair
// convention, so total weight 2m is preserved across levels.
struct WeightedAggGraph {
  int n = 0;
  std::vector<std::vector<std::pair<int, double>>> adj;
  std::vector<double> self_weight;
  std::vector<double> strength;  // per-node weighted degree incl. self
  double total_weight = 0.0;     // 2m

  static WeightedAggGraph from_graph(const Graph& g);
  WeightedAggGraph aggregate(const std::vector<int>& community,
                             int community_count) const;
};

struct LouvainResult {
  LabelVector labels;        // final flattened assignment, consecutive ids
  double modularity = 0.0;
  int levels = 0;
  std::vector<double> q_trace;             // after every accepted move
  std::vector<double> level_total_weight;  // 2m per level, conservation check
};

// Greedy modularity maximization: seed-shuffled local moves with gain
// threshold 1e-7, then community aggregation, repeated until a level yields
// no improvement. The community count is not constrained.
LouvainResult louvain(const Graph& g, std::uint64_t seed);

}  // namespace commdet
