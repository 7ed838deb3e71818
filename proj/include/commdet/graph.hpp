// Copyright 2026 The commdet Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace commdet {

using Edge = std::pair<int, int>;

// Immutable undirected simple graph in compressed sparse adjacency form.
// Shared freely across threads after construction.
class Graph {
 public:
  // Edges may arrive in any order; (u,v) is normalized to u < v. Throws
  // std::invalid_argument on self-loops, duplicates, or out-of-range ids.
  Graph(int n, std::vector<Edge> edges);

  int num_nodes() const { return n_; }
  int num_edges() const { return static_cast<int>(edges_.size()); }

  const std::vector<Edge>& edges() const { return edges_; }

  std::span<const int> neighbors(int u) const {
    return {adjacency_.data() + offsets_[u],
            adjacency_.data() + offsets_[u + 1]};
  }

  int degree(int u) const { return offsets_[u + 1] - offsets_[u]; }
  const std::vector<int>& degrees() const { return degrees_; }

  // ||A||_1 = sum |A_ij| = 2 * edge count = sum of degrees.
  double a1_norm() const { return a1_norm_; }

  bool has_edge(int u, int v) const;

  // Relabels node u to perm[u]; used by the permutation-equivariance tests.
  Graph permuted(const std::vector<int>& perm) const;

 private:
  int n_ = 0;
  std::vector<Edge> edges_;       // sorted, u < v, unique
  std::vector<int> offsets_;      // size n+1
  std::vector<int> adjacency_;    // per-node sorted neighbor lists
  std::vector<int> degrees_;
  double a1_norm_ = 0.0;
};

}  // namespace commdet
