// Copyright 2026 The commdet Authors.
// SPDX-License-Identifier: Apache-2.0

#include "commdet/graph.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace commdet {

Graph::Graph(int n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)) {
  if (n < 0) throw std::invalid_argument("graph: negative node count");
  for (auto& [u, v] : edges_) {
    if (u == v) throw std::invalid_argument("graph: self-loop at node " + std::to_string(u));
    if (u > v) std::swap(u, v);
    if (u < 0 || v >= n_) {
      throw std::invalid_argument("graph: edge (" + std::to_string(u) + "," +
                                  std::to_string(v) + ") out of range for n=" +
                                  std::to_string(n_));
    }
  }
  std::sort(edges_.begin(), edges_.end());
  if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end()) {
    throw std::invalid_argument("graph: duplicate edge");
  }

  degrees_.assign(n_, 0);
  for (const auto& [u, v] : edges_) {
    ++degrees_[u];
    ++degrees_[v];
  }
  offsets_.assign(n_ + 1, 0);
  for (int u = 0; u < n_; ++u) offsets_[u + 1] = offsets_[u] + degrees_[u];

  adjacency_.resize(2 * edges_.size());
  std::vector<int> cursor(offsets_.begin(), offsets_.end() - 1);
  for (const auto& [u, v] : edges_) {
    adjacency_[cursor[u]++] = v;
    adjacency_[cursor[v]++] = u;
  }
  for (int u = 0; u < n_; ++u) {
    std::sort(adjacency_.begin() + offsets_[u], adjacency_.begin() + offsets_[u + 1]);
  }
  a1_norm_ = 2.0 * static_cast<double>(edges_.size());
}

bool Graph::has_edge(int u, int v) const {
  const auto nbrs = neighbors(u);
  return std::binary_search(nbrs.begin(), nbrs.end(), v);
}

Graph Graph::permuted(const std::vector<int>& perm) const {
  if (static_cast<int>(perm.size()) != n_) {
    throw std::invalid_argument("permuted: permutation size mismatch");
  }
  std::vector<Edge> relabeled;
  relabeled.reserve(edges_.size());
  for (const auto& [u, v] : edges_) relabeled.emplace_back(perm[u], perm[v]);
  return Graph(n_, std::move(relabeled));
}

}  // namespace commdet
