// Copyright 2026 The commdet Authors.
// SPDX-License-Identifier: Apache-2.0

#include "commdet/ssbm.hpp"

#include <numeric>
#include <stdexcept>

#include "commdet/rng.hpp"

namespace commdet {

static void validate(const SsbmParams& p) {
  if (p.n < 1 || p.k < 1 || p.n < p.k) {
    throw std::invalid_argument("ssbm: require n >= k >= 1");
  }
  const double n = static_cast<double>(p.n);
  if (p.a < 0.0 || p.b < 0.0 || p.a > n || p.b > n) {
    throw std::invalid_argument("ssbm: intensities must give probabilities in [0,1]");
  }
}

double snr(const SsbmParams& p) {
  validate(p);
  const double denom = p.k * (p.a + (p.k - 1) * p.b);
  if (denom == 0.0) {
    throw std::invalid_argument("snr: undefined for a = b = 0");
  }
  const double diff = p.a - p.b;
  return diff * diff / denom;
}

std::pair<Graph, LabelVector> ssbm_generate(const SsbmParams& p,
                                            std::uint64_t seed) {
  validate(p);
  Rng rng(seed);

  std::vector<int> order(p.n);
  std::iota(order.begin(), order.end(), 0);
  rng.shuffle(order);
  LabelVector labels(p.n);
  for (int i = 0; i < p.n; ++i) labels[order[i]] = i % p.k;

  const double p_in = p.a / p.n;
  const double p_out = p.b / p.n;
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(0.6 * p.n * (p.a + (p.k - 1) * p.b) / p.k) + 16);
  for (int u = 0; u < p.n; ++u) {
    for (int v = u + 1; v < p.n; ++v) {
      const double prob = labels[u] == labels[v] ? p_in : p_out;
      if (rng.uniform() < prob) edges.emplace_back(u, v);
    }
  }
  return {Graph(p.n, std::move(edges)), std::move(labels)};
}

}  // namespace commdet
