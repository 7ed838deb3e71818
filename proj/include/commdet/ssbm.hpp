// Copyright 2026 The commdet Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "commdet/graph.hpp"

namespace commdet {

// Hard community assignment, one label in [0, k) per node.
using LabelVector = std::vector<int>;

// Symmetric stochastic block model with within-pair probability a/n and
// cross-pair probability b/n.
struct SsbmParams {
  int n = 0;
  int k = 1;
  double a = 0.0;
  double b = 0.0;
};

// (a-b)^2 / (k(a + (k-1)b)). Throws std::invalid_argument when the
// denominator vanishes (a = b = 0).
double snr(const SsbmParams& params);

// Samples a graph and its planted labels. Communities are exactly balanced
// (sizes differ by at most one, node i -> i mod k before a seed-driven
// shuffle); every unordered pair is an independent Bernoulli draw.
std::pair<Graph, LabelVector> ssbm_generate(const SsbmParams& params,
                                            std::uint64_t seed);

}  // namespace commdet
