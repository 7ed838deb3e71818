// Copyright 2026 The commdet Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include "commdet/operators.hpp"
#include "commdet/ssbm.hpp"

namespace commdet {

struct KmeansOptions {
  int restarts = 10;
  int max_iterations = 100;
  double rel_tol = 1e-6;
};

struct KmeansResult {
  LabelVector labels;
  Matrix centroids;            // k x dim
  double wcss = 0.0;           // within-cluster sum of squares
  std::vector<double> wcss_trace;  // per Lloyd iteration of the winning restart
};

// Lloyd's algorithm with k-means++ seeding. All k labels are used: an empty
// cluster is reseeded to the point farthest from its assigned centroid.
// Distance ties break toward the lowest cluster index; restart ties toward
// the lowest restart index. Deterministic per seed.
KmeansResult kmeans(const Matrix& points, int k, std::uint64_t seed,
                    const KmeansOptions& opts = {});

}  // namespace commdet
