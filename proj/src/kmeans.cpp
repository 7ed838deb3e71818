// Copyright 2026 The commdet Authors.
// SPDX-License-Identifier: Apache-2.0

#include "commdet/kmeans.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "commdet/rng.hpp"

namespace commdet {

namespace {

// Squared distance from every point to its nearest centroid, and the label.
double assign_labels(const Matrix& points, const Matrix& centroids,
                     LabelVector& labels) {
  double wcss = 0.0;
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    int best_c = 0;
    for (Eigen::Index c = 0; c < centroids.rows(); ++c) {
      const double d2 = (points.row(i) - centroids.row(c)).squaredNorm();
      if (d2 < best) {
        best = d2;
        best_c = static_cast<int>(c);
      }
    }
    labels[i] = best_c;
    wcss += best;
  }
  return wcss;
}

Matrix kmeanspp_seed(const Matrix& points, int k, Rng& rng) {
  const Eigen::Index n = points.rows();
  Matrix centroids(k, points.cols());
  centroids.row(0) = points.row(static_cast<Eigen::Index>(rng.uniform_int(n)));
  Vector d2 = (points.rowwise() - centroids.row(0)).rowwise().squaredNorm();
  for (int c = 1; c < k; ++c) {
    const double total = d2.sum();
    Eigen::Index pick;
    if (total <= 0.0) {
      pick = static_cast<Eigen::Index>(rng.uniform_int(n));
    } else {
      const double target = rng.uniform() * total;
      double acc = 0.0;
      pick = n - 1;
      for (Eigen::Index i = 0; i < n; ++i) {
        acc += d2[i];
        if (acc >= target && d2[i] > 0.0) {
          pick = i;
          break;
        }
      }
    }
    centroids.row(c) = points.row(pick);
    d2 = d2.cwiseMin((points.rowwise() - centroids.row(c)).rowwise().squaredNorm());
  }
  return centroids;
}

}  // namespace

KmeansResult kmeans(const Matrix& points, int k, std::uint64_t seed,
                    const KmeansOptions& opts) {
  const Eigen::Index n = points.rows();
  if (k < 1) throw std::invalid_argument("kmeans: need k >= 1");
  if (n < k) throw std::invalid_argument("kmeans: need at least k points");

  KmeansResult best;
  best.wcss = std::numeric_limits<double>::infinity();

  for (int rep = 0; rep < opts.restarts; ++rep) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(rep)));
    Matrix centroids = kmeanspp_seed(points, k, rng);
    LabelVector labels(n, 0);
    std::vector<double> trace;
    double prev_wcss = std::numeric_limits<double>::infinity();
    double wcss = 0.0;

    for (int iter = 0; iter < opts.max_iterations; ++iter) {
      assign_labels(points, centroids, labels);

      std::vector<Eigen::Index> counts(k, 0);
      for (Eigen::Index i = 0; i < n; ++i) ++counts[labels[i]];
      for (int c = 0; c < k; ++c) {
        if (counts[c] > 0) continue;
        // Reseed the empty cluster to the point farthest from its centroid.
        double farthest = -1.0;
        Eigen::Index pick = 0;
        for (Eigen::Index i = 0; i < n; ++i) {
          const double d2 = (points.row(i) - centroids.row(labels[i])).squaredNorm();
          if (d2 > farthest) {
            farthest = d2;
            pick = i;
          }
        }
        --counts[labels[pick]];
        labels[pick] = c;
        counts[c] = 1;
        centroids.row(c) = points.row(pick);
      }

      centroids.setZero();
      for (Eigen::Index i = 0; i < n; ++i) centroids.row(labels[i]) += points.row(i);
      for (int c = 0; c < k; ++c) centroids.row(c) /= static_cast<double>(counts[c]);

      wcss = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        wcss += (points.row(i) - centroids.row(labels[i])).squaredNorm();
      }
      trace.push_back(wcss);
      if (wcss > prev_wcss + 1e-9 * std::max(1.0, prev_wcss)) {
        throw std::logic_error("kmeans: objective increased across Lloyd iterations");
      }
      if (std::isfinite(prev_wcss) &&
          prev_wcss - wcss <= opts.rel_tol * std::max(prev_wcss, 1e-30)) {
        break;
      }
      prev_wcss = wcss;
    }

    if (wcss < best.wcss) {
      best.labels = labels;
      best.centroids = centroids;
      best.wcss = wcss;
      best.wcss_trace = std::move(trace);
    }
  }
  return best;
}

}  // namespace commdet
