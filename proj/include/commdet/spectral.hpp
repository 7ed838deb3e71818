// Copyright 2026 The commdet Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>

#include "commdet/graph.hpp"
#include "commdet/objective.hpp"
#include "commdet/operators.hpp"
#include "commdet/ssbm.hpp"

namespace commdet {

// r = +|r| for associative graphs, -|r| for disassociative. Standard mode
// takes |r| = sqrt(rho(B)) with B the non-backtracking operator; literal mode
// takes |r| = rho(B) itself.
enum class RMode { kStandard, kLiteral };

struct RadiusEstimate {
  double rho = 0.0;  // non-backtracking spectral radius estimate
  double r = 0.0;    // signed Bethe Hessian parameter
  bool converged = false;  // false: power iteration stalled, degree-moment fallback used
  int iterations = 0;
};

// Power iteration on the 2N x 2N Ihara-Bass companion operator
// (x, y) -> (A x + (I - D) y, x), whose nontrivial spectrum matches the
// non-backtracking operator's. Falls back to sum(d^2)/sum(d) - 1 when the
// growth ratio does not settle (e.g. several eigenvalues share the radius).
RadiusEstimate estimate_r(const Graph& g, CommunityMode mode,
                          RMode r_mode = RMode::kStandard);

using LinearOperator = std::function<Vector(const Vector&)>;

struct EigenPairs {
  Vector values;      // ascending
  Matrix vectors;     // orthonormal columns
  Vector residuals;   // ||op(v) - lambda v|| per pair
};

struct EigenOptions {
  double residual_tol = 1e-9;   // per-pair bound, relative to max(1, |lambda|)
  int dense_threshold = 512;    // at or below: dense symmetric path
  std::uint64_t start_seed = 0x5eed5eedULL;
};

// k algebraically smallest eigenpairs of a symmetric operator. Dense
// tridiagonalization up to dense_threshold, Lanczos with full
// reorthogonalization beyond; both meet the same residual contract.
// Throws std::runtime_error with achieved residuals on non-convergence.
EigenPairs smallest_eigenpairs(const LinearOperator& op, int dim, int k,
                               const EigenOptions& opts = {});
EigenPairs smallest_eigenpairs_dense(const LinearOperator& op, int dim, int k);
EigenPairs smallest_eigenpairs_lanczos(const LinearOperator& op, int dim, int k,
                                       const EigenOptions& opts = {});

// The k smallest eigenvectors of H(r); doubles as the baseline clustering
// space and the neural model's input features.
struct SpectralEmbedding {
  Matrix vectors;  // N x k, unit-norm columns
  Vector values;   // ascending
  double r = 0.0;
  bool radius_converged = true;
};

SpectralEmbedding bethe_hessian_embedding(const Graph& g, int k, CommunityMode mode,
                                          RMode r_mode = RMode::kStandard);

struct BethesianClustering {
  LabelVector labels;
  SpectralEmbedding embedding;
};

// estimate_r -> eigenpairs of H -> k-means on eigenvector rows.
BethesianClustering bethe_hessian_cluster(const Graph& g, int k, CommunityMode mode,
                                          std::uint64_t seed,
                                          RMode r_mode = RMode::kStandard);

}  // namespace commdet
