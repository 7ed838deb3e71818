// Copyright 2026 The commdet Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Core>

#include "commdet/graph.hpp"

namespace commdet {

enum class CommunityMode { kAssociative, kDisassociative };

enum class RegMode {
  kNormalized,  // cluster masses normalized by N, balanced U gives R = 0
  kLiteral,     // raw column sums compared against 1/C
};

struct LossConfig {
  CommunityMode mode = CommunityMode::kAssociative;
  double lambda = 0.5;
  int clusters = 5;
  RegMode reg_mode = RegMode::kNormalized;
};

// Q(U) = trace(U^T B U) / ||A||_1, matrix-free. Row sums of U must be within
// 1e-4 of one. Positive for associative partitions, negative for
// disassociative ones; |Q| <= 1.
double soft_modularity(const Graph& g, const Eigen::MatrixXd& u);

// Normalized: R = sum_c (m_c - 1/C)^2 with m_c = (sum_n U_nc) / N.
// Literal: raw column sums in place of m_c.
double balance_regularizer(const Eigen::MatrixXd& u, int clusters, RegMode reg_mode);

// Associative: L = -Q + lambda R. Disassociative: L = +Q + lambda R.
double loss(const Graph& g, const Eigen::MatrixXd& u, const LossConfig& cfg);

// dL/dU in closed form: dQ/dU = 2 B U / ||A||_1 plus the regularizer term,
// signed by mode.
Eigen::MatrixXd loss_grad_u(const Graph& g, const Eigen::MatrixXd& u,
                            const LossConfig& cfg);

}  // namespace commdet
