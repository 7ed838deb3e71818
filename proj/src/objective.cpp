// Copyright 2026 The commdet Authors.
// SPDX-License-Identifier: Apache-2.0

#include "commdet/objective.hpp"

#include <stdexcept>

#include "commdet/operators.hpp"

namespace commdet {

namespace {

void check_rows(const Graph& g, const Eigen::MatrixXd& u) {
  if (u.rows() != g.num_nodes()) {
    throw std::invalid_argument("objective: U row count != node count");
  }
}

void check_row_stochastic(const Eigen::MatrixXd& u) {
  const double worst = (u.rowwise().sum().array() - 1.0).abs().maxCoeff();
  if (worst > 1e-4) {
    throw std::invalid_argument("objective: U rows deviate from stochasticity by " +
                                std::to_string(worst));
  }
}

double mode_sign(CommunityMode mode) {
  return mode == CommunityMode::kAssociative ? -1.0 : 1.0;
}

}  // namespace

double soft_modularity(const Graph& g, const Eigen::MatrixXd& u) {
  check_rows(g, u);
  check_row_stochastic(u);
  const Eigen::MatrixXd bu = modularity_matrix_apply(g, u);
  return (u.array() * bu.array()).sum() / g.a1_norm();
}

double balance_regularizer(const Eigen::MatrixXd& u, int clusters, RegMode reg_mode) {
  if (u.cols() != clusters) {
    throw std::invalid_argument("balance_regularizer: U column count != clusters");
  }
  Eigen::RowVectorXd mass = u.colwise().sum();
  if (reg_mode == RegMode::kNormalized) mass /= static_cast<double>(u.rows());
  return (mass.array() - 1.0 / clusters).square().sum();
}

double loss(const Graph& g, const Eigen::MatrixXd& u, const LossConfig& cfg) {
  const double q = soft_modularity(g, u);
  const double r = balance_regularizer(u, cfg.clusters, cfg.reg_mode);
  return mode_sign(cfg.mode) * q + cfg.lambda * r;
}

Eigen::MatrixXd loss_grad_u(const Graph& g, const Eigen::MatrixXd& u,
                            const LossConfig& cfg) {
  check_rows(g, u);
  if (u.cols() != cfg.clusters) {
    throw std::invalid_argument("loss_grad_u: U column count != clusters");
  }
  // B is symmetric, so d tr(U^T B U) / dU = 2 B U.
  Eigen::MatrixXd grad = modularity_matrix_apply(g, u);
  grad *= 2.0 * mode_sign(cfg.mode) / g.a1_norm();

  const double n = static_cast<double>(u.rows());
  Eigen::RowVectorXd mass = u.colwise().sum();
  if (cfg.reg_mode == RegMode::kNormalized) {
    mass /= n;
    grad.array().rowwise() +=
        cfg.lambda * 2.0 / n * (mass.array() - 1.0 / cfg.clusters);
  } else {
    grad.array().rowwise() += cfg.lambda * 2.0 * (mass.array() - 1.0 / cfg.clusters);
  }
  return grad;
}

}  // namespace commdet
