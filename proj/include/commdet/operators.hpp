// Copyright 2026 The commdet Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Core>
#include <stdexcept>

#include "commdet/graph.hpp"

namespace commdet {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Y = A * X via neighbor lists; the adjacency matrix is never materialized.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>
adjacency_apply(const Graph& g, const Eigen::MatrixBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  if (x.rows() != g.num_nodes()) {
    throw std::invalid_argument("adjacency_apply: row count != node count");
  }
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> y =
      Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(x.rows(), x.cols());
  for (int u = 0; u < g.num_nodes(); ++u) {
    for (int v : g.neighbors(u)) y.row(u) += x.row(v);
  }
  return y;
}

// Y = B * X with B = A - d d^T / ||A||_1, computed as A*X - d (d^T X)/||A||_1.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>
modularity_matrix_apply(const Graph& g, const Eigen::MatrixBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  if (g.a1_norm() == 0.0) {
    throw std::invalid_argument("modularity_matrix_apply: graph has no edges");
  }
  auto y = adjacency_apply(g, x);
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> deg(g.num_nodes());
  for (int u = 0; u < g.num_nodes(); ++u) deg[u] = static_cast<Scalar>(g.degree(u));
  const Eigen::Matrix<Scalar, 1, Eigen::Dynamic> dtx = deg.transpose() * x;
  y.noalias() -= deg * (dtx / static_cast<Scalar>(g.a1_norm()));
  return y;
}

// y = H(r) x with H = (r^2 - 1) I - r A + D, matrix-free.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>
bethe_hessian_apply(const Graph& g, double r, const Eigen::MatrixBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  auto y = adjacency_apply(g, x);
  y *= static_cast<Scalar>(-r);
  const Scalar shift = static_cast<Scalar>(r * r - 1.0);
  for (int u = 0; u < g.num_nodes(); ++u) {
    y.row(u) += (shift + static_cast<Scalar>(g.degree(u))) * x.row(u);
  }
  return y;
}

// Y = Ahat * X with Ahat = Dt^{-1/2} (A + I) Dt^{-1/2}, Dt = D + I.
// Symmetric normalization used by the graph-convolution layer.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>
normalized_adjacency_apply(const Graph& g, const Eigen::MatrixBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  if (x.rows() != g.num_nodes()) {
    throw std::invalid_argument("normalized_adjacency_apply: row count != node count");
  }
  const int n = g.num_nodes();
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> inv_sqrt(n);
  for (int u = 0; u < n; ++u) {
    inv_sqrt[u] = Scalar(1) / std::sqrt(static_cast<Scalar>(g.degree(u) + 1));
  }
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> scaled =
      inv_sqrt.asDiagonal() * x.derived();
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> y = scaled;
  for (int u = 0; u < n; ++u) {
    for (int v : g.neighbors(u)) y.row(u) += scaled.row(v);
  }
  return inv_sqrt.asDiagonal() * y;
}

}  // namespace commdet
