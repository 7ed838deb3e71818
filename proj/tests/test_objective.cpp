// Copyright 2026 The commdet Authors.
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "commdet/metrics.hpp"
#include "commdet/objective.hpp"
#include "commdet/rng.hpp"
#include "test_support.hpp"

using namespace commdet;
namespace ct = commdet::testing;

namespace {

Matrix random_soft_assignment(int n, int c, std::uint64_t seed) {
  Rng rng(seed);
  Matrix u(n, c);
  for (int i = 0; i < n; ++i) {
    double total = 0.0;
    for (int j = 0; j < c; ++j) {
      u(i, j) = -std::log(1.0 - rng.uniform());
      total += u(i, j);
    }
    u.row(i) /= total;
  }
  return u;
}

}  // namespace

TEST_CASE("soft modularity of the uniform assignment is zero") {
  Graph g = ct::random_graph(40, 0.2, 1);
  Matrix u = Matrix::Constant(40, 4, 0.25);
  CHECK(soft_modularity(g, u) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("soft modularity of two disjoint edges split correctly is one half") {
  Graph g(4, {{0, 1}, {2, 3}});
  Matrix u = ct::onehot({0, 0, 1, 1}, 2);
  CHECK(soft_modularity(g, u) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("soft modularity rejects non-stochastic rows") {
  Graph g(4, {{0, 1}, {2, 3}});
  Matrix u = Matrix::Constant(4, 2, 0.9);
  CHECK_THROWS_AS(soft_modularity(g, u), std::invalid_argument);
}

TEST_CASE("soft modularity stays within [-1, 1] and is column-permutation invariant") {
  for (int trial = 0; trial < 25; ++trial) {
    Graph g = ct::random_graph(30, 0.2, 50 + trial);
    if (g.num_edges() == 0) continue;
    Matrix u = random_soft_assignment(30, 5, 70 + trial);
    const double q = soft_modularity(g, u);
    CHECK(std::abs(q) <= 1.0 + 1e-12);

    Eigen::PermutationMatrix<Eigen::Dynamic> perm(5);
    perm.setIdentity();
    std::vector<int> order(5);
    std::iota(order.begin(), order.end(), 0);
    Rng rng(90 + trial);
    rng.shuffle(order);
    for (int i = 0; i < 5; ++i) perm.indices()[i] = order[i];
    const Matrix shuffled = u * perm;
    CHECK(soft_modularity(g, shuffled) == doctest::Approx(q).epsilon(1e-12));
    CHECK(balance_regularizer(shuffled, 5, RegMode::kNormalized) ==
          doctest::Approx(balance_regularizer(u, 5, RegMode::kNormalized))
              .epsilon(1e-12));
  }
}

TEST_CASE("balance regularizer reference values") {
  Matrix balanced = Matrix::Constant(10, 2, 0.5);
  CHECK(balance_regularizer(balanced, 2, RegMode::kNormalized) ==
        doctest::Approx(0.0).epsilon(1e-15));

  Matrix lopsided(4, 2);
  lopsided << 1, 0, 1, 0, 1, 0, 1, 0;
  CHECK(balance_regularizer(lopsided, 2, RegMode::kNormalized) ==
        doctest::Approx(0.5).epsilon(1e-12));

  // masses (0.3, 0.2, 0.2, 0.2, 0.1) around 1/5
  Matrix masses = Matrix::Zero(10, 5);
  auto fill_col = [&masses](int col, int count, int& row) {
    for (int i = 0; i < count; ++i) masses(row++, col) = 1.0;
  };
  int row = 0;
  fill_col(0, 3, row);
  fill_col(1, 2, row);
  fill_col(2, 2, row);
  fill_col(3, 2, row);
  fill_col(4, 1, row);
  CHECK(balance_regularizer(masses, 5, RegMode::kNormalized) ==
        doctest::Approx(0.02).epsilon(1e-12));
}

TEST_CASE("literal regularizer uses raw column masses") {
  Matrix u = Matrix::Constant(10, 2, 0.5);  // raw masses (5, 5)
  const double expected = 2.0 * (5.0 - 0.5) * (5.0 - 0.5);
  CHECK(balance_regularizer(u, 2, RegMode::kLiteral) ==
        doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("loss composes modularity and regularizer with mode sign") {
  Graph g(4, {{0, 1}, {2, 3}});
  Matrix u = ct::onehot({0, 0, 1, 1}, 2);
  LossConfig assoc{CommunityMode::kAssociative, 0.5, 2, RegMode::kNormalized};
  LossConfig disassoc{CommunityMode::kDisassociative, 0.5, 2, RegMode::kNormalized};
  CHECK(loss(g, u, assoc) == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(loss(g, u, disassoc) == doctest::Approx(0.5).epsilon(1e-12));

  LossConfig zero_lambda{CommunityMode::kAssociative, 0.0, 4, RegMode::kNormalized};
  Graph g2 = ct::random_graph(20, 0.3, 9);
  Matrix uniform = Matrix::Constant(20, 4, 0.25);
  CHECK(loss(g2, uniform, zero_lambda) == doctest::Approx(0.0).epsilon(1e-12));

  // lambda decomposition at a fixed U
  Matrix soft = random_soft_assignment(20, 4, 123);
  LossConfig with_lambda{CommunityMode::kAssociative, 0.5, 4, RegMode::kNormalized};
  CHECK(loss(g2, soft, with_lambda) ==
        doctest::Approx(loss(g2, soft, zero_lambda) +
                        0.5 * balance_regularizer(soft, 4, RegMode::kNormalized))
            .epsilon(1e-12));
}

TEST_CASE("loss gradient vanishes at uniform and balanced assignments") {
  Graph g = ct::random_graph(20, 0.3, 15);
  Matrix uniform = Matrix::Constant(20, 4, 0.25);
  LossConfig cfg{CommunityMode::kAssociative, 0.5, 4, RegMode::kNormalized};
  CHECK(loss_grad_u(g, uniform, cfg).norm() < 1e-12);
}

TEST_CASE("loss gradient matches finite differences") {
  for (int trial = 0; trial < 10; ++trial) {
    Graph g = ct::random_graph(8, 0.4, 200 + trial);
    if (g.num_edges() == 0) continue;
    Matrix u = random_soft_assignment(8, 3, 300 + trial);
    for (const auto mode : {CommunityMode::kAssociative, CommunityMode::kDisassociative}) {
      for (const auto reg : {RegMode::kNormalized, RegMode::kLiteral}) {
        LossConfig cfg{mode, 0.5, 3, reg};
        const Matrix analytic = loss_grad_u(g, u, cfg);
        // The loss is quadratic in U, so central differences are exact up to
        // rounding; the row-stochasticity guard tolerates the +-h probes.
        const auto numeric = ct::finite_difference_gradient(
            u.data(), u.size(), [&]() { return loss(g, u, cfg); }, 1e-5);
        const Eigen::ArrayXd flat =
            Eigen::Map<const Eigen::ArrayXd>(analytic.data(), analytic.size());
        CHECK(ct::gradient_relative_error(flat, numeric) < 1e-6);
      }
    }
  }
}

TEST_CASE("hard/soft consistency on dense oracle") {
  for (int trial = 0; trial < 20; ++trial) {
    Graph g = ct::random_graph(25, 0.25, 700 + trial);
    if (g.num_edges() == 0) continue;
    LabelVector y = ct::random_labels(25, 5, 800 + trial);
    CHECK(soft_modularity(g, ct::onehot(y, 5)) ==
          doctest::Approx(hard_modularity(g, y)).epsilon(1e-10));

    // dense quadratic-form oracle
    const Matrix b = ct::dense_modularity_matrix(g);
    const Matrix u = random_soft_assignment(25, 5, 900 + trial);
    const double expected = (u.transpose() * b * u).trace() / g.a1_norm();
    CHECK(soft_modularity(g, u) == doctest::Approx(expected).epsilon(1e-12));
  }
}
