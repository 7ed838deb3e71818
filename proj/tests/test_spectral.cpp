// Copyright 2026 The commdet Authors.
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "commdet/kmeans.hpp"
#include "commdet/metrics.hpp"
#include "commdet/rng.hpp"
#include "commdet/spectral.hpp"
#include "commdet/ssbm.hpp"
#include "test_support.hpp"

using namespace commdet;
namespace ct = commdet::testing;

TEST_CASE("estimate_r on a cycle is one") {
  Graph c20 = ct::cycle_graph(20);
  const auto est = estimate_r(c20, CommunityMode::kAssociative);
  CHECK(est.r == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("estimate_r matches the branching ratio on SSBM graphs") {
  auto [g, labels] = ssbm_generate({400, 5, 21.0, 2.0}, 3);
  const auto est = estimate_r(g, CommunityMode::kAssociative);
  CHECK(est.converged);
  CHECK(est.r == doctest::Approx(std::sqrt(5.8)).epsilon(0.07));

  const auto disassoc = estimate_r(g, CommunityMode::kDisassociative);
  CHECK(disassoc.r == doctest::Approx(-est.r).epsilon(1e-12));

  const auto literal = estimate_r(g, CommunityMode::kAssociative, RMode::kLiteral);
  CHECK(literal.r == doctest::Approx(est.r * est.r).epsilon(1e-9));
}

TEST_CASE("estimate_r requires edges") {
  Graph empty(5, {});
  CHECK_THROWS_AS(estimate_r(empty, CommunityMode::kAssociative),
                  std::invalid_argument);
}

TEST_CASE("bethe hessian at r=1 is the laplacian") {
  Graph g = ct::random_graph(30, 0.2, 8);
  Vector ones = Vector::Ones(30);
  CHECK(bethe_hessian_apply(g, 1.0, ones).norm() < 1e-12);

  Graph p3 = ct::path_graph(3);
  LinearOperator lap = [&p3](const Vector& x) -> Vector {
    return bethe_hessian_apply(p3, 1.0, x);
  };
  const auto pairs = smallest_eigenpairs(lap, 3, 3);
  CHECK(pairs.values[0] == doctest::Approx(0.0).epsilon(1e-8));
  CHECK(pairs.values[1] == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(pairs.values[2] == doctest::Approx(3.0).epsilon(1e-8));
}

TEST_CASE("bethe hessian special values and dense agreement") {
  Graph g = ct::random_graph(25, 0.25, 17);
  Rng rng(55);
  Vector x(25);
  for (int i = 0; i < 25; ++i) x[i] = rng.normal();

  // r = 0: H x = -x + D x
  Vector expected = -x;
  for (int u = 0; u < 25; ++u) expected[u] += g.degree(u) * x[u];
  CHECK((bethe_hessian_apply(g, 0.0, x) - expected).norm() < 1e-12);

  for (double r : {-1.7, 0.6, 2.3}) {
    const Matrix h = ct::dense_bethe_hessian(g, r);
    CHECK((bethe_hessian_apply(g, r, x) - h * x).norm() < 1e-10);
  }
}

TEST_CASE("smallest_eigenpairs on a diagonal operator") {
  LinearOperator diag = [](const Vector& x) -> Vector {
    Vector y = x;
    y[0] *= 3.0;
    y[1] *= 1.0;
    y[2] *= 2.0;
    return y;
  };
  const auto pairs = smallest_eigenpairs(diag, 3, 2);
  CHECK(pairs.values[0] == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(pairs.values[1] == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(std::abs(pairs.vectors.col(0)[1]) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(std::abs(pairs.vectors.col(1)[2]) == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("laplacian kernel of a connected graph is the constant vector") {
  Graph g = ct::cycle_graph(12);
  LinearOperator lap = [&g](const Vector& x) -> Vector {
    return bethe_hessian_apply(g, 1.0, x);
  };
  const auto pairs = smallest_eigenpairs(lap, 12, 1);
  CHECK(pairs.values[0] == doctest::Approx(0.0).epsilon(1e-9));
  const double off = (pairs.vectors.col(0).array() - pairs.vectors.col(0).mean())
                         .matrix()
                         .norm();
  CHECK(off < 1e-7);
}

TEST_CASE("lanczos path agrees with the dense path and meets residuals") {
  // 600-dim operator with well-separated lower spectrum.
  const int dim = 600;
  Rng rng(123);
  Vector diag(dim), off(dim - 1);
  for (int i = 0; i < dim; ++i) diag[i] = static_cast<double>(i);
  for (int i = 0; i + 1 < dim; ++i) off[i] = 0.01 * rng.normal();
  LinearOperator op = [&diag, &off, dim](const Vector& x) -> Vector {
    Vector y = diag.cwiseProduct(x);
    for (int i = 0; i + 1 < dim; ++i) {
      y[i] += off[i] * x[i + 1];
      y[i + 1] += off[i] * x[i];
    }
    return y;
  };

  const int k = 5;
  const auto dense = smallest_eigenpairs_dense(op, dim, k);
  const auto lanczos = smallest_eigenpairs_lanczos(op, dim, k);
  for (int i = 0; i < k; ++i) {
    CHECK(lanczos.values[i] == doctest::Approx(dense.values[i]).epsilon(1e-9));
    CHECK(lanczos.residuals[i] <= 1e-8 * std::max(1.0, std::abs(lanczos.values[i])));
  }
  const Matrix gram = lanczos.vectors.transpose() * lanczos.vectors;
  CHECK((gram - Matrix::Identity(k, k)).cwiseAbs().maxCoeff() < 1e-8);

  // The default dispatcher picks Lanczos above the dense threshold.
  const auto routed = smallest_eigenpairs(op, dim, k);
  for (int i = 0; i < k; ++i) {
    CHECK(routed.values[i] == doctest::Approx(dense.values[i]).epsilon(1e-9));
  }
}

TEST_CASE("lanczos on a bethe hessian operator matches dense") {
  auto [g, labels] = ssbm_generate({550, 5, 21.0, 2.0}, 9);
  const auto est = estimate_r(g, CommunityMode::kAssociative);
  LinearOperator h = [&g, r = est.r](const Vector& x) -> Vector {
    return bethe_hessian_apply(g, r, x);
  };
  const auto dense = smallest_eigenpairs_dense(h, g.num_nodes(), 5);
  const auto lanczos = smallest_eigenpairs_lanczos(h, g.num_nodes(), 5);
  for (int i = 0; i < 5; ++i) {
    CHECK(lanczos.values[i] == doctest::Approx(dense.values[i]).epsilon(1e-8));
  }
}

TEST_CASE("kmeans recovers exact point groups") {
  Matrix points(6, 2);
  points << 0, 0, 0, 0, 5, 5, 5, 5, -3, 4, -3, 4;
  const auto result = kmeans(points, 3, 1);
  CHECK(result.wcss == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(result.labels[0] == result.labels[1]);
  CHECK(result.labels[2] == result.labels[3]);
  CHECK(result.labels[4] == result.labels[5]);
  CHECK(result.labels[0] != result.labels[2]);
  CHECK(result.labels[0] != result.labels[4]);
}

TEST_CASE("kmeans with one cluster returns the mean") {
  Matrix points(4, 1);
  points << 1, 2, 3, 6;
  const auto result = kmeans(points, 1, 3);
  for (int label : result.labels) CHECK(label == 0);
  CHECK(result.centroids(0, 0) == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("kmeans separates well-spaced blobs and is deterministic") {
  Rng rng(2024);
  const int per_blob = 60;
  Matrix centers(5, 2);
  centers << 0, 0, 10, 0, 0, 10, 10, 10, 20, 20;
  Matrix points(5 * per_blob, 2);
  LabelVector truth(5 * per_blob);
  for (int b = 0; b < 5; ++b) {
    for (int i = 0; i < per_blob; ++i) {
      const int row = b * per_blob + i;
      points(row, 0) = centers(b, 0) + 0.5 * rng.normal();
      points(row, 1) = centers(b, 1) + 0.5 * rng.normal();
      truth[row] = b;
    }
  }
  const auto result = kmeans(points, 5, 7);
  CHECK(overlap(truth, result.labels, 5) == doctest::Approx(1.0));

  // objective non-increasing within the winning restart
  for (std::size_t i = 1; i < result.wcss_trace.size(); ++i) {
    CHECK(result.wcss_trace[i] <= result.wcss_trace[i - 1] + 1e-9);
  }

  const auto again = kmeans(points, 5, 7);
  CHECK(again.labels == result.labels);
}

TEST_CASE("kmeans uses all k labels even with duplicate-heavy input") {
  Matrix points(10, 1);
  points << 0, 0, 0, 0, 0, 0, 0, 0, 0, 9;
  const auto result = kmeans(points, 3, 5);
  std::vector<int> used(3, 0);
  for (int label : result.labels) used[label] = 1;
  CHECK(used[0] + used[1] + used[2] == 3);
}

TEST_CASE("bethe hessian clustering separates two cliques") {
  std::vector<Edge> edges;
  for (int u = 0; u < 5; ++u) {
    for (int v = u + 1; v < 5; ++v) {
      edges.emplace_back(u, v);
      edges.emplace_back(u + 5, v + 5);
    }
  }
  Graph g(10, edges);
  LabelVector truth = {0, 0, 0, 0, 0, 1, 1, 1, 1, 1};

  const auto clustering = bethe_hessian_cluster(g, 2, CommunityMode::kAssociative, 11);
  CHECK(overlap(truth, clustering.labels, 2) == doctest::Approx(1.0));

  // Embedding contract: ascending values, orthonormal columns, residuals.
  const auto& emb = clustering.embedding;
  CHECK(emb.values[0] <= emb.values[1]);
  const Matrix gram = emb.vectors.transpose() * emb.vectors;
  CHECK((gram - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-8);
  for (int i = 0; i < 2; ++i) {
    const Vector residual =
        bethe_hessian_apply(g, emb.r, emb.vectors.col(i)) - emb.values[i] * emb.vectors.col(i);
    CHECK(residual.norm() <= 1e-8 * std::max(1.0, std::abs(emb.values[i])));
  }
}

TEST_CASE("bethe hessian clustering is permutation invariant") {
  std::vector<Edge> edges;
  for (int u = 0; u < 5; ++u) {
    for (int v = u + 1; v < 5; ++v) {
      edges.emplace_back(u, v);
      edges.emplace_back(u + 5, v + 5);
    }
  }
  Graph g(10, edges);

  std::vector<int> perm(10);
  std::iota(perm.begin(), perm.end(), 0);
  Rng rng(404);
  rng.shuffle(perm);
  Graph permuted = g.permuted(perm);

  const auto base = bethe_hessian_cluster(g, 2, CommunityMode::kAssociative, 11);
  const auto moved = bethe_hessian_cluster(permuted, 2, CommunityMode::kAssociative, 11);

  LabelVector mapped(10);
  for (int u = 0; u < 10; ++u) mapped[u] = moved.labels[perm[u]];
  CHECK(overlap(base.labels, mapped, 2) == doctest::Approx(1.0));
}

TEST_CASE("isolated vertices participate with degree zero") {
  // A triangle plus two isolated vertices; H acts as (r^2 - 1) on them.
  Graph g(5, {{0, 1}, {0, 2}, {1, 2}});
  const double r = 1.5;
  Vector x = Vector::Zero(5);
  x[3] = 2.0;
  const Vector y = bethe_hessian_apply(g, r, x);
  CHECK(y[3] == doctest::Approx((r * r - 1.0) * 2.0).epsilon(1e-12));
  const auto clustering = bethe_hessian_cluster(g, 2, CommunityMode::kAssociative, 2);
  CHECK(clustering.labels.size() == 5);
}
