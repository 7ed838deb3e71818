// Copyright 2026 The commdet Authors.
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "commdet/louvain.hpp"
#include "commdet/metrics.hpp"
#include "commdet/ssbm.hpp"
#include "test_support.hpp"

using namespace commdet;
namespace ct = commdet::testing;

TEST_CASE("two disjoint triangles form two communities at modularity one half") {
  Graph g(6, {{0, 1}, {0, 2}, {1, 2}, {3, 4}, {3, 5}, {4, 5}});
  const auto result = louvain(g, 1);
  CHECK(result.modularity == doctest::Approx(0.5).epsilon(1e-12));
  const std::set<int> ids(result.labels.begin(), result.labels.end());
  CHECK(ids.size() == 2);
  CHECK(result.labels[0] == result.labels[1]);
  CHECK(result.labels[1] == result.labels[2]);
  CHECK(result.labels[3] == result.labels[4]);
  CHECK(result.labels[4] == result.labels[5]);
  CHECK(result.labels[0] != result.labels[3]);
}

TEST_CASE("a single edge merges into one community at modularity zero") {
  Graph g(2, {{0, 1}});
  const auto result = louvain(g, 9);
  CHECK(result.labels[0] == result.labels[1]);
  CHECK(result.modularity == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("modularity is non-decreasing across accepted moves") {
  auto [g, labels] = ssbm_generate({200, 4, 16.0, 2.0}, 77);
  const auto result = louvain(g, 5);
  REQUIRE(!result.q_trace.empty());
  for (std::size_t i = 1; i < result.q_trace.size(); ++i) {
    CHECK(result.q_trace[i] >= result.q_trace[i - 1]);
  }
  CHECK(result.modularity == doctest::Approx(result.q_trace.back()).epsilon(1e-9));
}

TEST_CASE("reported modularity equals the metrics-module value") {
  for (int trial = 0; trial < 10; ++trial) {
    Graph g = ct::random_graph(80, 0.08, 1234 + trial);
    if (g.num_edges() == 0) continue;
    const auto result = louvain(g, 42 + trial);
    CHECK(result.modularity ==
          doctest::Approx(hard_modularity(g, result.labels)).epsilon(1e-10));
  }
}

TEST_CASE("total edge weight is conserved through aggregation") {
  auto [g, labels] = ssbm_generate({150, 3, 15.0, 2.0}, 3);
  const auto result = louvain(g, 8);
  REQUIRE(result.level_total_weight.size() >= 1);
  for (double w : result.level_total_weight) {
    CHECK(w == doctest::Approx(g.a1_norm()).epsilon(1e-12));
  }

  // Direct aggregation check: strengths and total weight carry over.
  WeightedAggGraph base = WeightedAggGraph::from_graph(g);
  std::vector<int> split(g.num_nodes());
  for (int u = 0; u < g.num_nodes(); ++u) split[u] = u % 4;
  WeightedAggGraph agg = base.aggregate(split, 4);
  CHECK(agg.total_weight == doctest::Approx(base.total_weight));
  double strength_sum = 0.0;
  for (double s : agg.strength) strength_sum += s;
  CHECK(strength_sum == doctest::Approx(g.a1_norm()).epsilon(1e-12));
}

TEST_CASE("louvain is deterministic per seed") {
  auto [g, labels] = ssbm_generate({150, 3, 15.0, 2.0}, 21);
  const auto a = louvain(g, 17);
  const auto b = louvain(g, 17);
  CHECK(a.labels == b.labels);
  CHECK(a.modularity == b.modularity);
}

TEST_CASE("louvain rejects the empty graph") {
  Graph g(4, {});
  CHECK_THROWS_AS(louvain(g, 0), std::invalid_argument);
}
