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

LabelVector apply_perm(const LabelVector& y, const std::vector<int>& perm) {
  LabelVector out(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) out[i] = perm[y[i]];
  return out;
}

std::vector<int> random_perm(int c, Rng& rng) {
  std::vector<int> perm(c);
  std::iota(perm.begin(), perm.end(), 0);
  rng.shuffle(perm);
  return perm;
}

}  // namespace

TEST_CASE("overlap basics") {
  LabelVector y = ct::random_labels(200, 5, 11);
  CHECK(overlap(y, y, 5) == doctest::Approx(1.0));

  Rng rng(12);
  for (int trial = 0; trial < 100; ++trial) {
    const auto perm = random_perm(5, rng);
    CHECK(overlap(y, apply_perm(y, perm), 5) == doctest::Approx(1.0));
  }
}

TEST_CASE("overlap of a constant prediction on balanced truth is zero") {
  LabelVector y(1000), yhat(1000, 3);
  for (int i = 0; i < 1000; ++i) y[i] = i % 5;
  CHECK(overlap(y, yhat, 5) == doctest::Approx(0.0));
}

TEST_CASE("overlap errors and edge cases") {
  CHECK_THROWS_AS(overlap({0, 1}, {0}, 2), std::invalid_argument);
  CHECK(overlap({0, 0, 0}, {0, 0, 0}, 1) == doctest::Approx(1.0));
}

TEST_CASE("assignment maximization agrees with exhaustive search") {
  // Larger c exercises the linear-assignment path against brute force via
  // padded label alphabets.
  Rng rng(77);
  for (int trial = 0; trial < 30; ++trial) {
    const int c = 3 + static_cast<int>(rng.uniform_int(4));  // 3..6
    LabelVector y = ct::random_labels(60, c, 500 + trial);
    LabelVector yhat = ct::random_labels(60, c, 900 + trial);
    const double via_exhaustive = overlap(y, yhat, c);       // c <= 8 path
    const double via_assignment = overlap(y, yhat, c + 6);   // > 8: assignment path
    // Same matched count, different chance normalization; undo it.
    const double n = 60.0;
    const double matched_a = (via_exhaustive * (1.0 - 1.0 / c) + 1.0 / c) * n;
    const double matched_b = (via_assignment * (1.0 - 1.0 / (c + 6)) + 1.0 / (c + 6)) * n;
    CHECK(matched_a == doctest::Approx(matched_b).epsilon(1e-9));
  }
}

TEST_CASE("nmi reference values") {
  LabelVector y = {0, 0, 1, 1};
  CHECK(nmi(y, y) == doctest::Approx(1.0));
  CHECK(nmi(y, {0, 1, 0, 1}) == doctest::Approx(0.0));
  CHECK(nmi(y, {1, 1, 0, 0}) == doctest::Approx(1.0));  // relabeled
  CHECK(nmi({0, 0, 0, 0}, {0, 0, 0, 0}) == doctest::Approx(1.0));
  CHECK(nmi({0, 0, 0, 0}, {1, 1, 1, 1}) == doctest::Approx(1.0));  // both constant
  CHECK(nmi({0, 0, 1, 1}, {2, 2, 2, 2}) == doctest::Approx(0.0));  // one constant
  CHECK_THROWS_AS(nmi({0, 1}, {0}), std::invalid_argument);
}

TEST_CASE("nmi and overlap are relabeling invariant, nmi within [0,1]") {
  Rng rng(31);
  LabelVector y = ct::random_labels(150, 4, 21);
  LabelVector yhat = ct::random_labels(150, 4, 22);
  const double base_nmi = nmi(y, yhat);
  const double base_overlap = overlap(y, yhat, 4);
  for (int trial = 0; trial < 100; ++trial) {
    const auto py = random_perm(4, rng);
    const auto ph = random_perm(4, rng);
    const LabelVector y2 = apply_perm(y, py);
    const LabelVector yhat2 = apply_perm(yhat, ph);
    CHECK(nmi(y2, yhat2) == doctest::Approx(base_nmi).epsilon(1e-9));
    CHECK(overlap(y2, yhat2, 4) == doctest::Approx(base_overlap).epsilon(1e-9));
    CHECK(nmi(y2, yhat2) >= 0.0);
    CHECK(nmi(y2, yhat2) <= 1.0 + 1e-9);
    CHECK(overlap(y2, yhat2, 4) <= 1.0);
  }
}

TEST_CASE("hard modularity reference values") {
  Graph two_edges(4, {{0, 1}, {2, 3}});
  CHECK(hard_modularity(two_edges, {0, 0, 1, 1}) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(hard_modularity(two_edges, {0, 0, 0, 0}) == doctest::Approx(0.0).epsilon(1e-12));

  Graph k3 = ct::complete_graph(3);
  CHECK(hard_modularity(k3, {0, 0, 0}) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("hard modularity equals soft modularity of one-hot labels") {
  for (int trial = 0; trial < 100; ++trial) {
    Graph g = ct::random_graph(30, 0.15, 4000 + trial);
    if (g.num_edges() == 0) continue;
    LabelVector y = ct::random_labels(30, 4, 6000 + trial);
    const Matrix u = ct::onehot(y, 4);
    CHECK(hard_modularity(g, y) ==
          doctest::Approx(soft_modularity(g, u)).epsilon(1e-10));
  }
}
