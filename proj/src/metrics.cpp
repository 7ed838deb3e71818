// Copyright 2026 The commdet Authors.
// SPDX-License-Identifier: Apache-2.0

#include "commdet/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace commdet {

std::vector<std::vector<long long>> confusion_matrix(const LabelVector& y,
                                                     const LabelVector& yhat,
                                                     int rows, int cols) {
  if (y.size() != yhat.size()) {
    throw std::invalid_argument("confusion_matrix: length mismatch");
  }
  std::vector<std::vector<long long>> counts(rows, std::vector<long long>(cols, 0));
  for (std::size_t u = 0; u < y.size(); ++u) {
    if (y[u] < 0 || y[u] >= rows || yhat[u] < 0 || yhat[u] >= cols) {
      throw std::invalid_argument("confusion_matrix: label out of range");
    }
    ++counts[y[u]][yhat[u]];
  }
  return counts;
}

namespace {

long long best_match_exhaustive(const std::vector<std::vector<long long>>& counts) {
  const int c = static_cast<int>(counts.size());
  std::vector<int> perm(c);
  std::iota(perm.begin(), perm.end(), 0);
  long long best = 0;
  do {
    long long matched = 0;
    for (int i = 0; i < c; ++i) matched += counts[i][perm[i]];
    best = std::max(best, matched);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

// Shortest-augmenting-path assignment with potentials, O(c^3). Minimizes
// negated counts, so the result is the maximum matched total.
long long best_match_assignment(const std::vector<std::vector<long long>>& counts) {
  const int c = static_cast<int>(counts.size());
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(c + 1, 0.0), v(c + 1, 0.0);
  std::vector<int> p(c + 1, 0), way(c + 1, 0);
  for (int i = 1; i <= c; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(c + 1, inf);
    std::vector<bool> used(c + 1, false);
    do {
      used[j0] = true;
      const int i0 = p[j0];
      int j1 = -1;
      double delta = inf;
      for (int j = 1; j <= c; ++j) {
        if (used[j]) continue;
        const double cur = -static_cast<double>(counts[i0 - 1][j - 1]) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= c; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  long long matched = 0;
  for (int j = 1; j <= c; ++j) {
    if (p[j] != 0) matched += counts[p[j] - 1][j - 1];
  }
  return matched;
}

}  // namespace

double overlap(const LabelVector& y, const LabelVector& yhat, int c) {
  if (y.size() != yhat.size()) throw std::invalid_argument("overlap: length mismatch");
  if (c < 1) throw std::invalid_argument("overlap: need c >= 1");
  if (y.empty()) throw std::invalid_argument("overlap: empty labeling");
  if (c == 1) return 1.0;  // single community: agreement is total by definition

  const auto counts = confusion_matrix(y, yhat, c, c);
  const long long matched =
      c <= 8 ? best_match_exhaustive(counts) : best_match_assignment(counts);
  const double n = static_cast<double>(y.size());
  const double frac = static_cast<double>(matched) / n;
  return (frac - 1.0 / c) / (1.0 - 1.0 / c);
}

double nmi(const LabelVector& y, const LabelVector& yhat) {
  if (y.size() != yhat.size()) throw std::invalid_argument("nmi: length mismatch");
  if (y.empty()) throw std::invalid_argument("nmi: empty labeling");
  const int rows = *std::max_element(y.begin(), y.end()) + 1;
  const int cols = *std::max_element(yhat.begin(), yhat.end()) + 1;
  const auto counts = confusion_matrix(y, yhat, rows, cols);
  const double n = static_cast<double>(y.size());

  std::vector<double> row_sum(rows, 0.0), col_sum(cols, 0.0);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      row_sum[i] += static_cast<double>(counts[i][j]);
      col_sum[j] += static_cast<double>(counts[i][j]);
    }
  }

  auto entropy = [n](const std::vector<double>& sums) {
    double h = 0.0;
    for (double s : sums) {
      if (s > 0.0) h -= (s / n) * std::log(s / n);
    }
    return h;
  };
  const double hy = entropy(row_sum);
  const double hyhat = entropy(col_sum);
  if (hy == 0.0 && hyhat == 0.0) return 1.0;  // both constant labelings
  if (hy == 0.0 || hyhat == 0.0) return 0.0;

  double mi = 0.0;
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      const double nij = static_cast<double>(counts[i][j]);
      if (nij > 0.0) {
        mi += (nij / n) * std::log(n * nij / (row_sum[i] * col_sum[j]));
      }
    }
  }
  return mi / (0.5 * (hy + hyhat));
}

double hard_modularity(const Graph& g, const LabelVector& y) {
  if (static_cast<int>(y.size()) != g.num_nodes()) {
    throw std::invalid_argument("hard_modularity: label count != node count");
  }
  const double a1 = g.a1_norm();
  if (a1 == 0.0) throw std::invalid_argument("hard_modularity: empty graph");
  const int c = *std::max_element(y.begin(), y.end()) + 1;

  std::vector<double> internal_ordered(c, 0.0);  // sum_{u,v in c} A_uv, ordered pairs
  std::vector<double> degree_sum(c, 0.0);
  for (const auto& [u, v] : g.edges()) {
    if (y[u] == y[v]) internal_ordered[y[u]] += 2.0;
  }
  for (int u = 0; u < g.num_nodes(); ++u) degree_sum[y[u]] += g.degree(u);

  double q = 0.0;
  for (int i = 0; i < c; ++i) {
    q += internal_ordered[i] - degree_sum[i] * degree_sum[i] / a1;
  }
  return q / a1;
}

}  // namespace commdet
