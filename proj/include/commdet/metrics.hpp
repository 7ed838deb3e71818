// Copyright 2026 The commdet Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "commdet/graph.hpp"
#include "commdet/ssbm.hpp"

namespace commdet {

// counts[i][j] = |{u : y(u) = i and yhat(u) = j}|.
std::vector<std::vector<long long>> confusion_matrix(const LabelVector& y,
                                                     const LabelVector& yhat,
                                                     int rows, int cols);

// Permutation-maximized agreement rescaled so chance = 0 and perfect = 1:
// ((matched/n) - 1/c) / (1 - 1/c). Exhaustive search for c <= 8, optimal
// linear assignment beyond; both exact.
double overlap(const LabelVector& y, const LabelVector& yhat, int c);

// Mutual information of the contingency table (natural log) normalized by the
// arithmetic mean of the two label entropies. Conventions: 0 log 0 = 0; both
// entropies zero -> 1; exactly one entropy zero -> 0.
double nmi(const LabelVector& y, const LabelVector& yhat);

// Newman modularity of a hard partition, computed from edge counts and
// community degree sums (independent of the soft-modularity path).
double hard_modularity(const Graph& g, const LabelVector& y);

}  // namespace commdet
