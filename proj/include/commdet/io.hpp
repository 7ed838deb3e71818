// Copyright 2026 The commdet Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

#include <Eigen/Core>

#include "commdet/graph.hpp"
#include "commdet/ssbm.hpp"

namespace commdet {

// Edge-list text format: first line "n m", then m lines "u v", 0-based, u < v.
Graph read_edge_list(const std::string& path);
void write_edge_list(const Graph& g, const std::string& path);

// Label file: one integer per line, n lines.
LabelVector read_labels(const std::string& path);
void write_labels(const LabelVector& labels, const std::string& path);

// One row per node, whitespace-separated values.
void write_matrix(const Eigen::MatrixXd& m, const std::string& path);

}  // namespace commdet
