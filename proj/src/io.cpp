// Copyright 2026 The commdet Authors.
// SPDX-License-Identifier: Apache-2.0

#include "commdet/io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace commdet {

namespace {

[[noreturn]] void parse_error(const std::string& path, int line, const std::string& what) {
  throw std::runtime_error(path + ":" + std::to_string(line) + ": " + what);
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  return out;
}

}  // namespace

Graph read_edge_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::string line;
  int lineno = 0;

  if (!std::getline(in, line)) parse_error(path, 1, "missing header line");
  ++lineno;
  std::istringstream header(line);
  int n = 0, m = 0;
  if (!(header >> n >> m)) parse_error(path, lineno, "expected 'n m'");

  std::vector<Edge> edges;
  edges.reserve(m);
  for (int i = 0; i < m; ++i) {
    if (!std::getline(in, line)) parse_error(path, lineno + 1, "unexpected end of file");
    ++lineno;
    std::istringstream row(line);
    int u = 0, v = 0;
    if (!(row >> u >> v)) parse_error(path, lineno, "expected 'u v'");
    if (u >= v) parse_error(path, lineno, "require u < v");
    edges.emplace_back(u, v);
  }
  try {
    return Graph(n, std::move(edges));
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

void write_edge_list(const Graph& g, const std::string& path) {
  auto out = open_out(path);
  out << g.num_nodes() << ' ' << g.num_edges() << '\n';
  for (const auto& [u, v] : g.edges()) out << u << ' ' << v << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
}

LabelVector read_labels(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  LabelVector labels;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream row(line);
    int label = 0;
    if (!(row >> label) || label < 0) parse_error(path, lineno, "expected a nonnegative label");
    labels.push_back(label);
  }
  return labels;
}

void write_labels(const LabelVector& labels, const std::string& path) {
  auto out = open_out(path);
  for (int label : labels) out << label << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
}

void write_matrix(const Eigen::MatrixXd& m, const std::string& path) {
  auto out = open_out(path);
  out.precision(17);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out << ' ';
      out << m(i, j);
    }
    out << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace commdet
