// Copyright 2026 The commdet Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "commdet/graph.hpp"
#include "commdet/objective.hpp"
#include "commdet/spectral.hpp"
#include "commdet/ssbm.hpp"
#include "commdet/trainer.hpp"

namespace commdet {

enum class Method {
  kTrueLabels,
  kBetheHessian,
  kLouvain,
  kGnnRandom,
  kGnnBh,
  kAttentionRandom,
  kAttentionBh,
};

std::string method_name(Method method);
std::optional<Method> parse_method(const std::string& name);
std::vector<Method> all_methods();

struct DatasetPreset {
  std::string id;
  SsbmParams params;
  CommunityMode mode = CommunityMode::kAssociative;
};

DatasetPreset preset_associative();     // SSBM(400, 5, 21, 2)
DatasetPreset preset_disassociative();  // SSBM(400, 5, 0, 18)

// Knobs shared by the spectral and neural pipelines; defaults follow the
// benchmark configuration (2 layers, 3 heads, hidden 48, lambda 0.5).
struct MethodConfig {
  double lambda = 0.5;
  int layers = 2;
  int heads = 3;
  int hidden = 48;
  int restarts = 3;
  int max_steps = 300;
  int patience = 30;
  double learning_rate = 1e-3;
  RMode r_mode = RMode::kStandard;
  RegMode reg_mode = RegMode::kNormalized;
};

struct TrialResult {
  std::string dataset;
  int trial = 0;
  std::uint64_t graph_seed = 0;
  Method method = Method::kTrueLabels;
  double modularity = 0.0;
  std::optional<double> overlap;  // absent for louvain (community count differs)
  double nmi = 0.0;
  double runtime_seconds = 0.0;
  std::optional<std::string> error;  // failed trials are recorded, not dropped
};

struct MetricStats {
  double mean = 0.0;
  double stddev = 0.0;  // sample std, 0 when a single trial
  int count = 0;
};

struct MethodSummary {
  Method method = Method::kTrueLabels;
  bool skipped = false;  // louvain on the disassociative preset
  std::optional<MetricStats> modularity, overlap, nmi;
};

struct BenchmarkSummary {
  std::string dataset;
  SsbmParams params;
  CommunityMode mode = CommunityMode::kAssociative;
  int trials = 0;
  std::uint64_t master_seed = 0;
  std::vector<TrialResult> results;  // trial-major, method order within
  std::vector<MethodSummary> methods;
};

struct BenchConfig {
  DatasetPreset preset;
  std::vector<Method> methods = all_methods();
  int trials = 20;
  std::uint64_t master_seed = 1;
  int threads = 0;  // 0: hardware concurrency
  MethodConfig method_cfg;
};

// Generates one graph per trial (graph seed = master seed + trial), runs
// every requested method, and aggregates mean +- sample std per metric.
// Deterministic for a fixed config at any parallelism level.
BenchmarkSummary run_bench(const BenchConfig& cfg);

struct ClusterRun {
  LabelVector labels;
  std::optional<double> soft_modularity;
  std::optional<TrainHistory> history;  // neural methods only
  double runtime_seconds = 0.0;
};

// Single-graph pipeline behind the `cluster` subcommand. Ground truth is not
// an input; method true-labels is rejected here.
ClusterRun run_cluster(const Graph& g, Method method, CommunityMode mode, int k,
                       std::uint64_t seed, const MethodConfig& cfg);

std::string summary_table(const BenchmarkSummary& summary);
nlohmann::json summary_to_json(const BenchmarkSummary& summary);
nlohmann::json trial_to_json(const TrialResult& result);
nlohmann::json history_to_json(const TrainHistory& history);

}  // namespace commdet
