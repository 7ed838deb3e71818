// Copyright 2026 The commdet Authors.
// SPDX-License-Identifier: Apache-2.0

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "commdet/harness.hpp"
#include "commdet/io.hpp"
#include "commdet/metrics.hpp"

namespace {

using namespace commdet;

struct PresetFlags {
  std::string preset;
  int n = 400;
  int k = 5;
  double a = 21.0;
  double b = 2.0;
};

void add_preset_flags(CLI::App* cmd, PresetFlags& flags) {
  cmd->add_option("--preset", flags.preset, "Dataset preset: assoc | disassoc")
      ->check(CLI::IsMember({"assoc", "disassoc"}));
  cmd->add_option("--n", flags.n, "Node count");
  cmd->add_option("--k", flags.k, "Community count");
  cmd->add_option("--a", flags.a, "Within-community intensity (p_in = a/n)");
  cmd->add_option("--b", flags.b, "Cross-community intensity (p_out = b/n)");
}

DatasetPreset resolve_preset(const CLI::App* cmd, const PresetFlags& flags) {
  DatasetPreset preset;
  if (flags.preset == "assoc") {
    preset = preset_associative();
  } else if (flags.preset == "disassoc") {
    preset = preset_disassociative();
  } else {
    preset.id = "custom";
    preset.params = {flags.n, flags.k, flags.a, flags.b};
    preset.mode = flags.a >= flags.b ? CommunityMode::kAssociative
                                     : CommunityMode::kDisassociative;
  }
  // Explicit flags override preset values.
  if (cmd->count("--n")) preset.params.n = flags.n;
  if (cmd->count("--k")) preset.params.k = flags.k;
  if (cmd->count("--a")) preset.params.a = flags.a;
  if (cmd->count("--b")) preset.params.b = flags.b;
  return preset;
}

void add_method_flags(CLI::App* cmd, MethodConfig& cfg) {
  cmd->add_option("--lambda", cfg.lambda, "Balance regularizer weight");
  cmd->add_option("--layers", cfg.layers, "Encoder layers");
  cmd->add_option("--heads", cfg.heads, "Attention heads");
  cmd->add_option("--hidden", cfg.hidden, "Hidden width");
  cmd->add_option("--restarts", cfg.restarts, "Training restarts");
  cmd->add_option("--steps", cfg.max_steps, "Max training steps");
  cmd->add_option("--lr", cfg.learning_rate, "Learning rate");
  cmd->add_option_function<std::string>(
         "--r-mode",
         [&cfg](const std::string& value) {
           cfg.r_mode = value == "literal" ? RMode::kLiteral : RMode::kStandard;
         },
         "Bethe Hessian r: standard (sqrt of NB radius) | literal (radius itself)")
      ->check(CLI::IsMember({"standard", "literal"}));
  cmd->add_option_function<std::string>(
         "--reg-mode",
         [&cfg](const std::string& value) {
           cfg.reg_mode = value == "literal" ? RegMode::kLiteral : RegMode::kNormalized;
         },
         "Balance regularizer: normalized | literal")
      ->check(CLI::IsMember({"normalized", "literal"}));
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path);
}

int cmd_gen(const CLI::App* cmd, const PresetFlags& flags, int count,
            std::uint64_t seed, const std::string& out_dir) {
  const DatasetPreset preset = resolve_preset(cmd, flags);
  std::filesystem::create_directories(out_dir);
  for (int i = 0; i < count; ++i) {
    auto [graph, labels] = ssbm_generate(preset.params, seed + i);
    const auto base = std::filesystem::path(out_dir);
    write_edge_list(graph, (base / ("graph_" + std::to_string(i) + ".txt")).string());
    write_labels(labels, (base / ("labels_" + std::to_string(i) + ".txt")).string());
  }
  std::cout << "wrote " << count << " graph/label pairs to " << out_dir << '\n';
  return 0;
}

int cmd_cluster(const std::string& graph_path, const std::string& method_name_arg,
                const std::string& mode_arg, int k, std::uint64_t seed,
                const MethodConfig& cfg, bool emit_history,
                const std::string& out_labels) {
  const auto method = parse_method(method_name_arg);
  if (!method) throw std::runtime_error("unknown method: " + method_name_arg);
  const Graph graph = read_edge_list(graph_path);
  const CommunityMode mode = mode_arg == "disassoc" ? CommunityMode::kDisassociative
                                                    : CommunityMode::kAssociative;

  const ClusterRun run = run_cluster(graph, *method, mode, k, seed, cfg);

  nlohmann::json j{
      {"schema", 1},
      {"method", method_name(*method)},
      {"mode", mode_arg},
      {"seed", seed},
      {"n", graph.num_nodes()},
      {"labels", run.labels},
      {"runtime_seconds", run.runtime_seconds},
  };
  j["soft_modularity"] =
      run.soft_modularity ? nlohmann::json(*run.soft_modularity) : nlohmann::json();
  if (emit_history && run.history) j["history"] = history_to_json(*run.history);
  std::cout << j.dump(2) << '\n';

  if (!out_labels.empty()) write_labels(run.labels, out_labels);
  return 0;
}

int cmd_bench(const CLI::App* cmd, const PresetFlags& flags,
              const std::string& methods_arg, int trials, std::uint64_t seed,
              int threads, const MethodConfig& method_cfg, const std::string& out) {
  BenchConfig cfg;
  cfg.preset = resolve_preset(cmd, flags);
  cfg.trials = trials;
  cfg.master_seed = seed;
  cfg.threads = threads;
  cfg.method_cfg = method_cfg;

  if (!methods_arg.empty() && methods_arg != "all") {
    cfg.methods.clear();
    std::istringstream stream(methods_arg);
    std::string token;
    while (std::getline(stream, token, ',')) {
      const auto method = parse_method(token);
      if (!method) throw std::runtime_error("unknown method: " + token);
      cfg.methods.push_back(*method);
    }
  }

  const BenchmarkSummary summary = run_bench(cfg);
  std::cout << summary_table(summary);
  if (!out.empty()) {
    write_text(out, summary_to_json(summary).dump(2) + "\n");
    std::cout << "results written to " << out << '\n';
  }
  return 0;
}

int cmd_eval(const std::string& truth_path, const std::string& pred_path,
             const std::string& graph_path, int k_arg) {
  const LabelVector truth = read_labels(truth_path);
  const LabelVector pred = read_labels(pred_path);
  int c = k_arg;
  if (c <= 0) {
    c = 1;
    for (int label : truth) c = std::max(c, label + 1);
    for (int label : pred) c = std::max(c, label + 1);
  }
  nlohmann::json j{
      {"schema", 1},
      {"overlap", overlap(truth, pred, c)},
      {"nmi", nmi(truth, pred)},
  };
  if (!graph_path.empty()) {
    const Graph graph = read_edge_list(graph_path);
    j["modularity"] = hard_modularity(graph, pred);
  }
  std::cout << j.dump(2) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Community detection on stochastic block models: spectral, greedy, "
               "and per-graph neural methods with a benchmark harness"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "Generate SSBM graph/label files");
  PresetFlags gen_flags;
  add_preset_flags(gen, gen_flags);
  int gen_count = 1;
  std::uint64_t gen_seed = 1;
  std::string gen_out = "data";
  gen->add_option("--count", gen_count, "Number of graphs")->check(CLI::PositiveNumber);
  gen->add_option("--seed", gen_seed, "Master seed; trial i uses seed + i");
  gen->add_option("--out", gen_out, "Output directory");

  // cluster
  auto* cluster = app.add_subcommand("cluster", "Cluster one graph file");
  std::string cluster_graph, cluster_method = "bethe-hessian", cluster_mode = "assoc";
  std::string cluster_out;
  int cluster_k = 5;
  std::uint64_t cluster_seed = 1;
  bool cluster_history = false;
  MethodConfig cluster_cfg;
  cluster->add_option("graph", cluster_graph, "Edge-list file")->required();
  cluster->add_option("--method", cluster_method,
                      "bethe-hessian | louvain | gnn-random | gnn-bh | "
                      "attention-random | attention-bh");
  cluster->add_option("--mode", cluster_mode, "assoc | disassoc")
      ->check(CLI::IsMember({"assoc", "disassoc"}));
  cluster->add_option("--k", cluster_k, "Cluster count");
  cluster->add_option("--seed", cluster_seed, "Seed");
  cluster->add_flag("--history", cluster_history, "Embed training history in JSON");
  cluster->add_option("--out", cluster_out, "Also write labels to this file");
  add_method_flags(cluster, cluster_cfg);

  // bench
  auto* bench = app.add_subcommand("bench", "Run the benchmark suite");
  PresetFlags bench_flags;
  add_preset_flags(bench, bench_flags);
  std::string bench_methods = "all", bench_out;
  int bench_trials = 20, bench_threads = 0;
  std::uint64_t bench_seed = 1;
  MethodConfig bench_cfg;
  bench->add_option("--methods", bench_methods, "Comma-separated method list or 'all'");
  bench->add_option("--trials", bench_trials, "Trial count")->check(CLI::PositiveNumber);
  bench->add_option("--seed", bench_seed, "Master seed");
  bench->add_option("--threads", bench_threads, "Worker threads (0 = hardware)");
  bench->add_option("--out", bench_out, "Write summary JSON here");
  add_method_flags(bench, bench_cfg);

  // eval
  auto* eval = app.add_subcommand("eval", "Compare two label files");
  std::string eval_truth, eval_pred, eval_graph;
  int eval_k = 0;
  eval->add_option("--truth", eval_truth, "Ground-truth labels")->required();
  eval->add_option("--pred", eval_pred, "Predicted labels")->required();
  eval->add_option("--graph", eval_graph, "Edge-list file (adds modularity)");
  eval->add_option("--k", eval_k, "Community count for overlap (0 = infer)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return cmd_gen(gen, gen_flags, gen_count, gen_seed, gen_out);
    if (cluster->parsed()) {
      return cmd_cluster(cluster_graph, cluster_method, cluster_mode, cluster_k,
                         cluster_seed, cluster_cfg, cluster_history, cluster_out);
    }
    if (bench->parsed()) {
      return cmd_bench(bench, bench_flags, bench_methods, bench_trials, bench_seed,
                       bench_threads, bench_cfg, bench_out);
    }
    if (eval->parsed()) return cmd_eval(eval_truth, eval_pred, eval_graph, eval_k);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
