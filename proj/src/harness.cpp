// Copyright 2026 The commdet Authors.
// SPDX-License-Identifier: Apache-2.0

#include "commdet/harness.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "commdet/kmeans.hpp"
#include "commdet/louvain.hpp"
#include "commdet/metrics.hpp"
#include "commdet/rng.hpp"

namespace commdet {

namespace {

struct MethodInfo {
  Method method;
  const char* name;
};

constexpr MethodInfo kMethods[] = {
    {Method::kTrueLabels, "true-labels"},
    {Method::kBetheHessian, "bethe-hessian"},
    {Method::kLouvain, "louvain"},
    {Method::kGnnRandom, "gnn-random"},
    {Method::kGnnBh, "gnn-bh"},
    {Method::kAttentionRandom, "attention-random"},
    {Method::kAttentionBh, "attention-bh"},
};

bool is_neural(Method m) {
  return m == Method::kGnnRandom || m == Method::kGnnBh ||
         m == Method::kAttentionRandom || m == Method::kAttentionBh;
}

TrainConfig make_train_config(Method method, CommunityMode mode, int k,
                              std::uint64_t seed, const MethodConfig& cfg) {
  TrainConfig tc;
  tc.encoder.layers = cfg.layers;
  tc.encoder.heads = cfg.heads;
  tc.encoder.hidden = cfg.hidden;
  tc.encoder.clusters = k;
  tc.encoder.encoder_kind =
      (method == Method::kGnnRandom || method == Method::kGnnBh) ? EncoderKind::kGcn
                                                                 : EncoderKind::kAttention;
  tc.encoder.init_kind =
      (method == Method::kGnnBh || method == Method::kAttentionBh)
          ? InitKind::kBetheHessian
          : InitKind::kRandom;
  tc.loss.mode = mode;
  tc.loss.lambda = cfg.lambda;
  tc.loss.clusters = k;
  tc.loss.reg_mode = cfg.reg_mode;
  tc.learning_rate = cfg.learning_rate;
  tc.max_steps = cfg.max_steps;
  tc.patience = cfg.patience;
  tc.restarts = cfg.restarts;
  tc.seed = seed;
  return tc;
}

MetricStats stats_of(const std::vector<double>& values) {
  MetricStats s;
  s.count = static_cast<int>(values.size());
  if (values.empty()) return s;
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / s.count;
  if (s.count > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.stddev = std::sqrt(ss / (s.count - 1));
  }
  return s;
}

}  // namespace

std::string method_name(Method method) {
  for (const auto& info : kMethods) {
    if (info.method == method) return info.name;
  }
  return "unknown";
}

std::optional<Method> parse_method(const std::string& name) {
  for (const auto& info : kMethods) {
    if (name == info.name) return info.method;
  }
  return std::nullopt;
}

std::vector<Method> all_methods() {
  std::vector<Method> out;
  for (const auto& info : kMethods) out.push_back(info.method);
  return out;
}

DatasetPreset preset_associative() {
  return {"assoc", SsbmParams{400, 5, 21.0, 2.0}, CommunityMode::kAssociative};
}

DatasetPreset preset_disassociative() {
  return {"disassoc", SsbmParams{400, 5, 0.0, 18.0}, CommunityMode::kDisassociative};
}

ClusterRun run_cluster(const Graph& g, Method method, CommunityMode mode, int k,
                       std::uint64_t seed, const MethodConfig& cfg) {
  const auto started = std::chrono::steady_clock::now();
  ClusterRun run;
  switch (method) {
    case Method::kTrueLabels:
      throw std::invalid_argument("run_cluster: true-labels is only meaningful in bench");
    case Method::kBetheHessian: {
      auto clustering = bethe_hessian_cluster(g, k, mode, seed, cfg.r_mode);
      run.labels = std::move(clustering.labels);
      break;
    }
    case Method::kLouvain: {
      auto result = louvain(g, seed);
      run.labels = std::move(result.labels);
      break;
    }
    default: {
      TrainConfig tc = make_train_config(method, mode, k, seed, cfg);
      SpectralEmbedding embedding;
      const SpectralEmbedding* spectral = nullptr;
      if (tc.encoder.init_kind == InitKind::kBetheHessian) {
        embedding = bethe_hessian_embedding(g, k, mode, cfg.r_mode);
        spectral = &embedding;
      }
      TrainResult trained = train_on_graph(g, spectral, tc);
      run.labels = std::move(trained.labels);
      run.soft_modularity = soft_modularity(g, trained.u);
      run.history = std::move(trained.history);
      break;
    }
  }
  run.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return run;
}

BenchmarkSummary run_bench(const BenchConfig& cfg) {
  if (cfg.trials < 1) throw std::invalid_argument("run_bench: need trials >= 1");

  BenchmarkSummary summary;
  summary.dataset = cfg.preset.id;
  summary.params = cfg.preset.params;
  summary.mode = cfg.preset.mode;
  summary.trials = cfg.trials;
  summary.master_seed = cfg.master_seed;

  // Louvain only merges neighbors, so it is skipped on the disassociative
  // preset and reported as an N/A row.
  std::vector<Method> active;
  bool louvain_skipped = false;
  for (Method m : cfg.methods) {
    if (m == Method::kLouvain && cfg.preset.mode == CommunityMode::kDisassociative) {
      louvain_skipped = true;
    } else {
      active.push_back(m);
    }
  }

  const int k = cfg.preset.params.k;
  std::vector<std::vector<TrialResult>> grid(
      cfg.trials, std::vector<TrialResult>(active.size()));

  auto run_trial = [&](int trial) {
    const std::uint64_t graph_seed = cfg.master_seed + static_cast<std::uint64_t>(trial);
    auto [graph, truth] = ssbm_generate(cfg.preset.params, graph_seed);
    for (std::size_t mi = 0; mi < active.size(); ++mi) {
      const Method method = active[mi];
      TrialResult& tr = grid[trial][mi];
      tr.dataset = cfg.preset.id;
      tr.trial = trial;
      tr.graph_seed = graph_seed;
      tr.method = method;
      const std::uint64_t method_seed = derive_seed(
          derive_seed(cfg.master_seed, 0x4000 + static_cast<std::uint64_t>(method)),
          static_cast<std::uint64_t>(trial));
      const auto started = std::chrono::steady_clock::now();
      try {
        LabelVector labels;
        if (method == Method::kTrueLabels) {
          labels = truth;
        } else {
          labels = run_cluster(graph, method, cfg.preset.mode, k, method_seed,
                               cfg.method_cfg)
                       .labels;
        }
        tr.modularity = hard_modularity(graph, labels);
        tr.nmi = nmi(truth, labels);
        if (method != Method::kLouvain) tr.overlap = overlap(truth, labels, k);
      } catch (const std::exception& e) {
        tr.error = e.what();
      }
      tr.runtime_seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
              .count();
    }
  };

  int thread_count = cfg.threads > 0
                         ? cfg.threads
                         : static_cast<int>(std::thread::hardware_concurrency());
  thread_count = std::max(1, std::min(thread_count, cfg.trials));
  if (thread_count == 1) {
    for (int t = 0; t < cfg.trials; ++t) run_trial(t);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> workers;
    workers.reserve(thread_count);
    for (int w = 0; w < thread_count; ++w) {
      workers.emplace_back([&]() {
        for (int t = next.fetch_add(1); t < cfg.trials; t = next.fetch_add(1)) {
          run_trial(t);
        }
      });
    }
    for (auto& worker : workers) worker.join();
  }

  // Flatten in trial-major order so reductions are order-fixed.
  for (int t = 0; t < cfg.trials; ++t) {
    for (auto& tr : grid[t]) summary.results.push_back(std::move(tr));
  }

  for (Method m : cfg.methods) {
    MethodSummary ms;
    ms.method = m;
    if (m == Method::kLouvain && louvain_skipped) {
      ms.skipped = true;
      summary.methods.push_back(ms);
      continue;
    }
    std::vector<double> mods, overlaps, nmis;
    for (const auto& tr : summary.results) {
      if (tr.method != m || tr.error.has_value()) continue;
      mods.push_back(tr.modularity);
      if (tr.overlap) overlaps.push_back(*tr.overlap);
      nmis.push_back(tr.nmi);
    }
    if (!mods.empty()) ms.modularity = stats_of(mods);
    if (!overlaps.empty()) ms.overlap = stats_of(overlaps);
    if (!nmis.empty()) ms.nmi = stats_of(nmis);
    summary.methods.push_back(ms);
  }
  return summary;
}

namespace {

std::string cell(const std::optional<MetricStats>& stats) {
  if (!stats) return "N/A";
  std::ostringstream out;
  out << std::fixed << std::setprecision(3) << stats->mean << " +- " << stats->stddev;
  return out.str();
}

}  // namespace

std::string summary_table(const BenchmarkSummary& summary) {
  std::ostringstream out;
  out << "Dataset: " << summary.dataset << "  (n=" << summary.params.n
      << ", k=" << summary.params.k << ", a=" << summary.params.a
      << ", b=" << summary.params.b << ", trials=" << summary.trials << ")\n";
  out << std::left << std::setw(18) << "Algorithm" << std::setw(18) << "Modularity"
      << std::setw(18) << "Overlap" << std::setw(18) << "NMI" << '\n';
  out << std::string(72, '-') << '\n';
  for (const auto& ms : summary.methods) {
    out << std::left << std::setw(18) << method_name(ms.method);
    if (ms.skipped) {
      out << std::setw(18) << "N/A" << std::setw(18) << "N/A" << std::setw(18) << "N/A";
    } else {
      out << std::setw(18) << cell(ms.modularity) << std::setw(18) << cell(ms.overlap)
          << std::setw(18) << cell(ms.nmi);
    }
    out << '\n';
  }
  return out.str();
}

nlohmann::json trial_to_json(const TrialResult& tr) {
  nlohmann::json j{
      {"dataset", tr.dataset},
      {"trial", tr.trial},
      {"graph_seed", tr.graph_seed},
      {"method", method_name(tr.method)},
      {"runtime_seconds", tr.runtime_seconds},
  };
  if (tr.error) {
    j["error"] = *tr.error;
  } else {
    j["metrics"] = {{"modularity", tr.modularity}, {"nmi", tr.nmi}};
    if (tr.overlap) j["metrics"]["overlap"] = *tr.overlap;
  }
  return j;
}

nlohmann::json history_to_json(const TrainHistory& history) {
  return nlohmann::json{
      {"restart_losses", history.restart_losses},
      {"best_restart", history.best_restart},
      {"best_step", history.best_step},
      {"best_loss", history.best_loss},
      {"seconds", history.seconds},
  };
}

nlohmann::json summary_to_json(const BenchmarkSummary& summary) {
  nlohmann::json methods = nlohmann::json::array();
  for (const auto& ms : summary.methods) {
    nlohmann::json j{{"method", method_name(ms.method)}, {"skipped", ms.skipped}};
    auto put = [&j](const char* key, const std::optional<MetricStats>& stats) {
      if (stats) {
        j[key] = {{"mean", stats->mean}, {"std", stats->stddev}, {"count", stats->count}};
      } else {
        j[key] = nullptr;
      }
    };
    put("modularity", ms.modularity);
    put("overlap", ms.overlap);
    put("nmi", ms.nmi);
    methods.push_back(std::move(j));
  }

  nlohmann::json trials = nlohmann::json::array();
  for (const auto& tr : summary.results) trials.push_back(trial_to_json(tr));

  return nlohmann::json{
      {"schema", 1},
      {"dataset", summary.dataset},
      {"params",
       {{"n", summary.params.n},
        {"k", summary.params.k},
        {"a", summary.params.a},
        {"b", summary.params.b}}},
      {"mode", summary.mode == CommunityMode::kAssociative ? "associative"
                                                           : "disassociative"},
      {"trials", summary.trials},
      {"master_seed", summary.master_seed},
      {"methods", methods},
      {"results", trials},
  };
}

}  // namespace commdet
