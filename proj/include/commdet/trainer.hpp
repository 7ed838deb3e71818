// Copyright 2026 The commdet Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "commdet/encoder.hpp"
#include "commdet/objective.hpp"

namespace commdet {

struct AdamHyper {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

struct AdamState {
  ModelParams m, v;
  long step = 0;
};

AdamState make_adam_state(const ModelParams& params);

// Bias-corrected adaptive moment update. Throws std::invalid_argument on a
// non-finite gradient without touching params or state.
void adam_step(ModelParams& params, ModelParams& grads, AdamState& state,
               const AdamHyper& hyper);

struct TrainConfig {
  EncoderConfig encoder;
  LossConfig loss;
  double learning_rate = 1e-3;
  int max_steps = 300;
  int patience = 30;             // steps without min_improvement before stopping
  double min_improvement = 1e-5;
  int restarts = 3;
  std::uint64_t seed = 0;
};

struct TrainHistory {
  std::vector<std::vector<double>> restart_losses;  // per restart, per step
  int best_restart = -1;
  int best_step = -1;
  double best_loss = std::numeric_limits<double>::infinity();
  double seconds = 0.0;
};

struct TrainResult {
  SoftAssignment u;       // lowest-loss assignment across restarts
  LabelVector labels;     // row-wise argmax of u, ties to the lowest index
  TrainHistory history;
};

struct TrainingError : std::runtime_error {
  TrainingError(const std::string& what, TrainHistory h)
      : std::runtime_error(what), history(std::move(h)) {}
  TrainHistory history;
};

// Unsupervised per-graph training: for each restart, fresh embeddings and
// parameters (seeds derived from cfg.seed and the restart index), full-graph
// gradient steps until max_steps or patience. Ground-truth labels are never
// an input. Throws TrainingError if every restart diverges.
TrainResult train_on_graph(const Graph& g, const SpectralEmbedding* spectral,
                           const TrainConfig& cfg);

LabelVector argmax_labels(const SoftAssignment& u);

}  // namespace commdet
