// Copyright 2026 The commdet Authors.
// SPDX-License-Identifier: Apache-2.0

#include "commdet/trainer.hpp"

#include <chrono>
#include <cmath>

#include "commdet/rng.hpp"

namespace commdet {

AdamState make_adam_state(const ModelParams& params) {
  return {zeros_like(params), zeros_like(params), 0};
}

void adam_step(ModelParams& params, ModelParams& grads, AdamState& state,
               const AdamHyper& hyper) {
  bool finite = true;
  visit_tensors(grads, [&finite](Eigen::Map<Eigen::ArrayXd> g) {
    finite = finite && g.isFinite().all();
  });
  if (!finite) {
    throw std::invalid_argument("adam_step: non-finite gradient");
  }

  ++state.step;
  const double bc1 = 1.0 - std::pow(hyper.beta1, static_cast<double>(state.step));
  const double bc2 = 1.0 - std::pow(hyper.beta2, static_cast<double>(state.step));
  visit_tensors(
      params, grads, state.m, state.v,
      [&](Eigen::Map<Eigen::ArrayXd> p, Eigen::Map<Eigen::ArrayXd> g,
          Eigen::Map<Eigen::ArrayXd> m, Eigen::Map<Eigen::ArrayXd> v) {
        m = hyper.beta1 * m + (1.0 - hyper.beta1) * g;
        v = hyper.beta2 * v + (1.0 - hyper.beta2) * g.square();
        p -= hyper.learning_rate * (m / bc1) / ((v / bc2).sqrt() + hyper.epsilon);
      });
}

LabelVector argmax_labels(const SoftAssignment& u) {
  LabelVector labels(u.rows());
  for (Eigen::Index i = 0; i < u.rows(); ++i) {
    int best = 0;
    for (Eigen::Index c = 1; c < u.cols(); ++c) {
      if (u(i, c) > u(i, best)) best = static_cast<int>(c);
    }
    labels[i] = best;
  }
  return labels;
}

TrainResult train_on_graph(const Graph& g, const SpectralEmbedding* spectral,
                           const TrainConfig& cfg) {
  if (g.num_edges() == 0) {
    throw std::invalid_argument("train_on_graph: graph has no edges");
  }
  const auto started = std::chrono::steady_clock::now();

  TrainResult result;
  TrainHistory& history = result.history;
  history.restart_losses.resize(cfg.restarts);

  AdamHyper hyper;
  hyper.learning_rate = cfg.learning_rate;

  for (int rep = 0; rep < cfg.restarts; ++rep) {
    const std::uint64_t restart_seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(rep));
    Matrix x0 = initial_embeddings(g, cfg.encoder, spectral, derive_seed(restart_seed, 1));
    ModelParams params = init_params(cfg.encoder, static_cast<int>(x0.cols()),
                                     derive_seed(restart_seed, 2));
    AdamState state = make_adam_state(params);

    double restart_best = std::numeric_limits<double>::infinity();
    int stale_steps = 0;
    ForwardCache cache;
    for (int step = 0; step < cfg.max_steps; ++step) {
      SoftAssignment u;
      try {
        u = forward(g, x0, params, cfg.encoder, cache);
      } catch (const std::runtime_error&) {
        break;  // non-finite activations: abandon this restart
      }
      const double value = loss(g, u, cfg.loss);
      if (!std::isfinite(value)) break;
      history.restart_losses[rep].push_back(value);
      if (value < history.best_loss) {
        history.best_loss = value;
        history.best_restart = rep;
        history.best_step = step;
        result.u = u;
      }
      if (value < restart_best - cfg.min_improvement) {
        restart_best = value;
        stale_steps = 0;
      } else if (++stale_steps >= cfg.patience) {
        break;
      }
      const Matrix du = loss_grad_u(g, u, cfg.loss);
      BackwardResult back = backward(g, params, cache, du);
      bool grads_finite = true;
      visit_tensors(back.grads, [&grads_finite](Eigen::Map<Eigen::ArrayXd> view) {
        grads_finite = grads_finite && view.isFinite().all();
      });
      if (!grads_finite) break;
      adam_step(params, back.grads, state, hyper);
    }
  }

  history.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  if (history.best_restart < 0) {
    throw TrainingError("train_on_graph: every restart diverged", history);
  }
  result.labels = argmax_labels(result.u);
  return result;
}

}  // namespace commdet
