// Copyright 2026 The commdet Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "commdet/graph.hpp"
#include "commdet/operators.hpp"
#include "commdet/spectral.hpp"

namespace commdet {

// N x C row-stochastic matrix of per-node cluster probabilities.
using SoftAssignment = Matrix;

enum class EncoderKind { kAttention, kGcn };
enum class InitKind { kBetheHessian, kRandom };

struct EncoderConfig {
  int layers = 2;
  int heads = 3;
  int hidden = 48;
  int clusters = 5;
  EncoderKind encoder_kind = EncoderKind::kAttention;
  InitKind init_kind = InitKind::kBetheHessian;
};

// Projection block: affine d -> H, batch norm over nodes, rectifier, then a
// skip-connected second affine H -> H.
struct ProjectionParams {
  Matrix w1;
  Vector b1;
  Vector bn_gamma, bn_beta;
  Matrix w2;
  Vector b2;
};

// One encoder layer: masked multi-head neighbor attention (self always
// attended), output mixing, residual + node-dimension norm, position-wise
// feed-forward, residual + norm.
struct AttentionLayerParams {
  std::vector<Matrix> wq, wk, wv;  // per head, H x (H/heads)
  Matrix wo;                       // H x H
  Matrix wf1;
  Vector bf1;
  Matrix wf2;
  Vector bf2;
  Vector n1_gamma, n1_beta;
  Vector n2_gamma, n2_beta;
};

struct GcnLayerParams {
  Matrix w;
  Vector b;
};

struct OutputHeadParams {
  Matrix w;  // H x C
  Vector b;
};

struct ModelParams {
  ProjectionParams projection;
  std::vector<AttentionLayerParams> attention_layers;
  std::vector<GcnLayerParams> gcn_layers;
  OutputHeadParams head;
};

// Deterministic per seed: zero-mean normal weights scaled by 1/sqrt(fan-in),
// zero biases, unit norm scales, zero shifts.
ModelParams init_params(const EncoderConfig& cfg, int input_dim, std::uint64_t seed);

ModelParams zeros_like(const ModelParams& params);

// Visits every tensor's flat storage in a fixed order; all ModelParams passed
// together must share shapes (params, grads, optimizer state).
void visit_tensors(ModelParams& params,
                   const std::function<void(Eigen::Map<Eigen::ArrayXd>)>& fn);
void visit_tensors(ModelParams& a, ModelParams& b, ModelParams& c, ModelParams& d,
                   const std::function<void(Eigen::Map<Eigen::ArrayXd>,
                                            Eigen::Map<Eigen::ArrayXd>,
                                            Eigen::Map<Eigen::ArrayXd>,
                                            Eigen::Map<Eigen::ArrayXd>)>& fn);

// BH mode passes through the spectral eigenvectors (d = k); random mode draws
// i.i.d. standard normals of the same width so the two inits differ only in
// content.
Matrix initial_embeddings(const Graph& g, const EncoderConfig& cfg,
                          const SpectralEmbedding* spectral, std::uint64_t seed);

struct BatchNormCache {
  Eigen::RowVectorXd mean, inv_std;
  Matrix xhat;
};

struct ProjectionCache {
  Matrix x0, pre;
  BatchNormCache bn;
  Matrix act;
};

struct AttentionLayerCache {
  Matrix input;
  std::vector<Matrix> q, k, v;
  // Per head, softmax weights laid out per node as [self, neighbors...] using
  // slot_offsets; zero weight is implied (and asserted in tests) elsewhere.
  std::vector<std::vector<double>> alpha;
  Matrix concat, mixed;
  BatchNormCache bn1;
  Matrix y1, ff_pre, ff_act;
  BatchNormCache bn2;
};

struct GcnLayerCache {
  Matrix input, ax, pre;
};

struct ForwardCache {
  EncoderConfig cfg;
  std::vector<int> slot_offsets;  // alpha row offsets, size n+1
  ProjectionCache projection;
  std::vector<AttentionLayerCache> attention;
  std::vector<GcnLayerCache> gcn;
  Matrix features;  // encoder output, input to the head
  Matrix logits;
  SoftAssignment u;
};

// Single encoder layers (also the finite-difference test surface).
Matrix attention_layer_forward(const Graph& g, const Matrix& x,
                               const AttentionLayerParams& params,
                               const std::vector<int>& slot_offsets,
                               AttentionLayerCache& cache);
Matrix attention_layer_backward(const Graph& g, const Matrix& dz,
                                const AttentionLayerParams& params,
                                const std::vector<int>& slot_offsets,
                                const AttentionLayerCache& cache,
                                AttentionLayerParams& grads);
Matrix gcn_layer_forward(const Graph& g, const Matrix& x,
                         const GcnLayerParams& params, GcnLayerCache& cache);
Matrix gcn_layer_backward(const Graph& g, const Matrix& dz,
                          const GcnLayerParams& params, const GcnLayerCache& cache,
                          GcnLayerParams& grads);

// Projection -> encoder layers -> affine head -> row softmax. Throws
// std::runtime_error naming the layer if activations go non-finite.
SoftAssignment forward(const Graph& g, const Matrix& x0, const ModelParams& params,
                       const EncoderConfig& cfg, ForwardCache& cache);

struct BackwardResult {
  ModelParams grads;
  Matrix dx0;
};

// Exact reverse-mode gradients of forward; du is dL/dU.
BackwardResult backward(const Graph& g, const ModelParams& params,
                        const ForwardCache& cache, const Matrix& du);

// Slot layout helper: row u of alpha spans [offsets[u], offsets[u+1]), first
// slot is the forced self-edge, then neighbors in adjacency order.
std::vector<int> attention_slot_offsets(const Graph& g);

}  // namespace commdet
