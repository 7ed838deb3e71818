// Copyright 2026 The commdet Authors.
// SPDX-License-Identifier: Apache-2.0

#include "commdet/encoder.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "commdet/rng.hpp"

namespace commdet {

namespace {

constexpr double kBnEps = 1e-5;

Matrix random_matrix(Rng& rng, int rows, int cols, double scale) {
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) m(i, j) = rng.normal() * scale;
  }
  return m;
}

void check_finite(const Matrix& m, const std::string& where) {
  if (!m.allFinite()) {
    throw std::runtime_error("non-finite activation in " + where);
  }
}

Matrix batchnorm_forward(const Matrix& x, const Vector& gamma, const Vector& beta,
                         BatchNormCache& cache) {
  const double n = static_cast<double>(x.rows());
  cache.mean = x.colwise().sum() / n;
  Matrix centered = x.rowwise() - cache.mean;
  Eigen::RowVectorXd var = centered.array().square().colwise().sum().matrix() / n;
  cache.inv_std = (var.array() + kBnEps).sqrt().inverse().matrix();
  cache.xhat = centered.array().rowwise() * cache.inv_std.array();
  Matrix out = cache.xhat.array().rowwise() * gamma.transpose().array();
  out.array().rowwise() += beta.transpose().array();
  return out;
}

Matrix batchnorm_backward(const Matrix& dy, const Vector& gamma,
                          const BatchNormCache& cache, Vector& dgamma, Vector& dbeta) {
  const double n = static_cast<double>(dy.rows());
  dgamma = (dy.array() * cache.xhat.array()).colwise().sum().matrix().transpose();
  dbeta = dy.colwise().sum().transpose();
  Matrix dxhat = dy.array().rowwise() * gamma.transpose().array();
  const Eigen::RowVectorXd mean_dxhat = dxhat.colwise().sum() / n;
  const Eigen::RowVectorXd mean_dxhat_xhat =
      (dxhat.array() * cache.xhat.array()).colwise().sum().matrix() / n;
  Matrix dx = dxhat;
  dx.rowwise() -= mean_dxhat;
  dx.array() -= cache.xhat.array().rowwise() * mean_dxhat_xhat.array();
  dx.array().rowwise() *= cache.inv_std.array();
  return dx;
}

Matrix softmax_rows(const Matrix& logits) {
  Matrix u(logits.rows(), logits.cols());
  for (Eigen::Index i = 0; i < logits.rows(); ++i) {
    const double peak = logits.row(i).maxCoeff();
    Eigen::RowVectorXd e = (logits.row(i).array() - peak).exp();
    u.row(i) = e / e.sum();
  }
  return u;
}

Matrix projection_forward(const Matrix& x0, const ProjectionParams& p,
                          ProjectionCache& cache) {
  cache.x0 = x0;
  cache.pre = (x0 * p.w1).rowwise() + p.b1.transpose();
  Matrix normed = batchnorm_forward(cache.pre, p.bn_gamma, p.bn_beta, cache.bn);
  cache.act = normed.cwiseMax(0.0);
  Matrix out = (cache.act * p.w2).rowwise() + p.b2.transpose();
  out += cache.act;
  return out;
}

Matrix projection_backward(const Matrix& dz, const ProjectionParams& p,
                           const ProjectionCache& cache, ProjectionParams& grads) {
  grads.w2 = cache.act.transpose() * dz;
  grads.b2 = dz.colwise().sum().transpose();
  Matrix dact = dz + dz * p.w2.transpose();
  Matrix dnormed = (cache.act.array() > 0.0).select(dact, 0.0);
  Matrix dpre = batchnorm_backward(dnormed, p.bn_gamma, cache.bn, grads.bn_gamma,
                                   grads.bn_beta);
  grads.w1 = cache.x0.transpose() * dpre;
  grads.b1 = dpre.colwise().sum().transpose();
  return dpre * p.w1.transpose();
}

}  // namespace

std::vector<int> attention_slot_offsets(const Graph& g) {
  std::vector<int> offsets(g.num_nodes() + 1, 0);
  for (int u = 0; u < g.num_nodes(); ++u) {
    offsets[u + 1] = offsets[u] + 1 + g.degree(u);
  }
  return offsets;
}

Matrix attention_layer_forward(const Graph& g, const Matrix& x,
                               const AttentionLayerParams& p,
                               const std::vector<int>& slot_offsets,
                               AttentionLayerCache& cache) {
  const int n = g.num_nodes();
  const int heads = static_cast<int>(p.wq.size());
  const int hh = static_cast<int>(p.wq[0].cols());
  const double inv_sqrt = 1.0 / std::sqrt(static_cast<double>(hh));

  cache.input = x;
  cache.q.resize(heads);
  cache.k.resize(heads);
  cache.v.resize(heads);
  cache.alpha.assign(heads, std::vector<double>(slot_offsets[n], 0.0));
  cache.concat.resize(n, heads * hh);

  std::vector<double> scores;
  for (int h = 0; h < heads; ++h) {
    cache.q[h].noalias() = x * p.wq[h];
    cache.k[h].noalias() = x * p.wk[h];
    cache.v[h].noalias() = x * p.wv[h];
    const Matrix& q = cache.q[h];
    const Matrix& k = cache.k[h];
    const Matrix& v = cache.v[h];
    for (int u = 0; u < n; ++u) {
      const auto nbrs = g.neighbors(u);
      const int width = 1 + static_cast<int>(nbrs.size());
      scores.assign(width, 0.0);
      scores[0] = q.row(u).dot(k.row(u)) * inv_sqrt;
      for (int j = 0; j < static_cast<int>(nbrs.size()); ++j) {
        scores[j + 1] = q.row(u).dot(k.row(nbrs[j])) * inv_sqrt;
      }
      double peak = scores[0];
      for (double s : scores) peak = std::max(peak, s);
      double total = 0.0;
      for (double& s : scores) {
        s = std::exp(s - peak);
        total += s;
      }
      double* alpha = cache.alpha[h].data() + slot_offsets[u];
      Eigen::RowVectorXd out = Eigen::RowVectorXd::Zero(hh);
      for (int j = 0; j < width; ++j) {
        alpha[j] = scores[j] / total;
        out += alpha[j] * v.row(j == 0 ? u : nbrs[j - 1]);
      }
      cache.concat.row(u).segment(h * hh, hh) = out;
    }
  }

  cache.mixed.noalias() = cache.concat * p.wo;
  Matrix y1 = batchnorm_forward(x + cache.mixed, p.n1_gamma, p.n1_beta, cache.bn1);
  cache.y1 = y1;
  Matrix ff_pre = (y1 * p.wf1).rowwise() + p.bf1.transpose();
  cache.ff_act = ff_pre.cwiseMax(0.0);
  Matrix ff_out = (cache.ff_act * p.wf2).rowwise() + p.bf2.transpose();
  return batchnorm_forward(y1 + ff_out, p.n2_gamma, p.n2_beta, cache.bn2);
}

Matrix attention_layer_backward(const Graph& g, const Matrix& dz,
                                const AttentionLayerParams& p,
                                const std::vector<int>& slot_offsets,
                                const AttentionLayerCache& cache,
                                AttentionLayerParams& grads) {
  const int n = g.num_nodes();
  const int heads = static_cast<int>(p.wq.size());
  const int hh = static_cast<int>(p.wq[0].cols());
  const double inv_sqrt = 1.0 / std::sqrt(static_cast<double>(hh));

  Matrix dsum2 = batchnorm_backward(dz, p.n2_gamma, cache.bn2, grads.n2_gamma,
                                    grads.n2_beta);
  Matrix dy1 = dsum2;  // residual branch
  grads.wf2 = cache.ff_act.transpose() * dsum2;
  grads.bf2 = dsum2.colwise().sum().transpose();
  Matrix dff_act = dsum2 * p.wf2.transpose();
  Matrix dff_pre = (cache.ff_act.array() > 0.0).select(dff_act, 0.0);
  grads.wf1 = cache.y1.transpose() * dff_pre;
  grads.bf1 = dff_pre.colwise().sum().transpose();
  dy1 += dff_pre * p.wf1.transpose();

  Matrix dsum1 = batchnorm_backward(dy1, p.n1_gamma, cache.bn1, grads.n1_gamma,
                                    grads.n1_beta);
  Matrix dx = dsum1;  // residual branch
  grads.wo = cache.concat.transpose() * dsum1;
  Matrix dconcat = dsum1 * p.wo.transpose();

  std::vector<double> dalpha, dscore;
  for (int h = 0; h < heads; ++h) {
    const Matrix& q = cache.q[h];
    const Matrix& k = cache.k[h];
    const Matrix& v = cache.v[h];
    Matrix dq = Matrix::Zero(n, hh);
    Matrix dk = Matrix::Zero(n, hh);
    Matrix dv = Matrix::Zero(n, hh);
    for (int u = 0; u < n; ++u) {
      const auto nbrs = g.neighbors(u);
      const int width = 1 + static_cast<int>(nbrs.size());
      const double* alpha = cache.alpha[h].data() + slot_offsets[u];
      const Eigen::RowVectorXd dout = dconcat.row(u).segment(h * hh, hh);

      dalpha.assign(width, 0.0);
      double weighted = 0.0;
      for (int j = 0; j < width; ++j) {
        const int node = j == 0 ? u : nbrs[j - 1];
        dalpha[j] = dout.dot(v.row(node));
        dv.row(node) += alpha[j] * dout;
        weighted += alpha[j] * dalpha[j];
      }
      dscore.assign(width, 0.0);
      for (int j = 0; j < width; ++j) {
        dscore[j] = alpha[j] * (dalpha[j] - weighted);
      }
      for (int j = 0; j < width; ++j) {
        const int node = j == 0 ? u : nbrs[j - 1];
        dq.row(u) += dscore[j] * inv_sqrt * k.row(node);
        dk.row(node) += dscore[j] * inv_sqrt * q.row(u);
      }
    }
    grads.wq[h] = cache.input.transpose() * dq;
    grads.wk[h] = cache.input.transpose() * dk;
    grads.wv[h] = cache.input.transpose() * dv;
    dx += dq * p.wq[h].transpose();
    dx += dk * p.wk[h].transpose();
    dx += dv * p.wv[h].transpose();
  }
  return dx;
}

Matrix gcn_layer_forward(const Graph& g, const Matrix& x, const GcnLayerParams& p,
                         GcnLayerCache& cache) {
  cache.input = x;
  cache.ax = normalized_adjacency_apply(g, x);
  cache.pre = (cache.ax * p.w).rowwise() + p.b.transpose();
  Matrix out = cache.pre.cwiseMax(0.0);
  if (p.w.rows() == p.w.cols()) out += x;  // residual when shapes match
  return out;
}

Matrix gcn_layer_backward(const Graph& g, const Matrix& dz, const GcnLayerParams& p,
                          const GcnLayerCache& cache, GcnLayerParams& grads) {
  Matrix dpre = (cache.pre.array() > 0.0).select(dz, 0.0);
  grads.w = cache.ax.transpose() * dpre;
  grads.b = dpre.colwise().sum().transpose();
  // Ahat is symmetric, so the adjoint reuses the forward apply.
  Matrix dx = normalized_adjacency_apply(g, (dpre * p.w.transpose()).eval());
  if (p.w.rows() == p.w.cols()) dx += dz;
  return dx;
}

ModelParams init_params(const EncoderConfig& cfg, int input_dim, std::uint64_t seed) {
  if (cfg.layers < 1 || cfg.heads < 1 || cfg.hidden < 1 || cfg.clusters < 1) {
    throw std::invalid_argument("init_params: counts must be positive");
  }
  if (cfg.hidden % cfg.heads != 0) {
    throw std::invalid_argument("init_params: hidden width not divisible by heads");
  }
  const int h = cfg.hidden;
  const int hh = h / cfg.heads;
  Rng rng(seed);
  const double in_scale = 1.0 / std::sqrt(static_cast<double>(input_dim));
  const double h_scale = 1.0 / std::sqrt(static_cast<double>(h));

  ModelParams p;
  p.projection.w1 = random_matrix(rng, input_dim, h, in_scale);
  p.projection.b1 = Vector::Zero(h);
  p.projection.bn_gamma = Vector::Ones(h);
  p.projection.bn_beta = Vector::Zero(h);
  p.projection.w2 = random_matrix(rng, h, h, h_scale);
  p.projection.b2 = Vector::Zero(h);

  if (cfg.encoder_kind == EncoderKind::kAttention) {
    p.attention_layers.resize(cfg.layers);
    for (auto& layer : p.attention_layers) {
      layer.wq.reserve(cfg.heads);
      layer.wk.reserve(cfg.heads);
      layer.wv.reserve(cfg.heads);
      for (int i = 0; i < cfg.heads; ++i) {
        layer.wq.push_back(random_matrix(rng, h, hh, h_scale));
        layer.wk.push_back(random_matrix(rng, h, hh, h_scale));
        layer.wv.push_back(random_matrix(rng, h, hh, h_scale));
      }
      layer.wo = random_matrix(rng, h, h, h_scale);
      layer.wf1 = random_matrix(rng, h, h, h_scale);
      layer.bf1 = Vector::Zero(h);
      layer.wf2 = random_matrix(rng, h, h, h_scale);
      layer.bf2 = Vector::Zero(h);
      layer.n1_gamma = Vector::Ones(h);
      layer.n1_beta = Vector::Zero(h);
      layer.n2_gamma = Vector::Ones(h);
      layer.n2_beta = Vector::Zero(h);
    }
  } else {
    p.gcn_layers.resize(cfg.layers);
    for (auto& layer : p.gcn_layers) {
      layer.w = random_matrix(rng, h, h, h_scale);
      layer.b = Vector::Zero(h);
    }
  }

  p.head.w = random_matrix(rng, h, cfg.clusters, h_scale);
  p.head.b = Vector::Zero(cfg.clusters);
  return p;
}

namespace {

template <typename Fn>
void visit_impl(ModelParams& p, Fn&& fn) {
  auto mat = [&fn](Matrix& m) { fn(Eigen::Map<Eigen::ArrayXd>(m.data(), m.size())); };
  auto vec = [&fn](Vector& v) { fn(Eigen::Map<Eigen::ArrayXd>(v.data(), v.size())); };
  mat(p.projection.w1);
  vec(p.projection.b1);
  vec(p.projection.bn_gamma);
  vec(p.projection.bn_beta);
  mat(p.projection.w2);
  vec(p.projection.b2);
  for (auto& layer : p.attention_layers) {
    for (auto& m : layer.wq) mat(m);
    for (auto& m : layer.wk) mat(m);
    for (auto& m : layer.wv) mat(m);
    mat(layer.wo);
    mat(layer.wf1);
    vec(layer.bf1);
    mat(layer.wf2);
    vec(layer.bf2);
    vec(layer.n1_gamma);
    vec(layer.n1_beta);
    vec(layer.n2_gamma);
    vec(layer.n2_beta);
  }
  for (auto& layer : p.gcn_layers) {
    mat(layer.w);
    vec(layer.b);
  }
  mat(p.head.w);
  vec(p.head.b);
}

std::vector<Eigen::Map<Eigen::ArrayXd>> collect_views(ModelParams& p) {
  std::vector<Eigen::Map<Eigen::ArrayXd>> views;
  visit_impl(p, [&views](Eigen::Map<Eigen::ArrayXd> view) { views.push_back(view); });
  return views;
}

}  // namespace

void visit_tensors(ModelParams& params,
                   const std::function<void(Eigen::Map<Eigen::ArrayXd>)>& fn) {
  visit_impl(params, fn);
}

void visit_tensors(ModelParams& a, ModelParams& b, ModelParams& c, ModelParams& d,
                   const std::function<void(Eigen::Map<Eigen::ArrayXd>,
                                            Eigen::Map<Eigen::ArrayXd>,
                                            Eigen::Map<Eigen::ArrayXd>,
                                            Eigen::Map<Eigen::ArrayXd>)>& fn) {
  auto va = collect_views(a);
  auto vb = collect_views(b);
  auto vc = collect_views(c);
  auto vd = collect_views(d);
  if (va.size() != vb.size() || va.size() != vc.size() || va.size() != vd.size()) {
    throw std::invalid_argument("visit_tensors: parameter structures differ");
  }
  for (std::size_t i = 0; i < va.size(); ++i) {
    if (va[i].size() != vb[i].size() || va[i].size() != vc[i].size() ||
        va[i].size() != vd[i].size()) {
      throw std::invalid_argument("visit_tensors: tensor shapes differ");
    }
    fn(va[i], vb[i], vc[i], vd[i]);
  }
}

ModelParams zeros_like(const ModelParams& params) {
  ModelParams z = params;
  visit_impl(z, [](Eigen::Map<Eigen::ArrayXd> view) { view.setZero(); });
  return z;
}

Matrix initial_embeddings(const Graph& g, const EncoderConfig& cfg,
                          const SpectralEmbedding* spectral, std::uint64_t seed) {
  if (cfg.init_kind == InitKind::kBetheHessian) {
    if (spectral == nullptr) {
      throw std::invalid_argument(
          "initial_embeddings: bethe-hessian init requires a spectral embedding");
    }
    if (spectral->vectors.rows() != g.num_nodes()) {
      throw std::invalid_argument("initial_embeddings: embedding row count mismatch");
    }
    return spectral->vectors;
  }
  Rng rng(seed);
  Matrix m(g.num_nodes(), cfg.clusters);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = rng.normal();
  }
  return m;
}

SoftAssignment forward(const Graph& g, const Matrix& x0, const ModelParams& params,
                       const EncoderConfig& cfg, ForwardCache& cache) {
  if (x0.rows() != g.num_nodes()) {
    throw std::invalid_argument("forward: embedding row count != node count");
  }
  cache.cfg = cfg;
  cache.attention.clear();
  cache.gcn.clear();

  Matrix z = projection_forward(x0, params.projection, cache.projection);
  check_finite(z, "projection block");

  if (cfg.encoder_kind == EncoderKind::kAttention) {
    cache.slot_offsets = attention_slot_offsets(g);
    cache.attention.resize(params.attention_layers.size());
    for (std::size_t i = 0; i < params.attention_layers.size(); ++i) {
      z = attention_layer_forward(g, z, params.attention_layers[i],
                                  cache.slot_offsets, cache.attention[i]);
      check_finite(z, "attention layer " + std::to_string(i));
    }
  } else {
    cache.gcn.resize(params.gcn_layers.size());
    for (std::size_t i = 0; i < params.gcn_layers.size(); ++i) {
      z = gcn_layer_forward(g, z, params.gcn_layers[i], cache.gcn[i]);
      check_finite(z, "gcn layer " + std::to_string(i));
    }
  }

  cache.features = z;
  cache.logits = (z * params.head.w).rowwise() + params.head.b.transpose();
  cache.u = softmax_rows(cache.logits);
  check_finite(cache.u, "output head");
  return cache.u;
}

BackwardResult backward(const Graph& g, const ModelParams& params,
                        const ForwardCache& cache, const Matrix& du) {
  if (du.rows() != cache.u.rows() || du.cols() != cache.u.cols()) {
    throw std::invalid_argument("backward: upstream gradient shape mismatch");
  }
  BackwardResult result;
  result.grads = zeros_like(params);

  // Row-wise softmax backward.
  const Vector dot = (du.array() * cache.u.array()).rowwise().sum();
  Matrix dlogits = cache.u.array() * (du.array().colwise() - dot.array());

  result.grads.head.w = cache.features.transpose() * dlogits;
  result.grads.head.b = dlogits.colwise().sum().transpose();
  Matrix dz = dlogits * params.head.w.transpose();

  if (cache.cfg.encoder_kind == EncoderKind::kAttention) {
    for (int i = static_cast<int>(params.attention_layers.size()) - 1; i >= 0; --i) {
      dz = attention_layer_backward(g, dz, params.attention_layers[i],
                                    cache.slot_offsets, cache.attention[i],
                                    result.grads.attention_layers[i]);
    }
  } else {
    for (int i = static_cast<int>(params.gcn_layers.size()) - 1; i >= 0; --i) {
      dz = gcn_layer_backward(g, dz, params.gcn_layers[i], cache.gcn[i],
                              result.grads.gcn_layers[i]);
    }
  }

  result.dx0 = projection_backward(dz, params.projection, cache.projection,
                                   result.grads.projection);
  return result;
}

}  // namespace commdet
