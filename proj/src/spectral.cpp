// Copyright 2026 The commdet Authors.
// SPDX-License-Identifier: Apache-2.0

#include "commdet/spectral.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "commdet/kmeans.hpp"
#include "commdet/rng.hpp"

namespace commdet {

namespace {

Vector random_unit_vector(int dim, std::uint64_t seed) {
  Rng rng(seed);
  Vector v(dim);
  for (int i = 0; i < dim; ++i) v[i] = rng.normal();
  v.normalize();
  return v;
}

double moment_radius(const Graph& g) {
  double sum_d = 0.0, sum_d2 = 0.0;
  for (int u = 0; u < g.num_nodes(); ++u) {
    const double d = g.degree(u);
    sum_d += d;
    sum_d2 += d * d;
  }
  return sum_d2 / sum_d - 1.0;
}

}  // namespace

RadiusEstimate estimate_r(const Graph& g, CommunityMode mode, RMode r_mode) {
  if (g.num_edges() == 0) {
    throw std::invalid_argument("estimate_r: graph has no edges");
  }
  const int n = g.num_nodes();
  constexpr int kMaxIters = 2000;
  constexpr double kTol = 1e-10;

  // Companion state z = (x, y); one step maps to (A x + (I - D) y, x).
  Vector x = random_unit_vector(2 * n, 0x6a09e667f3bcc908ULL).head(n).eval();
  Vector y = random_unit_vector(2 * n, 0xbb67ae8584caa73bULL).head(n).eval();
  {
    const double norm = std::sqrt(x.squaredNorm() + y.squaredNorm());
    x /= norm;
    y /= norm;
  }

  RadiusEstimate est;
  double prev_ratio = -1.0;
  int settled = 0;
  bool converged = false;
  double ratio = moment_radius(g);
  int iters = 0;
  for (int t = 0; t < kMaxIters; ++t) {
    Vector ax = adjacency_apply(g, x);
    for (int u = 0; u < n; ++u) ax[u] += (1.0 - g.degree(u)) * y[u];
    y = x;
    x = std::move(ax);
    const double norm = std::sqrt(x.squaredNorm() + y.squaredNorm());
    if (norm == 0.0 || !std::isfinite(norm)) break;
    ratio = norm;
    x /= norm;
    y /= norm;
    iters = t + 1;
    if (prev_ratio >= 0.0 &&
        std::abs(ratio - prev_ratio) <= kTol * std::max(1.0, std::abs(ratio))) {
      if (++settled >= 3) {
        converged = true;
        break;
      }
    } else {
      settled = 0;
    }
    prev_ratio = ratio;
  }

  est.converged = converged;
  est.iterations = iters;
  est.rho = converged ? ratio : moment_radius(g);
  const double magnitude =
      r_mode == RMode::kStandard ? std::sqrt(std::max(est.rho, 0.0)) : est.rho;
  est.r = mode == CommunityMode::kAssociative ? magnitude : -magnitude;
  return est;
}

namespace {

EigenPairs finalize_pairs(const LinearOperator& op, const Vector& values,
                          const Matrix& vectors) {
  EigenPairs out;
  out.values = values;
  out.vectors = vectors;
  out.residuals.resize(values.size());
  for (int i = 0; i < values.size(); ++i) {
    out.residuals[i] = (op(vectors.col(i)) - values[i] * vectors.col(i)).norm();
  }
  return out;
}

void check_residuals(const EigenPairs& pairs, double tol) {
  for (int i = 0; i < pairs.values.size(); ++i) {
    if (!(pairs.residuals[i] <= tol * std::max(1.0, std::abs(pairs.values[i])))) {
      std::ostringstream msg;
      msg << "smallest_eigenpairs: residual bound violated; achieved residuals:";
      for (int j = 0; j < pairs.residuals.size(); ++j) msg << ' ' << pairs.residuals[j];
      throw std::runtime_error(msg.str());
    }
  }
}

}  // namespace

EigenPairs smallest_eigenpairs_dense(const LinearOperator& op, int dim, int k) {
  Matrix dense(dim, dim);
  Vector basis = Vector::Zero(dim);
  for (int j = 0; j < dim; ++j) {
    basis[j] = 1.0;
    dense.col(j) = op(basis);
    basis[j] = 0.0;
  }
  dense = ((dense + dense.transpose()) * 0.5).eval();
  Eigen::SelfAdjointEigenSolver<Matrix> solver(dense);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("smallest_eigenpairs: dense solver failed");
  }
  return finalize_pairs(op, solver.eigenvalues().head(k),
                        solver.eigenvectors().leftCols(k));
}

EigenPairs smallest_eigenpairs_lanczos(const LinearOperator& op, int dim, int k,
                                       const EigenOptions& opts) {
  std::vector<Vector> basis;
  basis.reserve(std::min(dim, 4 * k + 64));
  std::vector<double> alpha, beta;  // beta[j] couples v_j and v_{j+1}
  std::uint64_t inject_stream = 1;

  auto orthogonalize = [&basis](Vector& w) {
    for (int sweep = 0; sweep < 2; ++sweep) {
      for (const Vector& v : basis) w -= v.dot(w) * v;
    }
  };
  auto fresh_direction = [&]() {
    Vector v = random_unit_vector(dim, derive_seed(0x1a2b3c4dULL, inject_stream++));
    orthogonalize(v);
    const double norm = v.norm();
    if (norm < 1e-12) throw std::runtime_error("lanczos: no fresh direction available");
    return (v / norm).eval();
  };

  basis.push_back(random_unit_vector(dim, opts.start_seed));
  Vector ritz_values;
  Matrix ritz_vectors;

  const int max_dim = dim;
  while (true) {
    const int j = static_cast<int>(basis.size()) - 1;
    Vector w = op(basis[j]);
    alpha.push_back(basis[j].dot(w));
    w -= alpha[j] * basis[j];
    if (j > 0) w -= beta[j - 1] * basis[j - 1];
    orthogonalize(w);
    double b = w.norm();

    const int m = j + 1;
    const bool basis_full = m >= max_dim;
    // Ritz extraction from the tridiagonal section, checked periodically.
    const bool inspect = basis_full || (m >= k + 2 && m % 5 == 0);
    if (!inspect) {
      if (b < 1e-12) {
        basis.push_back(fresh_direction());
        beta.push_back(0.0);
      } else {
        basis.push_back((w / b).eval());
        beta.push_back(b);
      }
      continue;
    }
    Matrix tri = Matrix::Zero(m, m);
    for (int i = 0; i < m; ++i) {
      tri(i, i) = alpha[i];
      if (i + 1 < m) tri(i, i + 1) = tri(i + 1, i) = beta[i];
    }
    Eigen::SelfAdjointEigenSolver<Matrix> small(tri);
    if (m >= k) {
      bool ok = true;
      for (int i = 0; i < k && !basis_full; ++i) {
        const double bound = std::abs(b * small.eigenvectors()(m - 1, i));
        if (bound > 0.1 * opts.residual_tol *
                        std::max(1.0, std::abs(small.eigenvalues()[i]))) {
          ok = false;
          break;
        }
      }
      if (ok || basis_full) {
        ritz_values = small.eigenvalues().head(k);
        Matrix v_mat(dim, m);
        for (int i = 0; i < m; ++i) v_mat.col(i) = basis[i];
        ritz_vectors = v_mat * small.eigenvectors().leftCols(k);
        for (int i = 0; i < k; ++i) ritz_vectors.col(i).normalize();
        EigenPairs pairs = finalize_pairs(op, ritz_values, ritz_vectors);
        bool resid_ok = true;
        for (int i = 0; i < k; ++i) {
          if (pairs.residuals[i] >
              opts.residual_tol * std::max(1.0, std::abs(pairs.values[i]))) {
            resid_ok = false;
            break;
          }
        }
        if (resid_ok || basis_full) {
          check_residuals(pairs, 1e-8);
          return pairs;
        }
      }
    }
    if (basis_full) break;

    if (b < 1e-12) {
      // Invariant subspace hit; continue in a fresh orthogonal direction.
      basis.push_back(fresh_direction());
      beta.push_back(0.0);
    } else {
      basis.push_back((w / b).eval());
      beta.push_back(b);
    }
  }
  throw std::runtime_error("smallest_eigenpairs: lanczos did not converge");
}

EigenPairs smallest_eigenpairs(const LinearOperator& op, int dim, int k,
                               const EigenOptions& opts) {
  if (k < 1 || k > dim) throw std::invalid_argument("smallest_eigenpairs: need 1 <= k <= dim");
  EigenPairs pairs = dim <= opts.dense_threshold
                         ? smallest_eigenpairs_dense(op, dim, k)
                         : smallest_eigenpairs_lanczos(op, dim, k, opts);
  check_residuals(pairs, 1e-8);
  return pairs;
}

SpectralEmbedding bethe_hessian_embedding(const Graph& g, int k, CommunityMode mode,
                                          RMode r_mode) {
  const RadiusEstimate radius = estimate_r(g, mode, r_mode);
  LinearOperator h = [&g, r = radius.r](const Vector& x) -> Vector {
    return bethe_hessian_apply(g, r, x);
  };
  EigenPairs pairs = smallest_eigenpairs(h, g.num_nodes(), k);
  SpectralEmbedding embedding;
  embedding.vectors = std::move(pairs.vectors);
  embedding.values = std::move(pairs.values);
  embedding.r = radius.r;
  embedding.radius_converged = radius.converged;
  return embedding;
}

BethesianClustering bethe_hessian_cluster(const Graph& g, int k, CommunityMode mode,
                                          std::uint64_t seed, RMode r_mode) {
  BethesianClustering result;
  result.embedding = bethe_hessian_embedding(g, k, mode, r_mode);
  result.labels = kmeans(result.embedding.vectors, k, seed).labels;
  return result;
}

}  // namespace commdet
