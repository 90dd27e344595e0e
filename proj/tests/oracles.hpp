#pragma once

// Straight-loop reference evaluations used to cross-check the tape-based
// layers. Nothing here touches the autodiff engine.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <vector>

#include "sgcn/autodiff/tensor.hpp"
#include "sgcn/model/config.hpp"
#include "sgcn/model/params.hpp"

namespace sgcn::oracle {

using Matrix = std::vector<std::vector<double>>;

template <typename T>
Matrix to_matrix(const ad::Tensor<T>& t) {
  Matrix m(t.rows(), std::vector<double>(t.cols()));
  for (std::size_t r = 0; r < t.rows(); ++r) {
    for (std::size_t c = 0; c < t.cols(); ++c) m[r][c] = static_cast<double>(t(r, c));
  }
  return m;
}

// K z for a [d x d] map K and a d-vector z.
inline std::vector<double> apply(const Matrix& k, const std::vector<double>& z) {
  std::vector<double> out(k.size(), 0.0);
  for (std::size_t i = 0; i < k.size(); ++i) {
    for (std::size_t j = 0; j < z.size(); ++j) out[i] += k[i][j] * z[j];
  }
  return out;
}

/// Attention weight of every edge u -> v: column v holds the incoming weights of v.
inline Matrix adjacency(const Matrix& z, const Matrix& key, const Matrix& query,
                        const std::vector<std::uint8_t>& mask, AdjacencyMode mode) {
  const std::size_t n = z.size();
  const double d = static_cast<double>(z.empty() ? 1 : z[0].size());
  Matrix logit(n, std::vector<double>(n, 0.0));
  for (std::size_t u = 0; u < n; ++u) {
    const std::vector<double> ku = apply(key, z[u]);
    for (std::size_t v = 0; v < n; ++v) {
      const std::vector<double> qv = apply(query, z[v]);
      double dot = 0.0;
      for (std::size_t i = 0; i < ku.size(); ++i) dot += ku[i] * qv[i];
      logit[u][v] = dot / std::sqrt(d);
    }
  }
  Matrix a(n, std::vector<double>(n, 0.0));
  for (std::size_t v = 0; v < n; ++v) {
    if (!mask[v]) continue;
    if (mode == AdjacencyMode::kReluMean) {
      double total = 0.0;
      for (std::size_t u = 0; u < n; ++u) {
        if (mask[u]) total += std::max(0.0, logit[u][v]);
      }
      for (std::size_t u = 0; u < n; ++u) {
        if (mask[u]) a[u][v] = std::max(0.0, logit[u][v]) / (total + kAdjacencyEpsilon);
      }
    } else {
      double top = -INFINITY;
      for (std::size_t u = 0; u < n; ++u) {
        if (mask[u]) top = std::max(top, logit[u][v]);
      }
      double total = 0.0;
      for (std::size_t u = 0; u < n; ++u) {
        if (mask[u]) total += std::exp(logit[u][v] - top);
      }
      for (std::size_t u = 0; u < n; ++u) {
        if (mask[u]) a[u][v] = std::exp(logit[u][v] - top) / total;
      }
    }
  }
  return a;
}

/// z'_v = relu(sum_u A(u,v) (W^T z_u + b)) with W stored [d x o].
inline Matrix gcn(const Matrix& z, const Matrix& a, const Matrix& w, const std::vector<double>& b, bool relu = true) {
  const std::size_t n = z.size();
  const std::size_t o = b.size();
  Matrix out(n, std::vector<double>(o, 0.0));
  for (std::size_t v = 0; v < n; ++v) {
    for (std::size_t j = 0; j < o; ++j) {
      double acc = 0.0;
      for (std::size_t u = 0; u < n; ++u) {
        double msg = b[j];
        for (std::size_t c = 0; c < z[u].size(); ++c) msg += z[u][c] * w[c][j];
        acc += a[u][v] * msg;
      }
      out[v][j] = relu ? std::max(0.0, acc) : acc;
    }
  }
  return out;
}

struct LayerResult {
  Matrix output;
  std::vector<Matrix> adjacency;
};

/// One SGCN layer: per-head graph + GCN, heads concatenated, masked rows zeroed.
template <typename T>
LayerResult sgcn_layer(const Matrix& z, const SgcnLayerParams<T>& layer, const std::vector<std::uint8_t>& mask,
                       AdjacencyMode mode) {
  const std::size_t n = z.size();
  LayerResult r;
  r.output.assign(n, {});
  for (std::size_t h = 0; h < layer.heads(); ++h) {
    Matrix a = adjacency(z, to_matrix(layer.attention[h].key), to_matrix(layer.attention[h].query), mask, mode);
    std::vector<double> bias(layer.gcn[h].bias.values().begin(), layer.gcn[h].bias.values().end());
    Matrix head = gcn(z, a, to_matrix(layer.gcn[h].weight), bias);
    for (std::size_t v = 0; v < n; ++v) {
      for (double x : head[v]) r.output[v].push_back(mask[v] ? x : 0.0);
    }
    r.adjacency.push_back(std::move(a));
  }
  return r;
}

inline double max_abs_diff(const Matrix& a, const Matrix& b) {
  double worst = 0.0;
  for (std::size_t r = 0; r < a.size(); ++r) {
    for (std::size_t c = 0; c < a[r].size(); ++c) worst = std::max(worst, std::abs(a[r][c] - b[r][c]));
  }
  return worst;
}

/// Micro P/R/F1 recounted from scratch over the label pairs.
struct Counts {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t correct = 0;
  std::size_t predicted = 0;
  std::size_t gold = 0;
};

inline Counts micro_prf(const std::vector<std::size_t>& gold, const std::vector<std::size_t>& pred,
                        std::size_t negative) {
  Counts c;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (pred[i] != negative) ++c.predicted;
    if (gold[i] != negative) ++c.gold;
    if (pred[i] != negative && pred[i] == gold[i]) ++c.correct;
  }
  c.precision = c.predicted ? static_cast<double>(c.correct) / static_cast<double>(c.predicted) : 0.0;
  c.recall = c.gold ? static_cast<double>(c.correct) / static_cast<double>(c.gold) : 0.0;
  c.f1 = c.precision + c.recall > 0 ? 2 * c.precision * c.recall / (c.precision + c.recall) : 0.0;
  return c;
}

}  // namespace sgcn::oracle
