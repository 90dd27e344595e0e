#pragma once

#include <cstddef>
#include <vector>

#include "sgcn/autodiff/tape.hpp"
#include "sgcn/data/batch.hpp"
#include "sgcn/model/config.hpp"
#include "sgcn/model/layers.hpp"
#include "sgcn/model/params.hpp"

namespace sgcn {

/// Per-layer, per-head adjacency matrices of one sentence, [n x n] each.
template <typename T>
struct AdjacencyStack {
  std::vector<std::vector<Tensor<T>>> matrices;  // [layer][head]

  std::size_t layers() const { return matrices.size(); }
  std::size_t heads() const { return matrices.empty() ? 0 : matrices.front().size(); }
};

struct ForwardOptions {
  bool training = false;
  // Source of dropout masks and word dropout; required when training.
  Rng* rng = nullptr;
  bool collect_adjacency = false;
};

template <typename T>
struct ForwardResult {
  std::vector<Var<T>> logits;                // one [1 x relations] per example
  std::vector<AdjacencyStack<T>> adjacency;  // filled when requested
};

/// The C-SGCN relation classifier. Ablation flags in the config remove the
/// SGCN stack, the BiLSTM (replaced by an affine projection), or the layer
/// aggregation (last SGCN layer used directly).
template <typename T>
class SgcnModel {
 public:
  SgcnModel(ModelConfig config, ModelParams<T> params);
  // Random parameters drawn from config.seed.
  static SgcnModel initialize(const ModelConfig& config);

  const ModelConfig& config() const { return config_; }
  ModelParams<T>& params() { return params_; }
  const ModelParams<T>& params() const { return params_; }

  ForwardResult<T> forward(ad::Tape<T>& tape, const data::Batch& batch, const ForwardOptions& options);

  /// Mean cross-entropy of the batch against its gold labels.
  Var<T> loss(const ForwardResult<T>& result, const data::Batch& batch) const;

  /// Evaluation-mode logits, one row per example in batch order.
  std::vector<std::vector<T>> logits(const data::Batch& batch);
  /// Evaluation-mode argmax labels, reordered to the batches' source positions.
  std::vector<std::size_t> predict(const std::vector<data::Batch>& batches);

 private:
  Var<T> forward_example(ad::Tape<T>& tape, const data::Batch& batch, std::size_t i,
                         const ForwardOptions& options, AdjacencyStack<T>* adjacency);

  ModelConfig config_;
  ModelParams<T> params_;
};

extern template class SgcnModel<float>;
extern template class SgcnModel<double>;

}  // namespace sgcn
