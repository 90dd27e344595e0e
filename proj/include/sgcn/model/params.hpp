#pragma once

#include <string>
#include <vector>

#include "sgcn/autodiff/gradcheck.hpp"
#include "sgcn/autodiff/ops.hpp"
#include "sgcn/autodiff/tensor.hpp"
#include "sgcn/model/config.hpp"
#include "sgcn/random.hpp"

namespace sgcn {

using ad::Tensor;

/// Key and query maps of one attention head, both [d x d].
template <typename T>
struct AttentionHeadParams {
  Tensor<T> key;
  Tensor<T> query;
};

/// One GCN channel: weight [d x d/h], bias [d/h].
template <typename T>
struct GcnHeadParams {
  Tensor<T> weight;
  Tensor<T> bias;
  ad::Activation activation = ad::Activation::kRelu;
};

template <typename T>
struct SgcnLayerParams {
  std::vector<AttentionHeadParams<T>> attention;
  std::vector<GcnHeadParams<T>> gcn;

  std::size_t heads() const { return attention.size(); }
};

/// Gate order in the packed weights is input, forget, output, candidate.
template <typename T>
struct LstmCellParams {
  Tensor<T> input_weight;   // [in x 4H]
  Tensor<T> hidden_weight;  // [H x 4H]
  Tensor<T> bias;           // [4H]
};

template <typename T>
struct ModelParams {
  Tensor<T> word_embedding;
  Tensor<T> pos_embedding;
  Tensor<T> ner_embedding;

  // Used unless no_lstm.
  LstmCellParams<T> lstm_forward;
  LstmCellParams<T> lstm_backward;
  // Used under no_lstm: input -> hidden affine map.
  Tensor<T> input_proj_weight;
  Tensor<T> input_proj_bias;

  std::vector<SgcnLayerParams<T>> sgcn;

  Tensor<T> agg_weight;  // [d(k+1) x d]
  Tensor<T> agg_bias;
  Tensor<T> cls_weight;  // [3d x relations]
  Tensor<T> cls_bias;

  /// Random initialization: embedding rows uniform(+-embedding_init) with a zero
  /// PAD row, affine maps uniform(+-1/sqrt(fan_in)).
  static ModelParams init(const ModelConfig& config, Rng& rng);

  /// Visits every allocated tensor in a fixed order with a stable dotted name.
  template <typename F>
  void visit(F&& fn);
  template <typename F>
  void visit(F&& fn) const;

  std::vector<ad::NamedTensor<T>> named();
  std::size_t parameter_count() const;
  bool all_finite() const;
  void zero_grad();
};

template <typename T>
template <typename F>
void ModelParams<T>::visit(F&& fn) {
  auto maybe = [&](const std::string& name, Tensor<T>& t) {
    if (!t.empty()) fn(name, t);
  };
  maybe("word_embedding", word_embedding);
  maybe("pos_embedding", pos_embedding);
  maybe("ner_embedding", ner_embedding);
  for (auto [prefix, cell] : {std::pair{"lstm_forward", &lstm_forward}, std::pair{"lstm_backward", &lstm_backward}}) {
    maybe(std::string(prefix) + ".input_weight", cell->input_weight);
    maybe(std::string(prefix) + ".hidden_weight", cell->hidden_weight);
    maybe(std::string(prefix) + ".bias", cell->bias);
  }
  maybe("input_proj.weight", input_proj_weight);
  maybe("input_proj.bias", input_proj_bias);
  for (std::size_t l = 0; l < sgcn.size(); ++l) {
    for (std::size_t h = 0; h < sgcn[l].heads(); ++h) {
      const std::string p = "sgcn." + std::to_string(l) + ".head." + std::to_string(h);
      maybe(p + ".key", sgcn[l].attention[h].key);
      maybe(p + ".query", sgcn[l].attention[h].query);
      maybe(p + ".weight", sgcn[l].gcn[h].weight);
      maybe(p + ".bias", sgcn[l].gcn[h].bias);
    }
  }
  maybe("aggregate.weight", agg_weight);
  maybe("aggregate.bias", agg_bias);
  maybe("classifier.weight", cls_weight);
  maybe("classifier.bias", cls_bias);
}

template <typename T>
template <typename F>
void ModelParams<T>::visit(F&& fn) const {
  const_cast<ModelParams*>(this)->visit(
      [&](const std::string& name, Tensor<T>& t) { fn(name, static_cast<const Tensor<T>&>(t)); });
}

extern template struct ModelParams<float>;
extern template struct ModelParams<double>;

}  // namespace sgcn
