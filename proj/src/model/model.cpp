#include "sgcn/model/model.hpp"

#include <algorithm>
#include <stdexcept>

#include "sgcn/data/vocab.hpp"

namespace sgcn {

namespace ops = sgcn::ad;

template <typename T>
SgcnModel<T>::SgcnModel(ModelConfig config, ModelParams<T> params)
    : config_(std::move(config)), params_(std::move(params)) {
  config_.validate();
}

template <typename T>
SgcnModel<T> SgcnModel<T>::initialize(const ModelConfig& config) {
  Rng rng(config.seed);
  return SgcnModel(config, ModelParams<T>::init(config, rng));
}

template <typename T>
Var<T> SgcnModel<T>::forward_example(ad::Tape<T>& tape, const data::Batch& batch, std::size_t i,
                                     const ForwardOptions& options, AdjacencyStack<T>* adjacency) {
  const std::size_t length = batch.lengths[i];
  const MaskView mask = batch.mask_row(i);
  const bool training = options.training;
  if (training && options.rng == nullptr) throw std::invalid_argument("forward: training requires an rng");

  std::vector<std::size_t> tokens(batch.tokens(i).begin(), batch.tokens(i).end());
  if (training && config_.word_dropout > 0.0) {
    for (std::size_t t = 0; t < length; ++t) {
      if (options.rng->bernoulli(config_.word_dropout)) tokens[t] = data::kUnkId;
    }
  }
  const Dropout dropout{training ? config_.dropout : 0.0, training ? options.rng : nullptr};

  Var<T> embedded = embed_tokens(tape, params_, tokens, batch.pos(i), batch.ner(i));
  Var<T> encoded;
  if (config_.no_lstm) {
    Var<T> projected = ops::add_row_bias(ops::matmul(embedded, tape.param(params_.input_proj_weight)),
                                         tape.param(params_.input_proj_bias));
    encoded = ops::mask_rows(projected, mask);
  } else {
    encoded = bilstm_encode(embedded, length, params_.lstm_forward, params_.lstm_backward);
  }
  encoded = apply_dropout(encoded, dropout);

  Var<T> final_states = encoded;
  if (!config_.no_sgcn) {
    std::vector<Var<T>> layer_outs;
    Var<T> z = encoded;
    for (auto& layer : params_.sgcn) {
      SgcnLayerOutput<T> out = sgcn_layer(z, layer, mask, config_.adjacency_mode, dropout);
      if (adjacency) {
        std::vector<Tensor<T>> heads;
        for (const Var<T>& a : out.adjacency) heads.push_back(a.value());
        for (auto& h : heads) h.clear_grad();
        adjacency->matrices.push_back(std::move(heads));
      }
      z = out.output;
      layer_outs.push_back(z);
    }
    final_states = config_.no_layer_agg
                       ? layer_outs.back()
                       : aggregate_layers<T>(encoded, layer_outs, params_.agg_weight, params_.agg_bias, mask);
  }
  return classify(final_states, batch.subj[i], batch.obj[i], mask, params_.cls_weight, params_.cls_bias);
}

template <typename T>
ForwardResult<T> SgcnModel<T>::forward(ad::Tape<T>& tape, const data::Batch& batch,
                                       const ForwardOptions& options) {
  ForwardResult<T> result;
  for (std::size_t i = 0; i < batch.size; ++i) {
    AdjacencyStack<T>* stack = nullptr;
    if (options.collect_adjacency) stack = &result.adjacency.emplace_back();
    result.logits.push_back(forward_example(tape, batch, i, options, stack));
  }
  return result;
}

template <typename T>
Var<T> SgcnModel<T>::loss(const ForwardResult<T>& result, const data::Batch& batch) const {
  if (result.logits.empty()) throw std::invalid_argument("loss: empty batch");
  std::vector<Var<T>> terms;
  for (std::size_t i = 0; i < result.logits.size(); ++i) {
    terms.push_back(ops::cross_entropy(result.logits[i], batch.labels[i]));
  }
  Var<T> total = terms.size() == 1 ? terms.front() : ops::sum(ops::concat_cols<T>(terms));
  return ops::scale(total, static_cast<T>(1.0 / static_cast<double>(terms.size())));
}

template <typename T>
std::vector<std::vector<T>> SgcnModel<T>::logits(const data::Batch& batch) {
  ad::Tape<T> tape;
  tape.set_grad_enabled(false);
  ForwardResult<T> result = forward(tape, batch, ForwardOptions{});
  std::vector<std::vector<T>> out;
  for (const Var<T>& l : result.logits) out.emplace_back(l.value().values().begin(), l.value().values().end());
  return out;
}

template <typename T>
std::vector<std::size_t> SgcnModel<T>::predict(const std::vector<data::Batch>& batches) {
  std::size_t total = 0;
  for (const auto& b : batches) total += b.size;
  std::vector<std::size_t> out(total, 0);
  for (const auto& b : batches) {
    std::vector<std::vector<T>> rows = logits(b);
    for (std::size_t i = 0; i < b.size; ++i) {
      const auto best = std::max_element(rows[i].begin(), rows[i].end());
      const std::size_t at = b.source_index.empty() ? i : b.source_index[i];
      if (at >= total) throw std::out_of_range("predict: batch source index outside the batch list");
      out[at] = static_cast<std::size_t>(best - rows[i].begin());
    }
  }
  return out;
}

template class SgcnModel<float>;
template class SgcnModel<double>;

}  // namespace sgcn
