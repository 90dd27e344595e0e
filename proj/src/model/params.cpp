#include "sgcn/model/params.hpp"

#include <cmath>

namespace sgcn {

namespace {

template <typename T>
Tensor<T> uniform(ad::Shape shape, double bound, Rng& rng) {
  Tensor<T> t(std::move(shape));
  for (T& v : t.values()) v = static_cast<T>(rng.uniform(-bound, bound));
  t.set_requires_grad(true);
  return t;
}

template <typename T>
Tensor<T> affine_weight(std::size_t fan_in, std::size_t fan_out, Rng& rng) {
  return uniform<T>({fan_in, fan_out}, 1.0 / std::sqrt(static_cast<double>(fan_in)), rng);
}

template <typename T>
Tensor<T> affine_bias(std::size_t fan_in, std::size_t fan_out, Rng& rng) {
  return uniform<T>({fan_out}, 1.0 / std::sqrt(static_cast<double>(fan_in)), rng);
}

template <typename T>
Tensor<T> embedding(std::size_t rows, std::size_t dim, double bound, Rng& rng) {
  Tensor<T> t = uniform<T>({rows, dim}, bound, rng);
  for (std::size_t c = 0; c < dim; ++c) t(0, c) = T{0};  // PAD
  return t;
}

template <typename T>
LstmCellParams<T> lstm_cell(std::size_t in, std::size_t units, Rng& rng) {
  LstmCellParams<T> cell;
  cell.input_weight = affine_weight<T>(in, 4 * units, rng);
  cell.hidden_weight = affine_weight<T>(units, 4 * units, rng);
  cell.bias = affine_bias<T>(units, 4 * units, rng);
  return cell;
}

}  // namespace

template <typename T>
ModelParams<T> ModelParams<T>::init(const ModelConfig& config, Rng& rng) {
  config.validate();
  ModelParams p;
  const std::size_t d = config.hidden_dim;
  p.word_embedding = embedding<T>(config.word_vocab, config.word_dim, config.embedding_init, rng);
  if (config.pos_dim > 0) p.pos_embedding = embedding<T>(config.pos_vocab, config.pos_dim, config.embedding_init, rng);
  if (config.ner_dim > 0) p.ner_embedding = embedding<T>(config.ner_vocab, config.ner_dim, config.embedding_init, rng);

  if (config.no_lstm) {
    p.input_proj_weight = affine_weight<T>(config.input_dim(), d, rng);
    p.input_proj_bias = affine_bias<T>(config.input_dim(), d, rng);
  } else {
    p.lstm_forward = lstm_cell<T>(config.input_dim(), config.lstm_units(), rng);
    p.lstm_backward = lstm_cell<T>(config.input_dim(), config.lstm_units(), rng);
  }

  if (!config.no_sgcn) {
    const std::size_t o = config.head_dim();
    p.sgcn.resize(config.sgcn_layers);
    for (auto& layer : p.sgcn) {
      for (std::size_t h = 0; h < config.heads; ++h) {
        layer.attention.push_back({affine_weight<T>(d, d, rng), affine_weight<T>(d, d, rng)});
        layer.gcn.push_back({affine_weight<T>(d, o, rng), affine_bias<T>(d, o, rng), ad::Activation::kRelu});
      }
    }
    if (!config.no_layer_agg) {
      const std::size_t width = d * (config.sgcn_layers + 1);
      p.agg_weight = affine_weight<T>(width, d, rng);
      p.agg_bias = affine_bias<T>(width, d, rng);
    }
  }
  p.cls_weight = affine_weight<T>(3 * d, config.relation_count, rng);
  p.cls_bias = affine_bias<T>(3 * d, config.relation_count, rng);
  return p;
}

template <typename T>
std::vector<ad::NamedTensor<T>> ModelParams<T>::named() {
  std::vector<ad::NamedTensor<T>> out;
  visit([&](const std::string& name, Tensor<T>& t) { out.push_back({name, &t}); });
  return out;
}

template <typename T>
std::size_t ModelParams<T>::parameter_count() const {
  std::size_t total = 0;
  visit([&](const std::string&, const Tensor<T>& t) { total += t.size(); });
  return total;
}

template <typename T>
bool ModelParams<T>::all_finite() const {
  bool ok = true;
  visit([&](const std::string&, const Tensor<T>& t) { ok = ok && t.all_finite(); });
  return ok;
}

template <typename T>
void ModelParams<T>::zero_grad() {
  visit([](const std::string&, Tensor<T>& t) { t.zero_grad(); });
}

template struct ModelParams<float>;
template struct ModelParams<double>;

}  // namespace sgcn
