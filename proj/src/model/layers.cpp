#include "sgcn/model/layers.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace sgcn {

namespace ops = sgcn::ad;

template <typename T>
Var<T> apply_dropout(Var<T> x, const Dropout& dropout) {
  if (!dropout.active()) return x;
  Tensor<T> keep(x.shape());
  const T kept = static_cast<T>(1.0 / (1.0 - dropout.rate));
  for (T& v : keep.values()) v = dropout.rng->bernoulli(dropout.rate) ? T{0} : kept;
  return ops::multiply_constant(x, std::move(keep));
}

template <typename T>
Var<T> embed_tokens(ad::Tape<T>& tape, ModelParams<T>& params, std::span<const std::size_t> token_ids,
                    std::span<const std::size_t> pos_ids, std::span<const std::size_t> ner_ids) {
  std::vector<Var<T>> parts;
  parts.push_back(ops::gather_rows(tape.param(params.word_embedding), token_ids));
  if (!params.pos_embedding.empty()) {
    if (pos_ids.size() != token_ids.size()) throw ad::ShapeError("embed_tokens: PoS ids length mismatch");
    parts.push_back(ops::gather_rows(tape.param(params.pos_embedding), pos_ids));
  }
  if (!params.ner_embedding.empty()) {
    if (ner_ids.size() != token_ids.size()) throw ad::ShapeError("embed_tokens: NER ids length mismatch");
    parts.push_back(ops::gather_rows(tape.param(params.ner_embedding), ner_ids));
  }
  if (parts.size() == 1) return parts.front();
  return ops::concat_cols<T>(parts);
}

namespace {

// Hidden states of one direction, one row per position in [0, length).
template <typename T>
std::vector<Var<T>> run_lstm(Var<T> inputs, std::size_t length, LstmCellParams<T>& cell, bool reverse) {
  ad::Tape<T>& tape = inputs.tape();
  const std::size_t units = cell.hidden_weight.rows();
  Var<T> w_hidden = tape.param(cell.hidden_weight);
  Var<T> pre = ops::add_row_bias(ops::matmul(inputs, tape.param(cell.input_weight)), tape.param(cell.bias));

  std::vector<Var<T>> states(length);
  Var<T> h, c;
  for (std::size_t step = 0; step < length; ++step) {
    const std::size_t t = reverse ? length - 1 - step : step;
    Var<T> gates = ops::slice_rows(pre, t, t + 1);
    if (step > 0) gates = ops::add(gates, ops::matmul(h, w_hidden));
    Var<T> sig = ops::sigmoid(ops::slice_cols(gates, 0, 3 * units));
    Var<T> in_gate = ops::slice_cols(sig, 0, units);
    Var<T> forget_gate = ops::slice_cols(sig, units, 2 * units);
    Var<T> out_gate = ops::slice_cols(sig, 2 * units, 3 * units);
    Var<T> candidate = ops::tanh(ops::slice_cols(gates, 3 * units, 4 * units));
    Var<T> update = ops::mul(in_gate, candidate);
    c = step > 0 ? ops::add(ops::mul(forget_gate, c), update) : update;
    h = ops::mul(out_gate, ops::tanh(c));
    states[t] = h;
  }
  return states;
}

template <typename T>
Tensor<T> pair_mask(MaskView mask) {
  const std::size_t n = mask.size();
  Tensor<T> m({n, n});
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = 0; v < n; ++v) m(u, v) = (mask[u] && mask[v]) ? T{1} : T{0};
  return m;
}

void check_mask(MaskView mask, std::size_t rows, const char* op) {
  if (mask.size() != rows) {
    throw ad::ShapeError(std::string(op) + ": mask of length " + std::to_string(mask.size()) + " for " +
                         std::to_string(rows) + " rows");
  }
}

}  // namespace

template <typename T>
Var<T> bilstm_encode(Var<T> x, std::size_t length, LstmCellParams<T>& forward_cell,
                     LstmCellParams<T>& backward_cell) {
  if (length == 0) throw std::invalid_argument("bilstm_encode: zero-length sequence");
  const std::size_t n = x.rows();
  if (length > n) throw std::out_of_range("bilstm_encode: length exceeds rows");
  Var<T> inputs = length == n ? x : ops::slice_rows(x, 0, length);

  std::vector<Var<T>> columns;
  for (auto [cell, reverse] : {std::pair{&forward_cell, false}, std::pair{&backward_cell, true}}) {
    std::vector<Var<T>> rows = run_lstm(inputs, length, *cell, reverse);
    if (length < n) rows.push_back(x.tape().constant(Tensor<T>({n - length, cell->hidden_weight.rows()})));
    columns.push_back(rows.size() == 1 ? rows.front() : ops::concat_rows<T>(rows));
  }
  return ops::concat_cols<T>(columns);
}

template <typename T>
Var<T> self_determined_adjacency(Var<T> z, AttentionHeadParams<T>& head, MaskView mask,
                                 AdjacencyMode mode) {
  ad::Tape<T>& tape = z.tape();
  const std::size_t d = z.cols();
  check_mask(mask, z.rows(), "self_determined_adjacency");
  if (head.key.rows() != d || head.key.cols() != d || head.query.rows() != d || head.query.cols() != d) {
    throw ad::ShapeError("self_determined_adjacency: head maps " + ad::shape_string(head.key.shape()) +
                         " do not match features " + ad::shape_string(z.shape()));
  }
  // Row u of `keys` is (K z_u)^T, row v of `queries` is (Q z_v)^T.
  Var<T> keys = ops::matmul(z, ops::transpose(tape.param(head.key)));
  Var<T> queries = ops::matmul(z, ops::transpose(tape.param(head.query)));
  Var<T> logits = ops::scale(ops::matmul(keys, ops::transpose(queries)),
                             static_cast<T>(1.0 / std::sqrt(static_cast<double>(d))));
  if (mode == AdjacencyMode::kReluMean) {
    Var<T> weights = ops::multiply_constant(ops::relu(logits), pair_mask<T>(mask));
    return ops::normalize_columns(weights, static_cast<T>(kAdjacencyEpsilon));
  }
  return ops::multiply_constant(ops::softmax_columns(logits, mask), pair_mask<T>(mask));
}

template <typename T>
Var<T> gcn_propagate(Var<T> z, Var<T> adjacency, GcnHeadParams<T>& head) {
  ad::Tape<T>& tape = z.tape();
  const std::size_t n = z.rows();
  if (adjacency.rows() != n || adjacency.cols() != n) {
    throw ad::ShapeError("gcn_propagate: adjacency " + ad::shape_string(adjacency.shape()) +
                         " does not match features " + ad::shape_string(z.shape()));
  }
  Var<T> messages = ops::add_row_bias(ops::matmul(z, tape.param(head.weight)), tape.param(head.bias));
  return ops::activation(head.activation, ops::matmul(ops::transpose(adjacency), messages));
}

template <typename T>
SgcnLayerOutput<T> sgcn_layer(Var<T> z, SgcnLayerParams<T>& params, MaskView mask, AdjacencyMode mode,
                              const Dropout& dropout) {
  if (params.attention.size() != params.gcn.size() || params.attention.empty()) {
    throw std::invalid_argument("sgcn_layer: attention and GCN head counts differ");
  }
  SgcnLayerOutput<T> out;
  std::vector<Var<T>> heads;
  for (std::size_t h = 0; h < params.heads(); ++h) {
    Var<T> adjacency = self_determined_adjacency(z, params.attention[h], mask, mode);
    heads.push_back(gcn_propagate(z, adjacency, params.gcn[h]));
    out.adjacency.push_back(adjacency);
  }
  Var<T> joined = heads.size() == 1 ? heads.front() : ops::concat_cols<T>(heads);
  out.output = apply_dropout(ops::mask_rows(joined, mask), dropout);
  return out;
}

template <typename T>
Var<T> aggregate_layers(Var<T> encoder_out, std::span<const Var<T>> layer_outs, Tensor<T>& weight,
                        Tensor<T>& bias, MaskView mask) {
  std::vector<Var<T>> parts{encoder_out};
  for (const Var<T>& l : layer_outs) {
    if (l.rows() != encoder_out.rows()) {
      throw ad::ShapeError("aggregate_layers: row mismatch " + ad::shape_string(encoder_out.shape()) +
                           " vs " + ad::shape_string(l.shape()));
    }
    parts.push_back(l);
  }
  ad::Tape<T>& tape = encoder_out.tape();
  Var<T> joined = ops::concat_cols<T>(parts);
  Var<T> mixed = ops::relu(ops::add_row_bias(ops::matmul(joined, tape.param(weight)), tape.param(bias)));
  return ops::mask_rows(mixed, mask);
}

template <typename T>
Var<T> classify(Var<T> final_states, data::Span subj, data::Span obj, MaskView mask, Tensor<T>& weight,
                Tensor<T>& bias) {
  check_mask(mask, final_states.rows(), "classify");
  auto positions = [&](data::Span s, const char* which) {
    if (s.start > s.end) throw std::invalid_argument(std::string("classify: empty ") + which + " span");
    std::vector<std::size_t> rows;
    for (std::size_t i = s.start; i <= s.end; ++i) {
      if (i >= mask.size() || !mask[i]) {
        throw std::out_of_range(std::string("classify: ") + which + " span reaches position " +
                                std::to_string(i) + " outside the sentence");
      }
      rows.push_back(i);
    }
    return rows;
  };
  const std::vector<std::size_t> subj_rows = positions(subj, "subject");
  const std::vector<std::size_t> obj_rows = positions(obj, "object");

  ad::Tape<T>& tape = final_states.tape();
  std::vector<Var<T>> pooled{ops::max_over_positions(final_states, mask),
                             ops::mean_over_positions<T>(final_states, subj_rows),
                             ops::mean_over_positions<T>(final_states, obj_rows)};
  Var<T> features = ops::concat_cols<T>(pooled);
  return ops::add_row_bias(ops::matmul(features, tape.param(weight)), tape.param(bias));
}

#define SGCN_INSTANTIATE_LAYERS(T)                                                                     \
  template Var<T> apply_dropout(Var<T>, const Dropout&);                                               \
  template Var<T> embed_tokens(ad::Tape<T>&, ModelParams<T>&, std::span<const std::size_t>,            \
                               std::span<const std::size_t>, std::span<const std::size_t>);            \
  template Var<T> bilstm_encode(Var<T>, std::size_t, LstmCellParams<T>&, LstmCellParams<T>&);          \
  template Var<T> self_determined_adjacency(Var<T>, AttentionHeadParams<T>&, MaskView, AdjacencyMode); \
  template Var<T> gcn_propagate(Var<T>, Var<T>, GcnHeadParams<T>&);                                    \
  template SgcnLayerOutput<T> sgcn_layer(Var<T>, SgcnLayerParams<T>&, MaskView, AdjacencyMode,         \
                                         const Dropout&);                                              \
  template Var<T> aggregate_layers(Var<T>, std::span<const Var<T>>, Tensor<T>&, Tensor<T>&, MaskView); \
  template Var<T> classify(Var<T>, data::Span, data::Span, MaskView, Tensor<T>&, Tensor<T>&);

SGCN_INSTANTIATE_LAYERS(float)
SGCN_INSTANTIATE_LAYERS(double)

#undef SGCN_INSTANTIATE_LAYERS

}  // namespace sgcn
