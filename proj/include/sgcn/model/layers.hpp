#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "sgcn/autodiff/ops.hpp"
#include "sgcn/data/example.hpp"
#include "sgcn/model/config.hpp"
#include "sgcn/model/params.hpp"
#include "sgcn/random.hpp"

// Building blocks of the C-SGCN relation classifier. Node features are rows:
// a sentence of n positions is an [n x d] matrix. Every layer takes the
// position mask; rows at masked (padded) positions come out as zero.

namespace sgcn {

using ad::MaskView;
using ad::Var;

/// Inverted dropout. A null rng or zero rate makes it the identity.
struct Dropout {
  double rate = 0.0;
  Rng* rng = nullptr;

  bool active() const { return rng != nullptr && rate > 0.0; }
};

template <typename T>
Var<T> apply_dropout(Var<T> x, const Dropout& dropout);

/// Word, PoS and NER embeddings concatenated per position -> [n x input_dim].
/// Tables with zero width are skipped. Out-of-range ids throw std::out_of_range.
template <typename T>
Var<T> embed_tokens(ad::Tape<T>& tape, ModelParams<T>& params, std::span<const std::size_t> token_ids,
                    std::span<const std::size_t> pos_ids, std::span<const std::size_t> ner_ids);

/// Forward and backward LSTM over the first `length` rows of x; their hidden
/// states are concatenated per position -> [n x 2H]. Rows >= length are zero.
template <typename T>
Var<T> bilstm_encode(Var<T> x, std::size_t length, LstmCellParams<T>& forward_cell,
                     LstmCellParams<T>& backward_cell);

/// Weighted adjacency of one attention head.
///
/// relu-mean: M(u,v) = relu((K z_u) . (Q z_v) / sqrt(d)),
///            A(u,v) = M(u,v) / (sum_u' M(u',v) + eps).
/// softmax:   each column is the softmax of the same logits over valid sources.
///
/// Entries whose source or target is masked are zero, so are columns that
/// relu empties completely.
template <typename T>
Var<T> self_determined_adjacency(Var<T> z, AttentionHeadParams<T>& head, MaskView mask,
                                 AdjacencyMode mode);

/// z'_v = act(sum_u A(u,v) (W^T z_u + b)), i.e. act(A^T (Z W + 1 b^T)).
template <typename T>
Var<T> gcn_propagate(Var<T> z, Var<T> adjacency, GcnHeadParams<T>& head);

template <typename T>
struct SgcnLayerOutput {
  Var<T> output;                   // [n x d]
  std::vector<Var<T>> adjacency;   // one [n x n] per head
};

/// One self-determined GCN layer: every head infers its own graph and runs a
/// GCN over it; head outputs are concatenated back to width d.
template <typename T>
SgcnLayerOutput<T> sgcn_layer(Var<T> z, SgcnLayerParams<T>& params, MaskView mask, AdjacencyMode mode,
                              const Dropout& dropout = {});

/// relu(concat(encoder, layer_1 .. layer_k) W + b), masked.
template <typename T>
Var<T> aggregate_layers(Var<T> encoder_out, std::span<const Var<T>> layer_outs, Tensor<T>& weight,
                        Tensor<T>& bias, MaskView mask);

/// Max-pools the sentence over valid positions, mean-pools both entity spans,
/// and maps the concatenation to relation logits [1 x relations].
template <typename T>
Var<T> classify(Var<T> final_states, data::Span subj, data::Span obj, MaskView mask, Tensor<T>& weight,
                Tensor<T>& bias);

}  // namespace sgcn
