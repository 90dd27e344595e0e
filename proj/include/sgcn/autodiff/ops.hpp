#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

#include "sgcn/autodiff/tape.hpp"
#include "sgcn/autodiff/tensor.hpp"

// Differentiable operations over rank <= 2 tensors. Rank-1 tensors act as a
// single row. There is no implicit broadcasting except against scalars; the
// one row-broadcast we need (bias addition) is the explicit add_row_bias.

namespace sgcn::ad {

enum class Activation { kIdentity, kRelu, kTanh, kSigmoid };

std::string_view activation_name(Activation kind);

// Boolean per-position mask; nonzero means valid.
using MaskView = std::span<const std::uint8_t>;

template <typename T>
Var<T> matmul(Var<T> a, Var<T> b);

template <typename T>
Var<T> transpose(Var<T> a);

template <typename T>
Var<T> add(Var<T> a, Var<T> b);
template <typename T>
Var<T> sub(Var<T> a, Var<T> b);
template <typename T>
Var<T> mul(Var<T> a, Var<T> b);
template <typename T>
Var<T> add(Var<T> a, T constant);
template <typename T>
Var<T> scale(Var<T> a, T factor);

// Elementwise product with a tensor that receives no gradient (masks, dropout).
template <typename T>
Var<T> multiply_constant(Var<T> a, Tensor<T> factor);

// Zeroes every row whose mask entry is 0.
template <typename T>
Var<T> mask_rows(Var<T> a, MaskView row_mask);

// x: [rows x cols], bias: [cols]
template <typename T>
Var<T> add_row_bias(Var<T> x, Var<T> bias);

// relu'(0) == 0.
template <typename T>
Var<T> activation(Activation kind, Var<T> x);
template <typename T>
Var<T> relu(Var<T> x) { return activation(Activation::kRelu, x); }
template <typename T>
Var<T> tanh(Var<T> x) { return activation(Activation::kTanh, x); }
template <typename T>
Var<T> sigmoid(Var<T> x) { return activation(Activation::kSigmoid, x); }

/// Softmax down each column over the rows whose mask entry is set. Masked rows
/// are exactly 0; a column with no unmasked row is all zero.
template <typename T>
Var<T> softmax_columns(Var<T> x, MaskView row_mask);

/// y(u, v) = x(u, v) / (sum_u' x(u', v) + eps). With eps > 0 an all-zero column stays zero.
template <typename T>
Var<T> normalize_columns(Var<T> x, T eps);

template <typename T>
Var<T> sum(Var<T> x);
template <typename T>
Var<T> mean(Var<T> x);

/// Column-wise max over valid rows -> [1 x cols]. Ties go to the lowest row index.
template <typename T>
Var<T> max_over_positions(Var<T> x, MaskView row_mask);

/// Column-wise mean over the listed rows -> [1 x cols].
template <typename T>
Var<T> mean_over_positions(Var<T> x, std::span<const std::size_t> rows);

template <typename T>
Var<T> concat_cols(std::span<const Var<T>> parts);
template <typename T>
Var<T> concat_rows(std::span<const Var<T>> parts);

// Half-open ranges [begin, end).
template <typename T>
Var<T> slice_rows(Var<T> x, std::size_t begin, std::size_t end);
template <typename T>
Var<T> slice_cols(Var<T> x, std::size_t begin, std::size_t end);

/// Row lookup into an embedding table; backward scatters into the table.
template <typename T>
Var<T> gather_rows(Var<T> table, std::span<const std::size_t> ids);

/// -log softmax(logits)[label], as a scalar.
template <typename T>
Var<T> cross_entropy(Var<T> logits, std::size_t label);

}  // namespace sgcn::ad
