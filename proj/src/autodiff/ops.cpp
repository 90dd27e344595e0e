#include "sgcn/autodiff/ops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace sgcn::ad {

namespace {

template <typename T>
using RowMajor = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename T>
using MatMap = Eigen::Map<RowMajor<T>>;
template <typename T>
using ConstMatMap = Eigen::Map<const RowMajor<T>>;

void require_matrix(const Shape& s, const char* op) {
  if (s.size() > 2) {
    throw ShapeError(std::string(op) + ": expected rank <= 2, got " + shape_string(s));
  }
}

void require_same(const Shape& a, const Shape& b, const char* op) {
  if (a != b) {
    throw ShapeError(std::string(op) + ": shape mismatch " + shape_string(a) + " vs " +
                     shape_string(b));
  }
}

template <typename T>
void require_same_tape(Var<T> a, Var<T> b, const char* op) {
  if (&a.tape() != &b.tape()) throw std::invalid_argument(std::string(op) + ": operands on different tapes");
}

template <typename T>
void accumulate(std::span<T> dst, std::span<const T> src) {
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
}

}  // namespace

std::string_view activation_name(Activation kind) {
  switch (kind) {
    case Activation::kIdentity: return "identity";
    case Activation::kRelu: return "relu";
    case Activation::kTanh: return "tanh";
    case Activation::kSigmoid: return "sigmoid";
  }
  return "unknown";
}

template <typename T>
Var<T> matmul(Var<T> a, Var<T> b) {
  require_same_tape(a, b, "matmul");
  const Tensor<T>& av = a.value();
  const Tensor<T>& bv = b.value();
  require_matrix(av.shape(), "matmul");
  require_matrix(bv.shape(), "matmul");
  const std::size_t m = av.rows(), k = av.cols(), n = bv.cols();
  if (bv.rows() != k) {
    throw ShapeError("matmul: inner dimensions disagree for " + shape_string(av.shape()) + " x " +
                     shape_string(bv.shape()));
  }
  Tensor<T> out({m, n});
  MatMap<T>(out.data(), m, n).noalias() =
      ConstMatMap<T>(av.data(), m, k) * ConstMatMap<T>(bv.data(), k, n);
  std::size_t ia = a.id(), ib = b.id();
  return a.tape().record("matmul", {ia, ib}, std::move(out),
                         [ia, ib, m, k, n](Tape<T>& t, std::span<const T> g) {
                           ConstMatMap<T> dc(g.data(), m, n);
                           if (auto ga = t.grad_for(ia); !ga.empty()) {
                             MatMap<T>(ga.data(), m, k).noalias() +=
                                 dc * ConstMatMap<T>(t.value(ib).data(), k, n).transpose();
                           }
                           if (auto gb = t.grad_for(ib); !gb.empty()) {
                             MatMap<T>(gb.data(), k, n).noalias() +=
                                 ConstMatMap<T>(t.value(ia).data(), m, k).transpose() * dc;
                           }
                         });
}

template <typename T>
Var<T> transpose(Var<T> a) {
  const Tensor<T>& av = a.value();
  require_matrix(av.shape(), "transpose");
  const std::size_t m = av.rows(), n = av.cols();
  Tensor<T> out({n, m});
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) out[j * m + i] = av[i * n + j];
  std::size_t ia = a.id();
  return a.tape().record("transpose", {ia}, std::move(out),
                         [ia, m, n](Tape<T>& t, std::span<const T> g) {
                           auto ga = t.grad_for(ia);
                           for (std::size_t i = 0; i < m; ++i)
                             for (std::size_t j = 0; j < n; ++j) ga[i * n + j] += g[j * m + i];
                         });
}

namespace {

enum class Binary { kAdd, kSub, kMul };

template <typename T>
Var<T> binary(Binary op, Var<T> a, Var<T> b, const char* name) {
  require_same_tape(a, b, name);
  const Tensor<T>& av = a.value();
  const Tensor<T>& bv = b.value();
  require_same(av.shape(), bv.shape(), name);
  Tensor<T> out(av.shape());
  for (std::size_t i = 0; i < out.size(); ++i) {
    switch (op) {
      case Binary::kAdd: out[i] = av[i] + bv[i]; break;
      case Binary::kSub: out[i] = av[i] - bv[i]; break;
      case Binary::kMul: out[i] = av[i] * bv[i]; break;
    }
  }
  std::size_t ia = a.id(), ib = b.id();
  return a.tape().record(name, {ia, ib}, std::move(out),
                         [op, ia, ib](Tape<T>& t, std::span<const T> g) {
                           auto ga = t.grad_for(ia);
                           auto gb = t.grad_for(ib);
                           if (op == Binary::kMul) {
                             const Tensor<T>& av = t.value(ia);
                             const Tensor<T>& bv = t.value(ib);
                             for (std::size_t i = 0; i < ga.size(); ++i) ga[i] += g[i] * bv[i];
                             for (std::size_t i = 0; i < gb.size(); ++i) gb[i] += g[i] * av[i];
                             return;
                           }
                           accumulate(ga, g);
                           if (op == Binary::kAdd) {
                             accumulate(gb, g);
                           } else {
                             for (std::size_t i = 0; i < gb.size(); ++i) gb[i] -= g[i];
                           }
                         });
}

}  // namespace

template <typename T>
Var<T> add(Var<T> a, Var<T> b) {
  return binary(Binary::kAdd, a, b, "add");
}

template <typename T>
Var<T> sub(Var<T> a, Var<T> b) {
  return binary(Binary::kSub, a, b, "sub");
}

template <typename T>
Var<T> mul(Var<T> a, Var<T> b) {
  return binary(Binary::kMul, a, b, "mul");
}

template <typename T>
Var<T> add(Var<T> a, T constant) {
  Tensor<T> out = a.value();
  out.clear_grad();
  for (T& v : out.values()) v += constant;
  std::size_t ia = a.id();
  return a.tape().record("add_scalar", {ia}, std::move(out),
                         [ia](Tape<T>& t, std::span<const T> g) { accumulate(t.grad_for(ia), g); });
}

template <typename T>
Var<T> scale(Var<T> a, T factor) {
  const Tensor<T>& av = a.value();
  Tensor<T> out(av.shape());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = av[i] * factor;
  std::size_t ia = a.id();
  return a.tape().record("scale", {ia}, std::move(out),
                         [ia, factor](Tape<T>& t, std::span<const T> g) {
                           auto ga = t.grad_for(ia);
                           for (std::size_t i = 0; i < ga.size(); ++i) ga[i] += g[i] * factor;
                         });
}

template <typename T>
Var<T> multiply_constant(Var<T> a, Tensor<T> factor) {
  const Tensor<T>& av = a.value();
  require_same(av.shape(), factor.shape(), "multiply_constant");
  Tensor<T> out(av.shape());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = av[i] * factor[i];
  std::size_t ia = a.id();
  return a.tape().record("multiply_constant", {ia}, std::move(out),
                         [ia, f = std::move(factor)](Tape<T>& t, std::span<const T> g) {
                           auto ga = t.grad_for(ia);
                           for (std::size_t i = 0; i < ga.size(); ++i) ga[i] += g[i] * f[i];
                         });
}

template <typename T>
Var<T> mask_rows(Var<T> a, MaskView row_mask) {
  const Tensor<T>& av = a.value();
  require_matrix(av.shape(), "mask_rows");
  if (row_mask.size() != av.rows()) {
    throw ShapeError("mask_rows: mask of length " + std::to_string(row_mask.size()) +
                     " for shape " + shape_string(av.shape()));
  }
  Tensor<T> factor(av.shape());
  const std::size_t n = av.cols();
  for (std::size_t r = 0; r < av.rows(); ++r)
    std::fill_n(factor.data() + r * n, n, row_mask[r] ? T{1} : T{0});
  return multiply_constant(a, std::move(factor));
}

template <typename T>
Var<T> add_row_bias(Var<T> x, Var<T> bias) {
  require_same_tape(x, bias, "add_row_bias");
  const Tensor<T>& xv = x.value();
  const Tensor<T>& bv = bias.value();
  require_matrix(xv.shape(), "add_row_bias");
  const std::size_t m = xv.rows(), n = xv.cols();
  if (bv.size() != n) {
    throw ShapeError("add_row_bias: bias " + shape_string(bv.shape()) + " does not match " +
                     shape_string(xv.shape()));
  }
  Tensor<T> out(xv.shape());
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t c = 0; c < n; ++c) out[r * n + c] = xv[r * n + c] + bv[c];
  std::size_t ix = x.id(), ib = bias.id();
  return x.tape().record("add_row_bias", {ix, ib}, std::move(out),
                         [ix, ib, m, n](Tape<T>& t, std::span<const T> g) {
                           accumulate(t.grad_for(ix), g);
                           if (auto gb = t.grad_for(ib); !gb.empty()) {
                             for (std::size_t r = 0; r < m; ++r)
                               for (std::size_t c = 0; c < n; ++c) gb[c] += g[r * n + c];
                           }
                         });
}

template <typename T>
Var<T> activation(Activation kind, Var<T> x) {
  const Tensor<T>& xv = x.value();
  Tensor<T> out(xv.shape());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const T v = xv[i];
    switch (kind) {
      case Activation::kIdentity: out[i] = v; break;
      case Activation::kRelu: out[i] = v > T{0} ? v : T{0}; break;
      case Activation::kTanh: out[i] = std::tanh(v); break;
      case Activation::kSigmoid: out[i] = T{1} / (T{1} + std::exp(-v)); break;
    }
  }
  std::size_t ix = x.id();
  std::size_t iy = x.tape().node_count();
  return x.tape().record(activation_name(kind), {ix}, std::move(out),
                         [kind, ix, iy](Tape<T>& t, std::span<const T> g) {
                           auto gx = t.grad_for(ix);
                           const Tensor<T>& xv = t.value(ix);
                           const Tensor<T>& yv = t.value(iy);
                           for (std::size_t i = 0; i < gx.size(); ++i) {
                             switch (kind) {
                               case Activation::kIdentity: gx[i] += g[i]; break;
                               case Activation::kRelu:
                                 if (xv[i] > T{0}) gx[i] += g[i];
                                 break;
                               case Activation::kTanh: gx[i] += g[i] * (T{1} - yv[i] * yv[i]); break;
                               case Activation::kSigmoid: gx[i] += g[i] * yv[i] * (T{1} - yv[i]); break;
                             }
                           }
                         });
}

template <typename T>
Var<T> softmax_columns(Var<T> x, MaskView row_mask) {
  const Tensor<T>& xv = x.value();
  require_matrix(xv.shape(), "softmax_columns");
  const std::size_t m = xv.rows(), n = xv.cols();
  if (row_mask.size() != m) {
    throw ShapeError("softmax_columns: mask of length " + std::to_string(row_mask.size()) +
                     " for shape " + shape_string(xv.shape()));
  }
  Tensor<T> out(xv.shape());
  for (std::size_t c = 0; c < n; ++c) {
    T peak = -std::numeric_limits<T>::infinity();
    for (std::size_t r = 0; r < m; ++r)
      if (row_mask[r]) peak = std::max(peak, xv[r * n + c]);
    if (peak == -std::numeric_limits<T>::infinity()) continue;
    T total = 0;
    for (std::size_t r = 0; r < m; ++r) {
      if (!row_mask[r]) continue;
      out[r * n + c] = std::exp(xv[r * n + c] - peak);
      total += out[r * n + c];
    }
    for (std::size_t r = 0; r < m; ++r) out[r * n + c] /= total;
  }
  std::size_t ix = x.id();
  std::size_t iy = x.tape().node_count();
  return x.tape().record("softmax_columns", {ix}, std::move(out),
                         [ix, iy, m, n](Tape<T>& t, std::span<const T> g) {
                           auto gx = t.grad_for(ix);
                           const Tensor<T>& y = t.value(iy);
                           for (std::size_t c = 0; c < n; ++c) {
                             T dot = 0;
                             for (std::size_t r = 0; r < m; ++r) dot += g[r * n + c] * y[r * n + c];
                             for (std::size_t r = 0; r < m; ++r)
                               gx[r * n + c] += y[r * n + c] * (g[r * n + c] - dot);
                           }
                         });
}

template <typename T>
Var<T> normalize_columns(Var<T> x, T eps) {
  const Tensor<T>& xv = x.value();
  require_matrix(xv.shape(), "normalize_columns");
  const std::size_t m = xv.rows(), n = xv.cols();
  std::vector<T> denom(n, eps);
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t c = 0; c < n; ++c) denom[c] += xv[r * n + c];
  Tensor<T> out(xv.shape());
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t c = 0; c < n; ++c) out[r * n + c] = xv[r * n + c] / denom[c];
  std::size_t ix = x.id();
  return x.tape().record(
      "normalize_columns", {ix}, std::move(out),
      [ix, m, n, denom = std::move(denom)](Tape<T>& t, std::span<const T> g) {
        auto gx = t.grad_for(ix);
        const Tensor<T>& xv = t.value(ix);
        for (std::size_t c = 0; c < n; ++c) {
          T dot = 0;
          for (std::size_t r = 0; r < m; ++r) dot += g[r * n + c] * xv[r * n + c];
          const T s = denom[c];
          for (std::size_t r = 0; r < m; ++r) gx[r * n + c] += g[r * n + c] / s - dot / (s * s);
        }
      });
}

template <typename T>
Var<T> sum(Var<T> x) {
  const Tensor<T>& xv = x.value();
  T total = 0;
  for (T v : xv.values()) total += v;
  std::size_t ix = x.id();
  return x.tape().record("sum", {ix}, Tensor<T>(Shape{}, total),
                         [ix](Tape<T>& t, std::span<const T> g) {
                           for (T& v : t.grad_for(ix)) v += g[0];
                         });
}

template <typename T>
Var<T> mean(Var<T> x) {
  const std::size_t count = x.value().size();
  if (count == 0) throw ShapeError("mean: empty tensor");
  return scale(sum(x), T{1} / static_cast<T>(count));
}

template <typename T>
Var<T> max_over_positions(Var<T> x, MaskView row_mask) {
  const Tensor<T>& xv = x.value();
  require_matrix(xv.shape(), "max_over_positions");
  const std::size_t m = xv.rows(), n = xv.cols();
  if (row_mask.size() != m) {
    throw ShapeError("max_over_positions: mask of length " + std::to_string(row_mask.size()) +
                     " for shape " + shape_string(xv.shape()));
  }
  std::size_t first = m;
  for (std::size_t r = 0; r < m; ++r) {
    if (row_mask[r]) {
      first = r;
      break;
    }
  }
  if (first == m) throw std::invalid_argument("max_over_positions: no valid position");
  Tensor<T> out({1, n});
  std::vector<std::size_t> argmax(n, first);
  for (std::size_t c = 0; c < n; ++c) {
    T best = xv[first * n + c];
    for (std::size_t r = first + 1; r < m; ++r) {
      if (row_mask[r] && xv[r * n + c] > best) {
        best = xv[r * n + c];
        argmax[c] = r;
      }
    }
    out[c] = best;
  }
  std::size_t ix = x.id();
  return x.tape().record("max_over_positions", {ix}, std::move(out),
                         [ix, n, argmax = std::move(argmax)](Tape<T>& t, std::span<const T> g) {
                           auto gx = t.grad_for(ix);
                           for (std::size_t c = 0; c < n; ++c) gx[argmax[c] * n + c] += g[c];
                         });
}

template <typename T>
Var<T> mean_over_positions(Var<T> x, std::span<const std::size_t> rows) {
  const Tensor<T>& xv = x.value();
  require_matrix(xv.shape(), "mean_over_positions");
  if (rows.empty()) throw std::invalid_argument("mean_over_positions: empty position set");
  const std::size_t m = xv.rows(), n = xv.cols();
  for (std::size_t r : rows) {
    if (r >= m) {
      throw std::out_of_range("mean_over_positions: row " + std::to_string(r) + " outside " +
                              shape_string(xv.shape()));
    }
  }
  Tensor<T> out({1, n});
  for (std::size_t r : rows)
    for (std::size_t c = 0; c < n; ++c) out[c] += xv[r * n + c];
  const T inv = T{1} / static_cast<T>(rows.size());
  for (T& v : out.values()) v *= inv;
  std::size_t ix = x.id();
  return x.tape().record("mean_over_positions", {ix}, std::move(out),
                         [ix, n, inv, idx = std::vector<std::size_t>(rows.begin(), rows.end())](
                             Tape<T>& t, std::span<const T> g) {
                           auto gx = t.grad_for(ix);
                           for (std::size_t r : idx)
                             for (std::size_t c = 0; c < n; ++c) gx[r * n + c] += g[c] * inv;
                         });
}

template <typename T>
Var<T> concat_cols(std::span<const Var<T>> parts) {
  if (parts.empty()) throw std::invalid_argument("concat_cols: no operands");
  const std::size_t m = parts[0].rows();
  std::vector<std::size_t> ids, widths;
  std::size_t total = 0;
  for (const Var<T>& p : parts) {
    require_same_tape(parts[0], p, "concat_cols");
    require_matrix(p.shape(), "concat_cols");
    if (p.rows() != m) {
      throw ShapeError("concat_cols: row mismatch " + shape_string(parts[0].shape()) + " vs " +
                       shape_string(p.shape()));
    }
    ids.push_back(p.id());
    widths.push_back(p.cols());
    total += p.cols();
  }
  Tensor<T> out({m, total});
  std::size_t offset = 0;
  for (const Var<T>& p : parts) {
    const Tensor<T>& pv = p.value();
    const std::size_t w = pv.cols();
    for (std::size_t r = 0; r < m; ++r)
      std::copy_n(pv.data() + r * w, w, out.data() + r * total + offset);
    offset += w;
  }
  std::vector<std::size_t> inputs = ids;
  return parts[0].tape().record(
      "concat_cols", std::move(inputs), std::move(out),
      [ids = std::move(ids), widths = std::move(widths), m, total](Tape<T>& t, std::span<const T> g) {
        std::size_t offset = 0;
        for (std::size_t k = 0; k < ids.size(); ++k) {
          const std::size_t w = widths[k];
          if (auto gp = t.grad_for(ids[k]); !gp.empty()) {
            for (std::size_t r = 0; r < m; ++r)
              for (std::size_t c = 0; c < w; ++c) gp[r * w + c] += g[r * total + offset + c];
          }
          offset += w;
        }
      });
}

template <typename T>
Var<T> concat_rows(std::span<const Var<T>> parts) {
  if (parts.empty()) throw std::invalid_argument("concat_rows: no operands");
  const std::size_t n = parts[0].cols();
  std::vector<std::size_t> ids, offsets;
  std::size_t total = 0;
  for (const Var<T>& p : parts) {
    require_same_tape(parts[0], p, "concat_rows");
    require_matrix(p.shape(), "concat_rows");
    if (p.cols() != n) {
      throw ShapeError("concat_rows: column mismatch " + shape_string(parts[0].shape()) + " vs " +
                       shape_string(p.shape()));
    }
    ids.push_back(p.id());
    offsets.push_back(total * n);
    total += p.rows();
  }
  Tensor<T> out({total, n});
  for (std::size_t k = 0; k < parts.size(); ++k) {
    const Tensor<T>& pv = parts[k].value();
    std::copy(pv.values().begin(), pv.values().end(), out.data() + offsets[k]);
  }
  std::vector<std::size_t> inputs = ids;
  return parts[0].tape().record(
      "concat_rows", std::move(inputs), std::move(out),
      [ids = std::move(ids), offsets = std::move(offsets)](Tape<T>& t, std::span<const T> g) {
        for (std::size_t k = 0; k < ids.size(); ++k) {
          auto gp = t.grad_for(ids[k]);
          for (std::size_t i = 0; i < gp.size(); ++i) gp[i] += g[offsets[k] + i];
        }
      });
}

template <typename T>
Var<T> slice_rows(Var<T> x, std::size_t begin, std::size_t end) {
  const Tensor<T>& xv = x.value();
  require_matrix(xv.shape(), "slice_rows");
  if (begin >= end || end > xv.rows()) {
    throw std::out_of_range("slice_rows: range [" + std::to_string(begin) + ", " +
                            std::to_string(end) + ") invalid for " + shape_string(xv.shape()));
  }
  const std::size_t n = xv.cols();
  Tensor<T> out({end - begin, n});
  std::copy(xv.data() + begin * n, xv.data() + end * n, out.data());
  std::size_t ix = x.id();
  return x.tape().record("slice_rows", {ix}, std::move(out),
                         [ix, offset = begin * n](Tape<T>& t, std::span<const T> g) {
                           auto gx = t.grad_for(ix);
                           for (std::size_t i = 0; i < g.size(); ++i) gx[offset + i] += g[i];
                         });
}

template <typename T>
Var<T> slice_cols(Var<T> x, std::size_t begin, std::size_t end) {
  const Tensor<T>& xv = x.value();
  require_matrix(xv.shape(), "slice_cols");
  if (begin >= end || end > xv.cols()) {
    throw std::out_of_range("slice_cols: range [" + std::to_string(begin) + ", " +
                            std::to_string(end) + ") invalid for " + shape_string(xv.shape()));
  }
  const std::size_t m = xv.rows(), n = xv.cols(), w = end - begin;
  Tensor<T> out({m, w});
  for (std::size_t r = 0; r < m; ++r) std::copy_n(xv.data() + r * n + begin, w, out.data() + r * w);
  std::size_t ix = x.id();
  return x.tape().record("slice_cols", {ix}, std::move(out),
                         [ix, m, n, w, begin](Tape<T>& t, std::span<const T> g) {
                           auto gx = t.grad_for(ix);
                           for (std::size_t r = 0; r < m; ++r)
                             for (std::size_t c = 0; c < w; ++c) gx[r * n + begin + c] += g[r * w + c];
                         });
}

template <typename T>
Var<T> gather_rows(Var<T> table, std::span<const std::size_t> ids) {
  const Tensor<T>& tv = table.value();
  require_matrix(tv.shape(), "gather_rows");
  const std::size_t v = tv.rows(), n = tv.cols();
  for (std::size_t id : ids) {
    if (id >= v) {
      throw std::out_of_range("gather_rows: id " + std::to_string(id) + " outside table " +
                              shape_string(tv.shape()));
    }
  }
  if (ids.empty()) throw std::invalid_argument("gather_rows: empty id list");
  Tensor<T> out({ids.size(), n});
  for (std::size_t i = 0; i < ids.size(); ++i)
    std::copy_n(tv.data() + ids[i] * n, n, out.data() + i * n);
  std::size_t it = table.id();
  return table.tape().record("gather_rows", {it}, std::move(out),
                             [it, n, idx = std::vector<std::size_t>(ids.begin(), ids.end())](
                                 Tape<T>& t, std::span<const T> g) {
                               auto gt = t.grad_for(it);
                               for (std::size_t i = 0; i < idx.size(); ++i)
                                 for (std::size_t c = 0; c < n; ++c) gt[idx[i] * n + c] += g[i * n + c];
                             });
}

template <typename T>
Var<T> cross_entropy(Var<T> logits, std::size_t label) {
  const Tensor<T>& lv = logits.value();
  const std::size_t count = lv.size();
  if (label >= count) {
    throw std::out_of_range("cross_entropy: label " + std::to_string(label) + " with " +
                            std::to_string(count) + " classes");
  }
  T peak = *std::max_element(lv.values().begin(), lv.values().end());
  std::vector<T> probs(count);
  T total = 0;
  for (std::size_t i = 0; i < count; ++i) {
    probs[i] = std::exp(lv[i] - peak);
    total += probs[i];
  }
  for (T& p : probs) p /= total;
  T loss = std::log(total) + peak - lv[label];
  std::size_t il = logits.id();
  return logits.tape().record("cross_entropy", {il}, Tensor<T>(Shape{}, loss),
                              [il, label, probs = std::move(probs)](Tape<T>& t, std::span<const T> g) {
                                auto gl = t.grad_for(il);
                                for (std::size_t i = 0; i < gl.size(); ++i) {
                                  gl[i] += g[0] * (probs[i] - (i == label ? T{1} : T{0}));
                                }
                              });
}

#define SGCN_INSTANTIATE_OPS(T)                                                 \
  template Var<T> matmul(Var<T>, Var<T>);                                       \
  template Var<T> transpose(Var<T>);                                            \
  template Var<T> add(Var<T>, Var<T>);                                          \
  template Var<T> sub(Var<T>, Var<T>);                                          \
  template Var<T> mul(Var<T>, Var<T>);                                          \
  template Var<T> add(Var<T>, T);                                               \
  template Var<T> scale(Var<T>, T);                                             \
  template Var<T> multiply_constant(Var<T>, Tensor<T>);                         \
  template Var<T> mask_rows(Var<T>, MaskView);                                  \
  template Var<T> add_row_bias(Var<T>, Var<T>);                                 \
  template Var<T> activation(Activation, Var<T>);                               \
  template Var<T> softmax_columns(Var<T>, MaskView);                            \
  template Var<T> normalize_columns(Var<T>, T);                                 \
  template Var<T> sum(Var<T>);                                                  \
  template Var<T> mean(Var<T>);                                                 \
  template Var<T> max_over_positions(Var<T>, MaskView);                         \
  template Var<T> mean_over_positions(Var<T>, std::span<const std::size_t>);    \
  template Var<T> concat_cols(std::span<const Var<T>>);                         \
  template Var<T> concat_rows(std::span<const Var<T>>);                         \
  template Var<T> slice_rows(Var<T>, std::size_t, std::size_t);                 \
  template Var<T> slice_cols(Var<T>, std::size_t, std::size_t);                 \
  template Var<T> gather_rows(Var<T>, std::span<const std::size_t>);            \
  template Var<T> cross_entropy(Var<T>, std::size_t);

SGCN_INSTANTIATE_OPS(float)
SGCN_INSTANTIATE_OPS(double)

#undef SGCN_INSTANTIATE_OPS

}  // namespace sgcn::ad
