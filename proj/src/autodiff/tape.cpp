#include "sgcn/autodiff/tape.hpp"

#include <algorithm>
#include <cmath>

namespace sgcn::ad {

template <typename T>
Tape<T>::Tape() {
#ifdef NDEBUG
  check_finite_ = false;
#else
  check_finite_ = true;
#endif
}

template <typename T>
std::size_t Tape<T>::add_node(Tensor<T>* node, bool requires_grad) {
  nodes_.push_back(node);
  requires_grad_.push_back(requires_grad ? 1 : 0);
  return nodes_.size() - 1;
}

template <typename T>
Var<T> Tape<T>::constant(Tensor<T> value) {
  owned_.push_back(std::move(value));
  owned_.back().set_requires_grad(false);
  return Var<T>(this, add_node(&owned_.back(), false));
}

template <typename T>
Var<T> Tape<T>::param(Tensor<T>& external) {
  if (auto it = params_.find(&external); it != params_.end()) return Var<T>(this, it->second);
  std::size_t id = add_node(&external, grad_enabled_ && external.requires_grad());
  params_.emplace(&external, id);
  return Var<T>(this, id);
}

template <typename T>
Var<T> Tape<T>::record(std::string_view kind, std::vector<std::size_t> inputs, Tensor<T> output,
                       BackwardFn backward) {
  if (check_finite_ && !output.all_finite()) {
    throw NumericError("non-finite value produced by op '" + std::string(kind) + "'");
  }
  bool needs_grad = grad_enabled_ && std::any_of(inputs.begin(), inputs.end(),
                                [this](std::size_t id) { return requires_grad_[id] != 0; });
  owned_.push_back(std::move(output));
  owned_.back().set_requires_grad(needs_grad);
  std::size_t id = add_node(&owned_.back(), needs_grad);
  if (needs_grad) {
    ops_.push_back(Op{std::string(kind), std::move(inputs), id, std::move(backward)});
  }
  return Var<T>(this, id);
}

template <typename T>
std::span<T> Tape<T>::grad_for(std::size_t id) {
  if (!requires_grad_[id]) return {};
  return nodes_[id]->grad();
}

template <typename T>
void Tape<T>::inject_backward_fault(std::string kind, T scale) {
  fault_ = std::make_pair(std::move(kind), scale);
}

template <typename T>
void Tape<T>::backward(Var<T> loss) {
  if (&loss.tape() != this) throw std::invalid_argument("backward: loss belongs to another tape");
  const Tensor<T>& out = value(loss.id());
  if (out.size() != 1) {
    throw ShapeError("backward: loss must be scalar, got shape " + shape_string(out.shape()));
  }
  if (!requires_grad_[loss.id()]) return;
  nodes_[loss.id()]->grad()[0] += T{1};

  std::vector<T> scaled;
  for (auto it = ops_.rbegin(); it != ops_.rend(); ++it) {
    Tensor<T>& node = *nodes_[it->output];
    if (!node.has_grad()) continue;
    std::span<const T> g = node.grad();
    if (fault_ && fault_->first == it->kind) {
      scaled.assign(g.begin(), g.end());
      for (T& v : scaled) v *= fault_->second;
      g = scaled;
    }
    it->backward(*this, g);
    if (check_finite_) {
      for (std::size_t in : it->inputs) {
        if (!requires_grad_[in] || !nodes_[in]->has_grad()) continue;
        auto gi = nodes_[in]->grad();
        if (!std::all_of(gi.begin(), gi.end(), [](T v) { return std::isfinite(v); })) {
          throw NumericError("non-finite gradient from backward of op '" + it->kind + "'");
        }
      }
    }
  }
}

template class Tape<float>;
template class Tape<double>;

}  // namespace sgcn::ad
