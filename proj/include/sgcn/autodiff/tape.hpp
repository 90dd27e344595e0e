#pragma once

#include <cstddef>
#include <deque>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "sgcn/autodiff/tensor.hpp"

namespace sgcn::ad {

template <typename T>
class Tape;

/// Handle to a tensor recorded on a tape. Cheap to copy; valid while the tape lives.
template <typename T>
class Var {
 public:
  Var() = default;
  Var(Tape<T>* tape, std::size_t id) : tape_(tape), id_(id) {}

  Tape<T>& tape() const { return *tape_; }
  std::size_t id() const { return id_; }
  bool valid() const { return tape_ != nullptr; }

  const Tensor<T>& value() const;
  const Shape& shape() const { return value().shape(); }
  std::size_t rows() const { return value().rows(); }
  std::size_t cols() const { return value().cols(); }
  bool requires_grad() const;
  // Gradient accumulated by the last backward pass (empty span if none reached it).
  std::span<const T> grad() const;

 private:
  Tape<T>* tape_ = nullptr;
  std::size_t id_ = 0;
};

/// Records operations in execution order and replays their backward rules in
/// exact reverse order. Intermediate tensors are owned by the tape; parameters
/// are referenced, so their gradients accumulate in place across uses.
///
/// A tape and its tensors belong to one thread.
template <typename T>
class Tape {
 public:
  using BackwardFn = std::function<void(Tape&, std::span<const T> out_grad)>;

  Tape();
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  Var<T> constant(Tensor<T> value);
  // Registers an externally owned tensor. Repeat registrations of the same
  // tensor return the same node.
  Var<T> param(Tensor<T>& external);

  Var<T> record(std::string_view kind, std::vector<std::size_t> inputs, Tensor<T> output,
                BackwardFn backward);

  const Tensor<T>& value(std::size_t id) const { return *nodes_[id]; }
  bool requires_grad(std::size_t id) const { return requires_grad_[id] != 0; }
  bool has_grad(std::size_t id) const { return nodes_[id]->has_grad(); }
  // Gradient buffer of a node, or an empty span when the node does not need one.
  std::span<T> grad_for(std::size_t id);

  void backward(Var<T> loss);

  std::size_t node_count() const { return nodes_.size(); }
  std::size_t op_count() const { return ops_.size(); }
  std::string_view op_kind(std::size_t op) const { return ops_[op].kind; }
  const std::vector<std::size_t>& op_inputs(std::size_t op) const { return ops_[op].inputs; }
  std::size_t op_output(std::size_t op) const { return ops_[op].output; }

  // With gradients disabled nothing is recorded for backward (inference).
  void set_grad_enabled(bool on) { grad_enabled_ = on; }
  bool grad_enabled() const { return grad_enabled_; }

  void set_check_finite(bool on) { check_finite_ = on; }
  bool check_finite() const { return check_finite_; }

  // Test hook: scales the incoming gradient of every op of `kind` during backward.
  void inject_backward_fault(std::string kind, T scale);

 private:
  struct Op {
    std::string kind;
    std::vector<std::size_t> inputs;
    std::size_t output;
    BackwardFn backward;
  };

  std::size_t add_node(Tensor<T>* node, bool requires_grad);

  std::deque<Tensor<T>> owned_;
  std::vector<Tensor<T>*> nodes_;
  std::vector<unsigned char> requires_grad_;
  std::vector<Op> ops_;
  std::unordered_map<const Tensor<T>*, std::size_t> params_;
  bool check_finite_;
  bool grad_enabled_ = true;
  std::optional<std::pair<std::string, T>> fault_;
};

template <typename T>
const Tensor<T>& Var<T>::value() const {
  return tape_->value(id_);
}

template <typename T>
bool Var<T>::requires_grad() const {
  return tape_->requires_grad(id_);
}

template <typename T>
std::span<const T> Var<T>::grad() const {
  return tape_->value(id_).grad();
}

extern template class Tape<float>;
extern template class Tape<double>;

}  // namespace sgcn::ad
