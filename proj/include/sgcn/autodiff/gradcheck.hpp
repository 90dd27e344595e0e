#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "sgcn/autodiff/tape.hpp"
#include "sgcn/autodiff/tensor.hpp"

namespace sgcn::ad {

template <typename T>
struct NamedTensor {
  std::string name;
  Tensor<T>* tensor;
};

struct GroupError {
  std::string name;
  std::size_t coords_checked = 0;
  double max_rel_error = 0.0;
};

struct GradCheckReport {
  double max_rel_error = 0.0;
  std::string worst_group;
  std::size_t coords_checked = 0;
  std::vector<GroupError> groups;
};

struct GradCheckOptions {
  double epsilon = 1e-5;
  // Coordinates sampled per tensor; 0 checks every coordinate.
  std::size_t max_coords_per_tensor = 0;
  std::uint64_t seed = 0;
};

// Builds the scalar loss on a fresh tape. Must be a deterministic function of the parameters.
using LossBuilder = std::function<Var<double>(Tape<double>&)>;

/// Compares reverse-mode gradients against central differences.
///
/// Error per coordinate is |analytic - numeric| / max(1, |analytic|). The
/// check is double-only; epsilon must lie in [1e-7, 1e-4]. Gradients of
/// `params` are overwritten.
GradCheckReport finite_difference_check(const LossBuilder& loss,
                                        const std::vector<NamedTensor<double>>& params,
                                        const GradCheckOptions& options = {});

// Same, with a fault injected into the backward rule of one op kind.
GradCheckReport finite_difference_check(const LossBuilder& loss,
                                        const std::vector<NamedTensor<double>>& params,
                                        const GradCheckOptions& options,
                                        const std::string& faulty_op, double fault_scale);

}  // namespace sgcn::ad
