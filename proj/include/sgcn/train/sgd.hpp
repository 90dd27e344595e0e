#pragma once

#include "sgcn/model/params.hpp"

namespace sgcn::train {

struct SgdStats {
  double grad_norm = 0.0;  // before clipping
  bool clipped = false;
};

/// theta <- theta - lr * g, after rescaling all gradients to `clip_norm` when
/// their global L2 norm exceeds it (clip_norm <= 0 disables clipping).
/// Gradients are zeroed afterwards. A non-finite gradient throws
/// ad::NumericError naming its parameter and leaves the parameters untouched.
template <typename T>
SgdStats sgd_step(ModelParams<T>& params, double lr, double clip_norm);

}  // namespace sgcn::train
