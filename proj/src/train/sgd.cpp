#include "sgcn/train/sgd.hpp"

#include <cmath>

namespace sgcn::train {

template <typename T>
SgdStats sgd_step(ModelParams<T>& params, double lr, double clip_norm) {
  double squared = 0.0;
  params.visit([&](const std::string& name, Tensor<T>& t) {
    if (!t.has_grad()) return;
    for (T g : t.grad()) {
      if (!std::isfinite(g)) throw ad::NumericError("sgd_step: non-finite gradient in " + name);
      squared += static_cast<double>(g) * static_cast<double>(g);
    }
  });
  SgdStats stats;
  stats.grad_norm = std::sqrt(squared);
  double factor = 1.0;
  if (clip_norm > 0.0 && stats.grad_norm > clip_norm) {
    factor = clip_norm / stats.grad_norm;
    stats.clipped = true;
  }
  const T step = static_cast<T>(lr * factor);
  params.visit([&](const std::string&, Tensor<T>& t) {
    if (!t.has_grad()) return;
    auto g = t.grad();
    auto v = t.values();
    for (std::size_t i = 0; i < v.size(); ++i) v[i] -= step * g[i];
    t.zero_grad();
  });
  return stats;
}

template SgdStats sgd_step(ModelParams<float>&, double, double);
template SgdStats sgd_step(ModelParams<double>&, double, double);

}  // namespace sgcn::train
