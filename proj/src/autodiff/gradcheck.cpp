#include "sgcn/autodiff/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace sgcn::ad {

namespace {

double evaluate(const LossBuilder& loss) {
  Tape<double> tape;
  Var<double> out = loss(tape);
  if (out.value().size() != 1) throw ShapeError("gradcheck: loss is not scalar");
  return out.value()[0];
}

GradCheckReport run(const LossBuilder& loss, const std::vector<NamedTensor<double>>& params,
                    const GradCheckOptions& options, const std::string* faulty_op, double fault_scale) {
  if (!(options.epsilon >= 1e-7 && options.epsilon <= 1e-4)) {
    throw std::invalid_argument("gradcheck: epsilon must lie in [1e-7, 1e-4]");
  }
  for (const auto& p : params) {
    p.tensor->set_requires_grad(true);
    p.tensor->grad();
    p.tensor->zero_grad();
  }
  {
    Tape<double> tape;
    if (faulty_op) tape.inject_backward_fault(*faulty_op, fault_scale);
    Var<double> out = loss(tape);
    tape.backward(out);
  }

  std::mt19937_64 rng(options.seed);
  GradCheckReport report;
  const double eps = options.epsilon;
  for (const auto& p : params) {
    Tensor<double>& t = *p.tensor;
    std::vector<std::size_t> coords(t.size());
    std::iota(coords.begin(), coords.end(), std::size_t{0});
    if (options.max_coords_per_tensor != 0 && coords.size() > options.max_coords_per_tensor) {
      for (std::size_t i = 0; i < options.max_coords_per_tensor; ++i) {
        std::size_t j = i + rng() % (coords.size() - i);
        std::swap(coords[i], coords[j]);
      }
      coords.resize(options.max_coords_per_tensor);
    }
    GroupError group{p.name, 0, 0.0};
    for (std::size_t c : coords) {
      const double saved = t[c];
      t[c] = saved + eps;
      const double up = evaluate(loss);
      t[c] = saved - eps;
      const double down = evaluate(loss);
      t[c] = saved;
      const double numeric = (up - down) / (2.0 * eps);
      const double analytic = t.grad()[c];
      const double err = std::abs(analytic - numeric) / std::max(1.0, std::abs(analytic));
      group.max_rel_error = std::max(group.max_rel_error, err);
      ++group.coords_checked;
    }
    report.coords_checked += group.coords_checked;
    if (report.worst_group.empty() || group.max_rel_error > report.max_rel_error) {
      report.max_rel_error = group.max_rel_error;
      report.worst_group = group.name;
    }
    report.groups.push_back(std::move(group));
  }
  return report;
}

}  // namespace

GradCheckReport finite_difference_check(const LossBuilder& loss,
                                        const std::vector<NamedTensor<double>>& params,
                                        const GradCheckOptions& options) {
  return run(loss, params, options, nullptr, 1.0);
}

GradCheckReport finite_difference_check(const LossBuilder& loss,
                                        const std::vector<NamedTensor<double>>& params,
                                        const GradCheckOptions& options,
                                        const std::string& faulty_op, double fault_scale) {
  return run(loss, params, options, &faulty_op, fault_scale);
}

}  // namespace sgcn::ad
