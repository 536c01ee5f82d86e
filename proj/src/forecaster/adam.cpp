#include "plantsched/forecaster/adam.hpp"

#include <cmath>

#include "plantsched/errors.hpp"

namespace plantsched::forecaster {

void adam_step(std::span<double> params, std::span<const double> gradients, AdamState& state,
               const AdamConfig& config) {
  if (gradients.size() != params.size() || state.m.size() != params.size() || state.v.size() != params.size()) {
    throw ShapeError("adam: parameter, gradient and moment sizes differ");
  }
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double correction1 = 1.0 - std::pow(config.beta1, t);
  const double correction2 = 1.0 - std::pow(config.beta2, t);
  for (std::size_t k = 0; k < params.size(); ++k) {
    const double g = gradients[k];
    state.m[k] = config.beta1 * state.m[k] + (1.0 - config.beta1) * g;
    state.v[k] = config.beta2 * state.v[k] + (1.0 - config.beta2) * g * g;
    const double m_hat = state.m[k] / correction1;
    const double v_hat = state.v[k] / correction2;
    params[k] -= config.learning_rate * m_hat / (std::sqrt(v_hat) + config.eps);
  }
}

}  // namespace plantsched::forecaster
