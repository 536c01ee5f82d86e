#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace plantsched::forecaster {

struct AdamConfig {
  double learning_rate{0.001};
  double beta1{0.9};
  double beta2{0.999};
  double eps{1e-8};
};

/// First/second moment estimates; start from zeros.
struct AdamState {
  std::vector<double> m;
  std::vector<double> v;
  std::int64_t step{0};

  explicit AdamState(std::size_t n = 0) : m(n, 0.0), v(n, 0.0) {}
};

/// Bias-corrected update, in place:
///   m <- b1 m + (1 - b1) g,  v <- b2 v + (1 - b2) g^2,
///   p <- p - lr * (m / (1 - b1^t)) / (sqrt(v / (1 - b2^t)) + eps)
void adam_step(std::span<double> params, std::span<const double> gradients, AdamState& state,
               const AdamConfig& config);

}  // namespace plantsched::forecaster
