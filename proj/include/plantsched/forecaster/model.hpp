#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "plantsched/forecaster/lstm.hpp"

namespace plantsched::forecaster {

inline constexpr int kWindow = 30;
inline constexpr int kLstmUnits = 20;
inline constexpr int kDenseUnits = 20;

/// hidden = relu(W h + b); prediction = w_out . hidden + b_out
struct DenseHead {
  MatrixXd w_hidden;
  VectorXd b_hidden;
  VectorXd w_out;
  double b_out{0.0};
};

struct NetworkParams {
  LstmParams lstm;
  DenseHead head;

  static NetworkParams zeros(Eigen::Index lstm_units, Eigen::Index dense_units, Eigen::Index input_size = 1);

  /// Fixed flattening order: W_f, W_i, W_c, W_o (row-major), b_f, b_i, b_c, b_o,
  /// dense W (row-major), dense b, output weights, output bias.
  std::vector<double> flatten() const;
  void assign(std::span<const double> flat);
  std::size_t parameter_count() const;

  void check_shapes() const;
};

/// Uniform in +-1/sqrt(fan_in) per layer; forget-gate bias starts at 1.
NetworkParams initialize_params(Eigen::Index lstm_units, Eigen::Index dense_units, std::uint64_t seed);

/// Network plus the z-score constants of its training data.
struct ForecastModel {
  NetworkParams params;
  double input_mean{0.0};
  double input_scale{1.0};
  int window{kWindow};

  double normalize(double gdu) const noexcept { return (gdu - input_mean) / input_scale; }
  double denormalize(double z) const noexcept { return z * input_scale + input_mean; }
};

struct ForwardResult {
  double prediction{0.0};  // GDU units
  VectorXd features;       // final LSTM hidden state g(x)
};

/// Unrolls the LSTM from a zero state over an already-normalized window.
ForwardResult forward(const ForecastModel& model, std::span<const double> normalized_window);
/// Same, normalizing raw GDU values first.
ForwardResult forward_raw(const ForecastModel& model, std::span<const double> raw_window);

/// Output of the network in normalized units, without denormalizing.
double network_output(const NetworkParams& params, std::span<const double> normalized_window,
                      VectorXd* features = nullptr);

/// Mean absolute error over a batch plus its gradient with respect to every parameter.
/// `windows` holds the inputs back to back (batch x window), targets are normalized.
double mae_loss_gradient(const NetworkParams& params, std::span<const double> windows, std::span<const double> targets,
                         int window, NetworkParams& grad);

double mae_loss(const NetworkParams& params, std::span<const double> windows, std::span<const double> targets,
                int window);

}  // namespace plantsched::forecaster
