#include "plantsched/forecaster/model.hpp"

#include <cmath>
#include <random>

#include <fmt/format.h>

#include "plantsched/errors.hpp"

namespace plantsched::forecaster {
namespace {

template <typename P, typename F>
void for_each_block(P& p, F&& f) {
  for (auto* m : {&p.lstm.w_f, &p.lstm.w_i, &p.lstm.w_c, &p.lstm.w_o}) f(m->data(), m->size(), m->rows(), m->cols());
  for (auto* v : {&p.lstm.b_f, &p.lstm.b_i, &p.lstm.b_c, &p.lstm.b_o}) f(v->data(), v->size(), v->size(), 1);
  f(p.head.w_hidden.data(), p.head.w_hidden.size(), p.head.w_hidden.rows(), p.head.w_hidden.cols());
  f(p.head.b_hidden.data(), p.head.b_hidden.size(), p.head.b_hidden.size(), 1);
  f(p.head.w_out.data(), p.head.w_out.size(), p.head.w_out.size(), 1);
  f(&p.head.b_out, 1, 1, 1);
}

// Eigen stores column-major; the flat layout is row-major.
void copy_out(const double* data, Eigen::Index rows, Eigen::Index cols, std::vector<double>& out) {
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) out.push_back(data[c * rows + r]);
}

struct Workspace {
  std::vector<LstmStepCache> caches;
};

}  // namespace

NetworkParams NetworkParams::zeros(Eigen::Index lstm_units, Eigen::Index dense_units, Eigen::Index input_size) {
  NetworkParams p;
  p.lstm = LstmParams::zeros(lstm_units, input_size);
  p.head.w_hidden = MatrixXd::Zero(dense_units, lstm_units);
  p.head.b_hidden = VectorXd::Zero(dense_units);
  p.head.w_out = VectorXd::Zero(dense_units);
  p.head.b_out = 0.0;
  return p;
}

std::size_t NetworkParams::parameter_count() const {
  std::size_t n = 0;
  for_each_block(*this, [&](const double*, Eigen::Index size, Eigen::Index, Eigen::Index) {
    n += static_cast<std::size_t>(size);
  });
  return n;
}

std::vector<double> NetworkParams::flatten() const {
  std::vector<double> out;
  out.reserve(parameter_count());
  for_each_block(*this, [&](const double* data, Eigen::Index, Eigen::Index rows, Eigen::Index cols) {
    copy_out(data, rows, cols, out);
  });
  return out;
}

void NetworkParams::assign(std::span<const double> flat) {
  if (flat.size() != parameter_count()) {
    throw ShapeError(fmt::format("flat parameter vector has {} values, expected {}", flat.size(), parameter_count()));
  }
  std::size_t k = 0;
  for_each_block(*this, [&](double* data, Eigen::Index, Eigen::Index rows, Eigen::Index cols) {
    for (Eigen::Index r = 0; r < rows; ++r)
      for (Eigen::Index c = 0; c < cols; ++c) data[c * rows + r] = flat[k++];
  });
}

void NetworkParams::check_shapes() const {
  lstm.check_shapes();
  if (lstm.input_size() != 1) throw ShapeError("forecaster expects a scalar input per step");
  const auto h = lstm.hidden_size();
  const auto d = head.b_hidden.size();
  if (head.w_hidden.rows() != d || head.w_hidden.cols() != h || head.w_out.size() != d) {
    throw ShapeError(fmt::format("dense head shapes ({}x{}, {}, {}) do not match lstm units {}", head.w_hidden.rows(),
                                 head.w_hidden.cols(), d, head.w_out.size(), h));
  }
}

NetworkParams initialize_params(Eigen::Index lstm_units, Eigen::Index dense_units, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto p = NetworkParams::zeros(lstm_units, dense_units);
  const auto fill = [&](double* data, Eigen::Index size, double fan_in) {
    std::uniform_real_distribution<double> u(-1.0 / std::sqrt(fan_in), 1.0 / std::sqrt(fan_in));
    for (Eigen::Index k = 0; k < size; ++k) data[k] = u(rng);
  };
  const double lstm_fan_in = static_cast<double>(lstm_units + 1);
  for (auto* m : {&p.lstm.w_f, &p.lstm.w_i, &p.lstm.w_c, &p.lstm.w_o}) fill(m->data(), m->size(), lstm_fan_in);
  for (auto* v : {&p.lstm.b_i, &p.lstm.b_c, &p.lstm.b_o}) fill(v->data(), v->size(), lstm_fan_in);
  p.lstm.b_f.setOnes();
  fill(p.head.w_hidden.data(), p.head.w_hidden.size(), static_cast<double>(lstm_units));
  fill(p.head.b_hidden.data(), p.head.b_hidden.size(), static_cast<double>(lstm_units));
  fill(p.head.w_out.data(), p.head.w_out.size(), static_cast<double>(dense_units));
  fill(&p.head.b_out, 1, static_cast<double>(dense_units));
  return p;
}

double network_output(const NetworkParams& params, std::span<const double> normalized_window, VectorXd* features) {
  const auto h_units = params.lstm.hidden_size();
  VectorXd h = VectorXd::Zero(h_units);
  VectorXd c = VectorXd::Zero(h_units);
  VectorXd x(1);
  for (const double v : normalized_window) {
    x[0] = v;
    auto next = lstm_cell_step(params.lstm, x, h, c);
    h = std::move(next.h);
    c = std::move(next.c);
  }
  const VectorXd hidden = (params.head.w_hidden * h + params.head.b_hidden).cwiseMax(0.0);
  const double out = params.head.w_out.dot(hidden) + params.head.b_out;
  if (features != nullptr) *features = std::move(h);
  return out;
}

ForwardResult forward(const ForecastModel& model, std::span<const double> normalized_window) {
  if (static_cast<int>(normalized_window.size()) != model.window) {
    throw ShapeError(fmt::format("forecast window has {} values, expected {}", normalized_window.size(), model.window));
  }
  ForwardResult r;
  r.prediction = model.denormalize(network_output(model.params, normalized_window, &r.features));
  return r;
}

ForwardResult forward_raw(const ForecastModel& model, std::span<const double> raw_window) {
  std::vector<double> z(raw_window.size());
  for (std::size_t k = 0; k < raw_window.size(); ++k) z[k] = model.normalize(raw_window[k]);
  return forward(model, z);
}

double mae_loss(const NetworkParams& params, std::span<const double> windows, std::span<const double> targets,
                int window) {
  if (targets.empty() || windows.size() != targets.size() * static_cast<std::size_t>(window)) {
    throw ShapeError("batch windows and targets disagree");
  }
  double total = 0.0;
  for (std::size_t n = 0; n < targets.size(); ++n) {
    total += std::abs(network_output(params, windows.subspan(n * window, window)) - targets[n]);
  }
  return total / static_cast<double>(targets.size());
}

double mae_loss_gradient(const NetworkParams& params, std::span<const double> windows, std::span<const double> targets,
                         int window, NetworkParams& grad) {
  if (targets.empty() || windows.size() != targets.size() * static_cast<std::size_t>(window)) {
    throw ShapeError("batch windows and targets disagree");
  }
  const auto h_units = params.lstm.hidden_size();
  grad = NetworkParams::zeros(h_units, params.head.b_hidden.size(), params.lstm.input_size());
  const double inv_n = 1.0 / static_cast<double>(targets.size());

  thread_local Workspace ws;
  ws.caches.resize(static_cast<std::size_t>(window));
  double total = 0.0;
  VectorXd x(1);
  for (std::size_t n = 0; n < targets.size(); ++n) {
    const auto seq = windows.subspan(n * window, window);
    VectorXd h = VectorXd::Zero(h_units);
    VectorXd c = VectorXd::Zero(h_units);
    for (int t = 0; t < window; ++t) {
      x[0] = seq[static_cast<std::size_t>(t)];
      auto next = lstm_cell_step(params.lstm, x, h, c, &ws.caches[static_cast<std::size_t>(t)]);
      h = std::move(next.h);
      c = std::move(next.c);
    }
    const VectorXd pre = params.head.w_hidden * h + params.head.b_hidden;
    const VectorXd hidden = pre.cwiseMax(0.0);
    const double out = params.head.w_out.dot(hidden) + params.head.b_out;
    const double residual = out - targets[n];
    total += std::abs(residual);

    // d|r|/dr taken as 0 at the kink
    const double dy = (residual > 0.0 ? 1.0 : residual < 0.0 ? -1.0 : 0.0) * inv_n;
    grad.head.w_out += dy * hidden;
    grad.head.b_out += dy;
    const VectorXd du = (dy * params.head.w_out).cwiseProduct((pre.array() > 0.0).cast<double>().matrix());
    grad.head.w_hidden.noalias() += du * h.transpose();
    grad.head.b_hidden += du;

    VectorXd dh = params.head.w_hidden.transpose() * du;
    VectorXd dc = VectorXd::Zero(h_units);
    for (int t = window - 1; t >= 0; --t) {
      auto step = lstm_cell_backward(params.lstm, ws.caches[static_cast<std::size_t>(t)], dh, dc, grad.lstm);
      dh = std::move(step.dh_prev);
      dc = std::move(step.dc_prev);
    }
  }
  return total * inv_n;
}

}  // namespace plantsched::forecaster
