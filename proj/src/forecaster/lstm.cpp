#include "plantsched/forecaster/lstm.hpp"

#include <fmt/format.h>

#include "plantsched/errors.hpp"

namespace plantsched::forecaster {
namespace {

VectorXd sigmoid(const VectorXd& a) { return (1.0 + (-a.array()).exp()).inverse().matrix(); }

}  // namespace

LstmParams LstmParams::zeros(Eigen::Index hidden_size, Eigen::Index input_size) {
  const auto cols = hidden_size + input_size;
  LstmParams p;
  p.w_f = p.w_i = p.w_c = p.w_o = MatrixXd::Zero(hidden_size, cols);
  p.b_f = p.b_i = p.b_c = p.b_o = VectorXd::Zero(hidden_size);
  return p;
}

void LstmParams::check_shapes() const {
  const auto h = b_f.size();
  const auto cols = w_f.cols();
  for (const auto* w : {&w_f, &w_i, &w_c, &w_o}) {
    if (w->rows() != h || w->cols() != cols) {
      throw ShapeError(fmt::format("gate weight is {}x{}, expected {}x{}", w->rows(), w->cols(), h, cols));
    }
  }
  for (const auto* b : {&b_i, &b_c, &b_o}) {
    if (b->size() != h) throw ShapeError(fmt::format("gate bias has length {}, expected {}", b->size(), h));
  }
  if (cols <= h) throw ShapeError("gate weights have no input columns");
}

LstmState lstm_cell_step(const LstmParams& params, const VectorXd& x, const VectorXd& h_prev, const VectorXd& c_prev,
                         LstmStepCache* cache) {
  const auto hidden = params.hidden_size();
  if (h_prev.size() != hidden || c_prev.size() != hidden) {
    throw ShapeError(fmt::format("state length {}/{} does not match hidden size {}", h_prev.size(), c_prev.size(),
                                 hidden));
  }
  if (x.size() != params.input_size()) {
    throw ShapeError(fmt::format("input length {} does not match input size {}", x.size(), params.input_size()));
  }
  VectorXd z(hidden + x.size());
  z << h_prev, x;

  VectorXd f = sigmoid(params.w_f * z + params.b_f);
  VectorXd i = sigmoid(params.w_i * z + params.b_i);
  VectorXd c_tilde = (params.w_c * z + params.b_c).array().tanh().matrix();
  VectorXd o = sigmoid(params.w_o * z + params.b_o);
  VectorXd c = f.cwiseProduct(c_prev) + i.cwiseProduct(c_tilde);
  VectorXd tanh_c = c.array().tanh().matrix();
  VectorXd h = o.cwiseProduct(tanh_c);

  if (cache != nullptr) {
    cache->z = std::move(z);
    cache->f = std::move(f);
    cache->i = std::move(i);
    cache->c_tilde = std::move(c_tilde);
    cache->o = std::move(o);
    cache->c_prev = c_prev;
    cache->c = c;
    cache->tanh_c = std::move(tanh_c);
  }
  return {std::move(h), std::move(c)};
}

LstmStepGrad lstm_cell_backward(const LstmParams& params, const LstmStepCache& cache, const VectorXd& dh,
                                const VectorXd& dc, LstmParams& grad) {
  const auto hidden = params.hidden_size();
  const auto ones = VectorXd::Ones(hidden).array();

  const VectorXd d_o = dh.cwiseProduct(cache.tanh_c);
  const VectorXd d_c = dc + dh.cwiseProduct(cache.o).cwiseProduct((ones - cache.tanh_c.array().square()).matrix());

  const VectorXd da_f = (d_c.array() * cache.c_prev.array() * cache.f.array() * (ones - cache.f.array())).matrix();
  const VectorXd da_i = (d_c.array() * cache.c_tilde.array() * cache.i.array() * (ones - cache.i.array())).matrix();
  const VectorXd da_c = (d_c.array() * cache.i.array() * (ones - cache.c_tilde.array().square())).matrix();
  const VectorXd da_o = (d_o.array() * cache.o.array() * (ones - cache.o.array())).matrix();

  grad.w_f.noalias() += da_f * cache.z.transpose();
  grad.w_i.noalias() += da_i * cache.z.transpose();
  grad.w_c.noalias() += da_c * cache.z.transpose();
  grad.w_o.noalias() += da_o * cache.z.transpose();
  grad.b_f += da_f;
  grad.b_i += da_i;
  grad.b_c += da_c;
  grad.b_o += da_o;

  VectorXd dz = params.w_f.transpose() * da_f;
  dz.noalias() += params.w_i.transpose() * da_i;
  dz.noalias() += params.w_c.transpose() * da_c;
  dz.noalias() += params.w_o.transpose() * da_o;

  return {dz.tail(dz.size() - hidden), dz.head(hidden), d_c.cwiseProduct(cache.f)};
}

}  // namespace plantsched::forecaster
