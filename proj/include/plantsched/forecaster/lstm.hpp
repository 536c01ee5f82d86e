#pragma once

#include <Eigen/Dense>

namespace plantsched::forecaster {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Gate weights act on the concatenation [h_prev, x]; every W is hidden x (hidden + input).
struct LstmParams {
  MatrixXd w_f, w_i, w_c, w_o;
  VectorXd b_f, b_i, b_c, b_o;

  static LstmParams zeros(Eigen::Index hidden_size, Eigen::Index input_size);

  Eigen::Index hidden_size() const noexcept { return b_f.size(); }
  Eigen::Index input_size() const noexcept { return w_f.cols() - b_f.size(); }

  /// Throws ShapeError when the gate blocks disagree.
  void check_shapes() const;
};

struct LstmState {
  VectorXd h;
  VectorXd c;
};

/// Values from one step kept for the backward pass.
struct LstmStepCache {
  VectorXd z;  // [h_prev, x]
  VectorXd f, i, c_tilde, o;
  VectorXd c_prev, c, tanh_c;
};

/// One cell update:
///   f = sigmoid(W_f z + b_f), i = sigmoid(W_i z + b_i), c~ = tanh(W_c z + b_c),
///   c = f * c_prev + i * c~, o = sigmoid(W_o z + b_o), h = o * tanh(c).
LstmState lstm_cell_step(const LstmParams& params, const VectorXd& x, const VectorXd& h_prev, const VectorXd& c_prev,
                         LstmStepCache* cache = nullptr);

struct LstmStepGrad {
  VectorXd dx;
  VectorXd dh_prev;
  VectorXd dc_prev;
};

/// Back-propagates (dL/dh, dL/dc) through one step, accumulating parameter gradients into `grad`.
LstmStepGrad lstm_cell_backward(const LstmParams& params, const LstmStepCache& cache, const VectorXd& dh,
                                const VectorXd& dc, LstmParams& grad);

}  // namespace plantsched::forecaster
