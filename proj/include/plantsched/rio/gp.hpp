#pragma once

#include <cstdint>
#include <optional>

#include <Eigen/Dense>

#include "plantsched/domain.hpp"
#include "plantsched/forecaster/model.hpp"

namespace plantsched::rio {

using Eigen::MatrixXd;
using Eigen::VectorXd;

struct IoKernelHyper {
  double sigma_in{1.0};
  double len_in{1.0};
  double sigma_out{1.0};
  double len_out{1.0};
  double noise_sd{0.0};  // diagonal term, not part of the kernel itself

  /// Throws ValidationError unless the four kernel parameters are positive and noise_sd >= 0.
  void validate() const;
  double prior_variance() const noexcept { return sigma_in * sigma_in + sigma_out * sigma_out; }
};

/// sigma_in^2 exp(-|g_a - g_b|^2 / (2 len_in^2)) + sigma_out^2 exp(-(y_a - y_b)^2 / (2 len_out^2))
double io_kernel(const VectorXd& features_a, double prediction_a, const VectorXd& features_b, double prediction_b,
                 const IoKernelHyper& hyper);

/// Residual training data: one row of features g(x) and one forecaster prediction per point.
struct ResidualData {
  MatrixXd features;     // n x d
  VectorXd predictions;  // n
  VectorXd residuals;    // n, observed - predicted

  Eigen::Index size() const noexcept { return residuals.size(); }
};

/// Runs the forecaster over every supervised pair of `history` and records (g(x), y_hat, y - y_hat).
ResidualData residual_dataset(const forecaster::ForecastModel& model, const DailyGduSeries& history);

struct GpFitConfig {
  /// Training points kept after uniform-stride subsampling.
  Eigen::Index max_points{1000};
  /// Points used when scoring candidate hyperparameters.
  Eigen::Index search_points{300};
  int starts{8};
  int max_evaluations_per_start{200};
  bool optimize{true};
  /// Starting (or fixed, when optimize is false) kernel parameters; derived from data if absent.
  std::optional<IoKernelHyper> hyper;
  /// Diagonal noise sd; defaults to sqrt(1e-4 var(E)).
  std::optional<double> noise_sd;
  std::uint64_t seed{17};
};

struct GpPosterior {
  double mean{0.0};
  double variance{0.0};
};

class GpResidualModel {
 public:
  GpResidualModel(ResidualData data, const IoKernelHyper& hyper, double variance_scale);

  const IoKernelHyper& hyper() const noexcept { return hyper_; }
  const ResidualData& data() const noexcept { return data_; }
  const MatrixXd& cholesky_factor() const noexcept { return chol_; }
  /// Times the diagonal noise was raised before the factorization succeeded.
  int jitter_escalations() const noexcept { return escalations_; }
  double log_marginal_likelihood() const noexcept { return log_likelihood_; }
  Eigen::Index feature_dim() const noexcept { return data_.features.cols(); }

  /// mean = k*^T K^-1 E, variance = k(q, q) - k*^T K^-1 k* (clamped at 0).
  GpPosterior posterior(const VectorXd& features, double prediction) const;

 private:
  ResidualData data_;
  IoKernelHyper hyper_;
  MatrixXd chol_;
  VectorXd alpha_;
  int escalations_{0};
  double log_likelihood_{0.0};
};

/// Maximizes the log marginal likelihood over log-hyperparameters (multi-start coordinate
/// search), then factors K + noise^2 I on up to max_points points. Throws ValidationError for
/// fewer than 2 points or non-finite input, SingularKernelError if the jitter ladder runs out.
GpResidualModel fit_gp(const ResidualData& data, const GpFitConfig& config = {});

/// Convenience: posterior at a query point.
inline GpPosterior gp_posterior(const GpResidualModel& model, const VectorXd& features, double prediction) {
  return model.posterior(features, prediction);
}

}  // namespace plantsched::rio
