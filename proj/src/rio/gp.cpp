#include "plantsched/rio/gp.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include <fmt/format.h>

#include "plantsched/errors.hpp"

namespace plantsched::rio {
namespace {

// A pivot below this fraction of the largest diagonal entry counts as a failed factorization.
constexpr double kPivotFloor = 1e-14;

struct Distances {
  MatrixXd in;   // squared feature distances
  MatrixXd out;  // squared prediction distances
};

Distances pairwise(const ResidualData& d) {
  const auto n = d.size();
  Distances D{MatrixXd::Zero(n, n), MatrixXd::Zero(n, n)};
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = a + 1; b < n; ++b) {
      const double din = (d.features.row(a) - d.features.row(b)).squaredNorm();
      const double dy = d.predictions[a] - d.predictions[b];
      D.in(a, b) = D.in(b, a) = din;
      D.out(a, b) = D.out(b, a) = dy * dy;
    }
  }
  return D;
}

MatrixXd kernel_matrix(const Distances& D, const IoKernelHyper& h, double noise2) {
  const double s_in = h.sigma_in * h.sigma_in;
  const double s_out = h.sigma_out * h.sigma_out;
  MatrixXd K = s_in * (D.in.array() * (-0.5 / (h.len_in * h.len_in))).exp() +
               s_out * (D.out.array() * (-0.5 / (h.len_out * h.len_out))).exp();
  K.diagonal().array() += noise2;
  return K;
}

/// Lower Cholesky factor, or nothing if a pivot is non-positive or negligibly small.
std::optional<MatrixXd> cholesky(const MatrixXd& K) {
  Eigen::LLT<MatrixXd> llt(K);
  if (llt.info() != Eigen::Success) return std::nullopt;
  MatrixXd L = llt.matrixL();
  const double floor = kPivotFloor * K.diagonal().maxCoeff();
  for (Eigen::Index k = 0; k < L.rows(); ++k) {
    if (!(L(k, k) * L(k, k) > floor)) return std::nullopt;
  }
  return L;
}

double log_likelihood(const MatrixXd& L, const VectorXd& residuals, VectorXd* alpha_out = nullptr) {
  VectorXd alpha = L.triangularView<Eigen::Lower>().solve(residuals);
  L.triangularView<Eigen::Lower>().transpose().solveInPlace(alpha);
  const double fit = -0.5 * residuals.dot(alpha);
  const double complexity = -L.diagonal().array().log().sum();
  const double constant = -0.5 * static_cast<double>(residuals.size()) * std::log(2.0 * std::numbers::pi);
  if (alpha_out != nullptr) *alpha_out = std::move(alpha);
  return fit + complexity + constant;
}

ResidualData subsample(const ResidualData& d, Eigen::Index max_points) {
  const auto n = d.size();
  if (max_points < 2 || n <= max_points) return d;
  const Eigen::Index stride = (n + max_points - 1) / max_points;
  const Eigen::Index kept = (n + stride - 1) / stride;
  ResidualData out{MatrixXd(kept, d.features.cols()), VectorXd(kept), VectorXd(kept)};
  for (Eigen::Index k = 0; k < kept; ++k) {
    out.features.row(k) = d.features.row(k * stride);
    out.predictions[k] = d.predictions[k * stride];
    out.residuals[k] = d.residuals[k * stride];
  }
  return out;
}

double median_offdiagonal(const MatrixXd& squared) {
  std::vector<double> v;
  v.reserve(static_cast<std::size_t>(squared.size()));
  for (Eigen::Index a = 0; a < squared.rows(); ++a)
    for (Eigen::Index b = a + 1; b < squared.cols(); ++b) v.push_back(std::sqrt(squared(a, b)));
  if (v.empty()) return 1.0;
  auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
  std::nth_element(v.begin(), mid, v.end());
  return *mid > 0.0 ? *mid : 1.0;
}

using LogHyper = std::array<double, 4>;  // log sigma_in, log len_in, log sigma_out, log len_out

IoKernelHyper from_log(const LogHyper& x, double noise_sd) {
  return IoKernelHyper{std::exp(x[0]), std::exp(x[1]), std::exp(x[2]), std::exp(x[3]), noise_sd};
}

}  // namespace

void IoKernelHyper::validate() const {
  std::vector<std::string> issues;
  if (!(sigma_in > 0.0) || !std::isfinite(sigma_in)) issues.emplace_back("sigma_in must be positive");
  if (!(len_in > 0.0) || !std::isfinite(len_in)) issues.emplace_back("len_in must be positive");
  if (!(sigma_out > 0.0) || !std::isfinite(sigma_out)) issues.emplace_back("sigma_out must be positive");
  if (!(len_out > 0.0) || !std::isfinite(len_out)) issues.emplace_back("len_out must be positive");
  if (!(noise_sd >= 0.0) || !std::isfinite(noise_sd)) issues.emplace_back("noise_sd must be non-negative");
  if (!issues.empty()) throw ValidationError(std::move(issues));
}

double io_kernel(const VectorXd& features_a, double prediction_a, const VectorXd& features_b, double prediction_b,
                 const IoKernelHyper& hyper) {
  if (features_a.size() != features_b.size()) {
    throw ShapeError(fmt::format("kernel feature lengths differ: {} vs {}", features_a.size(), features_b.size()));
  }
  const double din = (features_a - features_b).squaredNorm();
  const double dy = prediction_a - prediction_b;
  return hyper.sigma_in * hyper.sigma_in * std::exp(-din / (2.0 * hyper.len_in * hyper.len_in)) +
         hyper.sigma_out * hyper.sigma_out * std::exp(-(dy * dy) / (2.0 * hyper.len_out * hyper.len_out));
}

ResidualData residual_dataset(const forecaster::ForecastModel& model, const DailyGduSeries& history) {
  const auto w = static_cast<std::size_t>(model.window);
  if (history.values.size() <= w) throw ValidationError("history shorter than the forecast window");
  const auto n = static_cast<Eigen::Index>(history.values.size() - w);
  ResidualData d{MatrixXd(n, model.params.lstm.hidden_size()), VectorXd(n), VectorXd(n)};
  std::vector<double> z(w);
  for (Eigen::Index k = 0; k < n; ++k) {
    const auto first = static_cast<std::size_t>(k);
    for (std::size_t j = 0; j < w; ++j) z[j] = model.normalize(history.values[first + j]);
    const auto r = forecaster::forward(model, z);
    d.features.row(k) = r.features.transpose();
    d.predictions[k] = r.prediction;
    d.residuals[k] = history.values[first + w] - r.prediction;
  }
  return d;
}

GpResidualModel::GpResidualModel(ResidualData data, const IoKernelHyper& hyper, double variance_scale)
    : data_(std::move(data)), hyper_(hyper) {
  hyper_.validate();
  if (data_.size() < 2) throw ValidationError("GP needs at least two training points");
  if (data_.features.rows() != data_.size() || data_.predictions.size() != data_.size()) {
    throw ShapeError("residual data columns have different lengths");
  }
  const double scale = variance_scale > 0.0 ? variance_scale : 1.0;
  const double ceiling = 1e-1 * scale;
  const Distances D = pairwise(data_);
  double noise2 = hyper_.noise_sd * hyper_.noise_sd;
  while (true) {
    if (auto L = cholesky(kernel_matrix(D, hyper_, noise2))) {
      chol_ = std::move(*L);
      break;
    }
    const double next = std::max(10.0 * noise2, 1e-4 * scale);
    if (next > ceiling * (1.0 + 1e-12)) {
      throw SingularKernelError(fmt::format("kernel matrix not positive definite with diagonal noise {:.3g}", noise2));
    }
    noise2 = next;
    ++escalations_;
  }
  hyper_.noise_sd = std::sqrt(noise2);
  log_likelihood_ = log_likelihood(chol_, data_.residuals, &alpha_);
}

GpPosterior GpResidualModel::posterior(const VectorXd& features, double prediction) const {
  if (features.size() != feature_dim()) {
    throw ShapeError(fmt::format("query has {} features, model expects {}", features.size(), feature_dim()));
  }
  const auto n = data_.size();
  VectorXd k_star(n);
  const double c_in = -0.5 / (hyper_.len_in * hyper_.len_in);
  const double c_out = -0.5 / (hyper_.len_out * hyper_.len_out);
  const double s_in = hyper_.sigma_in * hyper_.sigma_in;
  const double s_out = hyper_.sigma_out * hyper_.sigma_out;
  for (Eigen::Index k = 0; k < n; ++k) {
    const double din = (data_.features.row(k).transpose() - features).squaredNorm();
    const double dy = data_.predictions[k] - prediction;
    k_star[k] = s_in * std::exp(c_in * din) + s_out * std::exp(c_out * dy * dy);
  }
  GpPosterior p;
  p.mean = k_star.dot(alpha_);
  const VectorXd v = chol_.triangularView<Eigen::Lower>().solve(k_star);
  p.variance = std::max(0.0, hyper_.prior_variance() - v.squaredNorm());
  return p;
}

GpResidualModel fit_gp(const ResidualData& data, const GpFitConfig& config) {
  if (data.size() < 2) throw ValidationError("GP needs at least two training points");
  if (!data.features.allFinite() || !data.predictions.allFinite() || !data.residuals.allFinite()) {
    throw ValidationError("GP training data contains non-finite values");
  }
  if (data.features.rows() != data.size() || data.predictions.size() != data.size()) {
    throw ShapeError("residual data columns have different lengths");
  }
  const ResidualData train = subsample(data, config.max_points);
  const double mean = train.residuals.mean();
  const double var = (train.residuals.array() - mean).square().mean();
  const double scale = var > 0.0 ? var : 1.0;
  const double noise_sd = config.noise_sd.value_or(std::sqrt(1e-4 * scale));

  const ResidualData search = subsample(train, config.search_points);
  const Distances D = pairwise(search);

  IoKernelHyper start = config.hyper.value_or(IoKernelHyper{std::sqrt(scale), median_offdiagonal(D.in),
                                                            std::sqrt(scale), median_offdiagonal(D.out), noise_sd});
  start.noise_sd = noise_sd;
  start.validate();
  if (!config.optimize) return GpResidualModel(train, start, scale);

  const LogHyper origin{std::log(start.sigma_in), std::log(start.len_in), std::log(start.sigma_out),
                        std::log(start.len_out)};
  constexpr double kSpan = 7.0;  // search box: origin +- kSpan in log space
  const auto score = [&](const LogHyper& x) {
    for (std::size_t k = 0; k < 4; ++k) {
      if (std::abs(x[k] - origin[k]) > kSpan) return -std::numeric_limits<double>::infinity();
    }
    const auto h = from_log(x, noise_sd);
    const auto L = cholesky(kernel_matrix(D, h, noise_sd * noise_sd));
    if (!L) return -std::numeric_limits<double>::infinity();
    const double ll = log_likelihood(*L, search.residuals);
    return std::isfinite(ll) ? ll : -std::numeric_limits<double>::infinity();
  };

  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> jitter(-1.5, 1.5);
  LogHyper best = origin;
  double best_score = score(origin);
  for (int s = 0; s < std::max(1, config.starts); ++s) {
    LogHyper x = origin;
    if (s > 0) {
      for (auto& v : x) v += jitter(rng);
    }
    double fx = score(x);
    double step = 1.0;
    int evaluations = 1;
    while (step > 1e-2 && evaluations < config.max_evaluations_per_start) {
      bool improved = false;
      for (std::size_t k = 0; k < 4 && evaluations < config.max_evaluations_per_start; ++k) {
        for (const double dir : {1.0, -1.0}) {
          LogHyper y = x;
          y[k] += dir * step;
          const double fy = score(y);
          ++evaluations;
          if (fy > fx) {
            x = y;
            fx = fy;
            improved = true;
            break;
          }
        }
      }
      if (!improved) step *= 0.5;
    }
    if (fx > best_score) {
      best_score = fx;
      best = x;
    }
  }
  return GpResidualModel(train, from_log(best, noise_sd), scale);
}

}  // namespace plantsched::rio
