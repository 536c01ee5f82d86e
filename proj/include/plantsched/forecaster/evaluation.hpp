#pragma once

#include <functional>
#include <span>
#include <vector>

#include "plantsched/domain.hpp"
#include "plantsched/forecaster/training.hpp"

namespace plantsched::forecaster {

struct FoldReport {
  int fold{0};  // 1-based
  DayIndex train_first, train_last, test_first, test_last;
  double rmse{0.0}, rrmse{0.0}, r2{0.0};
};

struct AccuracyReport {
  double rmse{0.0};
  double rrmse{0.0};  // fraction of mean(observed)
  double r2{0.0};
  std::vector<FoldReport> folds;
};

/// rmse = sqrt(mean((p - o)^2)), rrmse = rmse / mean(o), r2 = 1 - SS_res / SS_tot.
/// Throws ValidationError for length mismatch, fewer than 2 points, mean(o) = 0 or var(o) = 0.
AccuracyReport accuracy_metrics(std::span<const double> predicted, std::span<const double> observed);

/// Expanding-window split: each test block is one calendar half-year, training covers
/// everything from the series start up to the block.
struct FoldWindow {
  DayIndex train_first, train_last, test_first, test_last;
};

/// The last `folds` complete calendar half-years of the series. Needs at least six years.
std::vector<FoldWindow> time_wise_folds(const DailyGduSeries& history, int folds = 5);

/// Maps the `window` raw GDUs before a day to a prediction for that day.
using Predictor = std::function<double(std::span<const double>)>;
using Fitter = std::function<Predictor(const DailyGduSeries& train)>;

/// Generic cross-validation with one-step-ahead predictions over each test block.
AccuracyReport cross_validate_with(const DailyGduSeries& history, const Fitter& fit, int window = kWindow,
                                   int folds = 5);

AccuracyReport cross_validate(const DailyGduSeries& history, const TrainConfig& config, int folds = 5);

/// Tomorrow equals today.
AccuracyReport persistence_cross_validate(const DailyGduSeries& history, int folds = 5);

}  // namespace plantsched::forecaster
