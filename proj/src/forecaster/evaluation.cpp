#include "plantsched/forecaster/evaluation.hpp"

#include <chrono>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "plantsched/errors.hpp"

namespace plantsched::forecaster {

AccuracyReport accuracy_metrics(std::span<const double> predicted, std::span<const double> observed) {
  if (predicted.size() != observed.size()) {
    throw ValidationError(fmt::format("prediction length {} differs from observation length {}", predicted.size(),
                                      observed.size()));
  }
  if (observed.size() < 2) throw ValidationError("accuracy metrics need at least two points");
  const double n = static_cast<double>(observed.size());
  const double mean = std::accumulate(observed.begin(), observed.end(), 0.0) / n;
  double ss_res = 0.0;
  double ss_tot = 0.0;
  for (std::size_t k = 0; k < observed.size(); ++k) {
    ss_res += (predicted[k] - observed[k]) * (predicted[k] - observed[k]);
    ss_tot += (observed[k] - mean) * (observed[k] - mean);
  }
  if (mean == 0.0) throw ValidationError("relative RMSE undefined: mean of observations is zero");
  if (ss_tot == 0.0) throw ValidationError("R^2 undefined: observations have zero variance");
  AccuracyReport r;
  r.rmse = std::sqrt(ss_res / n);
  r.rrmse = r.rmse / mean;
  r.r2 = 1.0 - ss_res / ss_tot;
  return r;
}

std::vector<FoldWindow> time_wise_folds(const DailyGduSeries& history, int folds) {
  if (folds < 1) throw ValidationError("fold count must be positive");
  if (history.size() < 6 * 365) {
    throw ValidationError(fmt::format("cross-validation needs at least six years of history, got {} days",
                                      history.size()));
  }
  namespace chr = std::chrono;
  const auto civil = [](DayIndex d) {
    return chr::year_month_day{chr::sys_days{chr::year{2020} / chr::January / 1} + chr::days{d.value}};
  };
  // first day after the last complete half-year
  const auto after_end = civil(history.end_day() + 1);
  const int y = static_cast<int>(after_end.year());
  const unsigned m = static_cast<unsigned>(after_end.month());
  DayIndex boundary = m >= 7 ? day_from_civil(y, 7, 1) : day_from_civil(y, 1, 1);

  std::vector<FoldWindow> out(static_cast<std::size_t>(folds));
  for (int k = folds - 1; k >= 0; --k) {
    const auto b = civil(boundary);
    const int by = static_cast<int>(b.year());
    const DayIndex start = static_cast<unsigned>(b.month()) == 7 ? day_from_civil(by, 1, 1) : day_from_civil(by - 1, 7, 1);
    out[static_cast<std::size_t>(k)] = FoldWindow{history.start_day, start - 1, start, boundary - 1};
    boundary = start;
  }
  if (out.front().train_last - out.front().train_first + 1 <= kWindow) {
    throw ValidationError("history too short to train before the first test block");
  }
  return out;
}

AccuracyReport cross_validate_with(const DailyGduSeries& history, const Fitter& fit, int window, int folds) {
  const auto windows = time_wise_folds(history, folds);
  AccuracyReport report;
  std::vector<double> all_pred;
  std::vector<double> all_obs;
  for (std::size_t k = 0; k < windows.size(); ++k) {
    const auto& fw = windows[k];
    const auto predictor = fit(history.slice(fw.train_first, fw.train_last));
    std::vector<double> pred;
    std::vector<double> obs;
    for (DayIndex d = fw.test_first; d <= fw.test_last; d = d + 1) {
      const auto offset = static_cast<std::size_t>(d - history.start_day);
      const std::span<const double> inputs(history.values.data() + offset - static_cast<std::size_t>(window),
                                           static_cast<std::size_t>(window));
      pred.push_back(predictor(inputs));
      obs.push_back(history.values[offset]);
    }
    const auto m = accuracy_metrics(pred, obs);
    report.folds.push_back(FoldReport{static_cast<int>(k) + 1, fw.train_first, fw.train_last, fw.test_first,
                                      fw.test_last, m.rmse, m.rrmse, m.r2});
    all_pred.insert(all_pred.end(), pred.begin(), pred.end());
    all_obs.insert(all_obs.end(), obs.begin(), obs.end());
  }
  const auto pooled = accuracy_metrics(all_pred, all_obs);
  report.rmse = pooled.rmse;
  report.rrmse = pooled.rrmse;
  report.r2 = pooled.r2;
  return report;
}

AccuracyReport cross_validate(const DailyGduSeries& history, const TrainConfig& config, int folds) {
  return cross_validate_with(
      history,
      [&config](const DailyGduSeries& train_span) -> Predictor {
        auto model = std::make_shared<ForecastModel>(train(train_span, config));
        return [model](std::span<const double> raw) { return forward_raw(*model, raw).prediction; };
      },
      kWindow, folds);
}

AccuracyReport persistence_cross_validate(const DailyGduSeries& history, int folds) {
  return cross_validate_with(
      history,
      [](const DailyGduSeries&) -> Predictor { return [](std::span<const double> raw) { return raw.back(); }; },
      kWindow, folds);
}

}  // namespace plantsched::forecaster
