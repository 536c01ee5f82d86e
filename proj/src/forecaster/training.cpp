#include "plantsched/forecaster/training.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <fmt/format.h>

#include "plantsched/errors.hpp"
#include "plantsched/forecaster/adam.hpp"

namespace plantsched::forecaster {

void validate_train_config(const TrainConfig& config) {
  std::vector<std::string> issues;
  if (!(config.learning_rate > 0.0)) issues.emplace_back("learning rate must be positive");
  if (config.batch_size < 1) issues.emplace_back("batch size must be at least 1");
  if (config.epochs < 0) issues.emplace_back("epochs must be non-negative");
  if (!(config.validation_fraction >= 0.0 && config.validation_fraction < 1.0)) {
    issues.emplace_back("validation fraction must lie in [0, 1)");
  }
  if (config.patience < 0) issues.emplace_back("patience must be non-negative");
  if (!issues.empty()) throw ValidationError(std::move(issues));
}

ForecastModel initialize_model(const DailyGduSeries& history, std::uint64_t seed) {
  ForecastModel model;
  model.params = initialize_params(kLstmUnits, kDenseUnits, seed);
  const auto& v = history.values;
  if (!v.empty()) {
    const double n = static_cast<double>(v.size());
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
    double ss = 0.0;
    for (const double x : v) ss += (x - mean) * (x - mean);
    const double sd = std::sqrt(ss / n);
    model.input_mean = mean;
    model.input_scale = sd > 0.0 ? sd : 1.0;
  }
  return model;
}

SupervisedSet make_supervised(const ForecastModel& model, std::span<const double> raw_series) {
  SupervisedSet set;
  const auto w = static_cast<std::size_t>(model.window);
  if (raw_series.size() <= w) return set;
  const std::size_t count = raw_series.size() - w;
  set.windows.reserve(count * w);
  set.targets.reserve(count);
  for (std::size_t k = w; k < raw_series.size(); ++k) {
    for (std::size_t j = k - w; j < k; ++j) set.windows.push_back(model.normalize(raw_series[j]));
    set.targets.push_back(model.normalize(raw_series[k]));
  }
  return set;
}

TrainResult train_detailed(const DailyGduSeries& history, const TrainConfig& config) {
  validate_train_config(config);
  if (history.size() <= kWindow + config.batch_size) {
    throw ValidationError(fmt::format("history of {} days is too short: need more than {} (window + batch size)",
                                      history.size(), kWindow + config.batch_size));
  }

  TrainResult result;
  result.model = initialize_model(history, config.rng_seed);
  auto& model = result.model;
  const auto data = make_supervised(model, history.values);

  const auto w = static_cast<std::size_t>(model.window);
  std::size_t n_val = 0;
  if (config.validation_fraction > 0.0) {
    n_val = static_cast<std::size_t>(std::floor(config.validation_fraction * static_cast<double>(data.size())));
  }
  const std::size_t n_train = data.size() - n_val;
  const std::span<const double> val_windows(data.windows.data() + n_train * w, n_val * w);
  const std::span<const double> val_targets(data.targets.data() + n_train, n_val);

  std::vector<double> flat = model.params.flatten();
  std::vector<double> best = flat;
  double best_val = std::numeric_limits<double>::infinity();
  AdamState adam(flat.size());
  const AdamConfig adam_config{config.learning_rate, config.adam_beta1, config.adam_beta2, config.adam_eps};

  // Shuffle stream is separate from the initialization stream so both depend only on the seed.
  std::mt19937_64 rng(config.rng_seed ^ 0x9E3779B97F4A7C15ULL);
  std::vector<std::size_t> order(n_train);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<double> batch_windows;
  std::vector<double> batch_targets;
  NetworkParams grad;
  int since_best = 0;

  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t start = 0; start < n_train; start += static_cast<std::size_t>(config.batch_size)) {
      const std::size_t stop = std::min(n_train, start + static_cast<std::size_t>(config.batch_size));
      batch_windows.clear();
      batch_targets.clear();
      for (std::size_t k = start; k < stop; ++k) {
        const auto idx = order[k];
        batch_windows.insert(batch_windows.end(), data.windows.begin() + static_cast<std::ptrdiff_t>(idx * w),
                             data.windows.begin() + static_cast<std::ptrdiff_t>((idx + 1) * w));
        batch_targets.push_back(data.targets[idx]);
      }
      mae_loss_gradient(model.params, batch_windows, batch_targets, model.window, grad);
      const auto g = grad.flatten();
      adam_step(flat, g, adam, adam_config);
      model.params.assign(flat);
    }
    result.epochs_run = epoch;

    if (config.track_train_loss) {
      result.train_loss.push_back(mae_loss(model.params, std::span<const double>(data.windows.data(), n_train * w),
                                           std::span<const double>(data.targets.data(), n_train), model.window));
    }
    if (n_val > 0) {
      const double val = mae_loss(model.params, val_windows, val_targets, model.window);
      result.validation_loss.push_back(val);
      if (val < best_val) {
        best_val = val;
        best = flat;
        result.best_epoch = epoch;
        since_best = 0;
      } else if (config.patience > 0 && ++since_best >= config.patience) {
        break;
      }
    } else {
      best = flat;
      result.best_epoch = epoch;
    }
  }
  model.params.assign(best);
  return result;
}

ForecastModel train(const DailyGduSeries& history, const TrainConfig& config) {
  return train_detailed(history, config).model;
}

}  // namespace plantsched::forecaster
