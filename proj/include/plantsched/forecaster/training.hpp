#pragma once

#include <cstdint>
#include <vector>

#include "plantsched/domain.hpp"
#include "plantsched/forecaster/model.hpp"

namespace plantsched::forecaster {

struct TrainConfig {
  double learning_rate{0.001};
  int batch_size{32};
  int epochs{200};
  double adam_beta1{0.9};
  double adam_beta2{0.999};
  double adam_eps{1e-8};
  std::uint64_t rng_seed{1};

  /// Trailing share of the supervised pairs held out for early stopping; 0 disables it.
  double validation_fraction{0.1};
  /// Epochs without validation improvement before stopping.
  int patience{20};
  /// Record full training-set MAE after every epoch (extra forward pass).
  bool track_train_loss{false};
};

/// Throws ValidationError for non-positive learning rate, batch size < 1, negative epochs.
void validate_train_config(const TrainConfig& config);

struct TrainResult {
  ForecastModel model;
  std::vector<double> train_loss;       // per epoch, normalized units; empty unless tracked
  std::vector<double> validation_loss;  // per epoch, normalized units
  int best_epoch{0};                    // 1-based; 0 when no epoch ran
  int epochs_run{0};
};

/// Initial model for a history: fresh parameters plus the history's z-score constants.
ForecastModel initialize_model(const DailyGduSeries& history, std::uint64_t seed);

/// Supervised pairs: inputs are the `window` days before day k, target is day k.
struct SupervisedSet {
  std::vector<double> windows;  // normalized, back to back
  std::vector<double> targets;  // normalized
  std::size_t size() const noexcept { return targets.size(); }
};
SupervisedSet make_supervised(const ForecastModel& model, std::span<const double> raw_series);

/// Adam on the MAE loss, mini-batches drawn from a seeded shuffle each epoch.
TrainResult train_detailed(const DailyGduSeries& history, const TrainConfig& config);
ForecastModel train(const DailyGduSeries& history, const TrainConfig& config);

}  // namespace plantsched::forecaster
