#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <span>
#include <vector>

#include "plantsched/domain.hpp"
#include "plantsched/forecaster/model.hpp"
#include "plantsched/rio/gp.hpp"

namespace plantsched::rio {

/// Monte Carlo rollout: each day runs the forecaster on the sliding window, corrects it with the
/// residual GP, samples N(y_hat + mean, variance), clamps at zero and feeds the sample back.
/// `seed_window` holds the last observed days (raw GDU), at least model.window of them.
DailyGduSeries rollout(const forecaster::ForecastModel& model, const GpResidualModel& gp,
                       std::span<const double> seed_window, std::int32_t horizon, DayIndex start_day, SiteId site,
                       std::mt19937_64& rng);

struct Scenario {
  DailyGduSeries series;
  double probability{0.0};
  std::uint64_t seed{0};
};

struct ScenarioSet {
  std::vector<Scenario> scenarios;
  std::uint64_t rng_seed{0};
  std::int32_t horizon_days{kHorizonDays};

  std::size_t size() const noexcept { return scenarios.size(); }
  std::vector<double> probabilities() const;
  /// Throws ValidationError unless probabilities sum to 1, values are >= 0 and every scenario
  /// spans the same horizon.
  void validate() const;
};

/// Seed of scenario `index`, derived from the set seed so results never depend on thread count.
std::uint64_t scenario_seed(std::uint64_t set_seed, std::size_t index);

struct ScenarioConfig {
  std::size_t count{25};
  std::uint64_t rng_seed{1};
  std::int32_t horizon{kHorizonDays};
  DayIndex start_day{0};
  unsigned threads{1};
};

/// `count` independent rollouts seeded from the last days of `history`, each with probability 1/count.
ScenarioSet generate_scenarios(const forecaster::ForecastModel& model, const GpResidualModel& gp,
                               const DailyGduSeries& history, const ScenarioConfig& config);

/// Writes `scenarios.csv` (scenario,day,gdu; day is the day index) and `scenarios.json`
/// (probabilities, seeds, horizon, start day, site) into `dir`.
void write_scenarios(const std::filesystem::path& dir, const ScenarioSet& set);
ScenarioSet read_scenarios(const std::filesystem::path& dir);

}  // namespace plantsched::rio
