#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "plantsched/calendar.hpp"
#include "plantsched/domain.hpp"
#include "plantsched/harvest_map.hpp"

namespace plantsched::sched {

/// Inclusive range of weeks in which harvests are allowed.
struct WindowLimit {
  WeekIndex first_week;
  WeekIndex last_week;

  std::int32_t width() const noexcept { return last_week.value - first_week.value + 1; }
  bool contains(WeekIndex w) const noexcept { return w >= first_week && w <= last_week; }
  /// Throws ValidationError if first_week > last_week.
  void validate() const;

  friend bool operator==(const WindowLimit&, const WindowLimit&) = default;
};

/// Total ears harvested per week in each scenario.
class HarvestProfile {
 public:
  HarvestProfile() = default;
  HarvestProfile(std::size_t scenarios, WeekIndex first, WeekIndex last);

  std::size_t scenario_count() const noexcept { return scenarios_; }
  WeekIndex first_week() const noexcept { return first_; }
  WeekIndex last_week() const noexcept { return last_; }

  /// Zero outside the stored range.
  std::int64_t at(std::size_t scenario, WeekIndex week) const;
  void add(std::size_t scenario, WeekIndex week, std::int64_t ears);

  /// Loads for every week of `window`, in order.
  std::vector<std::int64_t> weekly(std::size_t scenario, WindowLimit window) const;
  std::int64_t total(std::size_t scenario) const;
  std::int64_t max_load() const;
  std::int64_t max_load(std::size_t scenario) const;
  /// First and last weeks with a non-zero harvest in any scenario.
  std::optional<WindowLimit> harvest_span() const;

  friend bool operator==(const HarvestProfile&, const HarvestProfile&) = default;

 private:
  std::size_t scenarios_{0};
  WeekIndex first_{1};
  WeekIndex last_{0};
  std::vector<std::int64_t> loads_;  // [scenario * weeks + (week - first)]
};

/// Profile of an assignment (one planting day per population). Unharvestable triples add nothing;
/// `skipped` (if given) counts them.
HarvestProfile profile_of(const harvest::HarvestTable& table, std::span<const DayIndex> assignment,
                          std::size_t* skipped = nullptr);

/// Probability-weighted sum. Uses an exact integer sum when all probabilities are equal.
double expectation(std::span<const std::int64_t> values, std::span<const double> probabilities);

struct Case1Value {
  double value{0.0};
  bool capacity_feasible{true};
  std::vector<std::int64_t> per_scenario;  // capacity minus the window minimum
};

/// sum_s P_s * max_{w in window} (capacity - harvest_s(w)); flags any week above capacity.
/// Throws ValidationError for an empty window or a probability list of the wrong length.
Case1Value evaluate_case1_objective(const HarvestProfile& profile, std::int64_t capacity,
                                    std::span<const double> probabilities, WindowLimit window);

/// sum over pairs w < w' of |a_w - a_w'|, computed exactly by sorting.
std::int64_t pairwise_spread(std::span<const std::int64_t> weekly);

/// sum_s P_s * sum_{w < w' in window} |harvest_s(w) - harvest_s(w')|
double evaluate_pairwise_objective(const HarvestProfile& profile, std::span<const double> probabilities,
                                   WindowLimit window);

/// Uniform probabilities 1/count.
std::vector<double> uniform_probabilities(std::size_t count);

struct PlantingSchedule {
  std::vector<DayIndex> assignment;  // parallel to the population list
  WindowLimit window;                // harvest window the solve was restricted to
  std::int64_t capacity{0};          // capacity the solve respected
  double objective_case1{0.0};
  double pairwise_objective{0.0};
  std::int64_t max_capacity_used{0};
  HarvestProfile profile;
  std::string engine;  // "exact" or "heuristic"
};

}  // namespace plantsched::sched
