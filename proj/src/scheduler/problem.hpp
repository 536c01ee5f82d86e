#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "plantsched/harvest_map.hpp"
#include "plantsched/scheduler/profile.hpp"

namespace plantsched::sched::detail {

/// One distinct harvest pattern of a population: the earliest planting day producing it and the
/// harvest week (offset from the window start) in every scenario.
struct Option {
  DayIndex day;
  std::vector<std::int32_t> weeks;
};

/// Scheduling instance restricted to a harvest window, with equivalent planting days merged.
struct Problem {
  WindowLimit window;
  std::int32_t weeks{0};
  std::size_t scenarios{0};
  std::vector<std::int64_t> quantity;
  std::vector<std::vector<Option>> options;  // per population, ascending by day
  std::vector<double> probabilities;

  std::size_t population_count() const noexcept { return quantity.size(); }
  std::int64_t total_quantity() const;
  std::int64_t max_quantity() const;
};

/// Throws InfeasibleError naming the first population without a usable day, ValidationError
/// for inconsistent inputs.
Problem build_problem(const harvest::HarvestTable& table, std::span<const SeedPopulation> populations,
                      std::span<const double> probabilities, std::optional<WindowLimit> window);

/// Evaluates the chosen days against the raw table.
PlantingSchedule make_schedule(const harvest::HarvestTable& table, const Problem& problem,
                               std::span<const int> choice, std::int64_t capacity, const char* engine);

/// Dense week loads (scenario-major) for a choice vector.
std::vector<std::int64_t> loads_of(const Problem& problem, std::span<const int> choice);

}  // namespace plantsched::sched::detail
