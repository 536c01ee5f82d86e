#pragma once

#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "plantsched/scheduler/profile.hpp"
#include "plantsched/scheduler/sweep.hpp"

namespace plantsched::sched {

struct ScenarioSummary {
  WeekIndex first_week;
  WeekIndex last_week;
  std::int64_t max_load{0};
  std::int64_t case1{0};  // capacity minus the lowest week inside the harvest period
  std::int64_t pairwise{0};    // pairwise spread inside the harvest period
};

/// Harvest-period summary of a schedule. Objectives are evaluated over the realized harvest
/// period (first to last harvest week over all scenarios).
struct ScheduleReport {
  WeekIndex first_week;
  WeekIndex last_week;
  std::int32_t period_weeks{0};
  std::int64_t max_capacity{0};  // largest weekly harvest in any scenario
  std::int64_t capacity{0};
  bool capacity_feasible{true};
  double case1{0.0};
  double pairwise{0.0};
  std::size_t unharvestable{0};  // triples contributing nothing (only possible for foreign schedules)
  std::vector<ScenarioSummary> scenarios;
  HarvestProfile profile;
};

/// Throws ValidationError when nothing is harvested at all.
ScheduleReport evaluate_schedule(std::span<const DayIndex> assignment, const harvest::HarvestTable& table,
                                 std::int64_t capacity, std::span<const double> probabilities);

nlohmann::ordered_json report_to_json(const ScheduleReport& report);

/// `population,site,plant_date,expected_harvest_week`; the week is the probability-weighted mean
/// over scenarios, or `none` when some scenario never harvests.
void write_schedule_csv(std::ostream& out, std::span<const SeedPopulation> populations,
                        std::span<const DayIndex> assignment, const harvest::HarvestTable& table,
                        std::span<const double> probabilities);

/// Reads back the population and plant_date columns, ordered like `populations`.
std::vector<DayIndex> read_schedule_csv(std::istream& in, std::span<const SeedPopulation> populations);

/// `scenario,week,harvest` over the profile's week range.
void write_profile_csv(std::ostream& out, const HarvestProfile& profile);

/// Bar chart of expected weekly harvest with the capacity line; `baseline` is drawn behind.
void write_profile_svg(std::ostream& out, const HarvestProfile& profile, std::span<const double> probabilities,
                       std::int64_t capacity, const HarvestProfile* baseline, const std::string& title);

/// Heat map of the pairwise objective over the sweep grid; unsolved cells are grey.
void write_sweep_svg(std::ostream& out, std::span<const SweepCell> grid, const std::string& title);

}  // namespace plantsched::sched
