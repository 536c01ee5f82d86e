#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "plantsched/calendar.hpp"
#include "plantsched/domain.hpp"

namespace plantsched::harvest {

/// First day t' > plant with sum of GDU over [plant, t' - 1] >= required_gdu, where t' must not
/// pass the last scenario day. Returns `plant` itself when required_gdu is 0 and nothing when the
/// scenario ends first. Throws RangeError if `plant` is outside the scenario.
std::optional<DayIndex> harvest_day(DayIndex plant, double required_gdu, const DailyGduSeries& scenario);

/// Harvest week of every (population, planting day, scenario) triple. Quantities are the
/// population's harvest quantity; triples that never mature are marked unharvestable.
class HarvestTable {
 public:
  HarvestTable() = default;

  std::size_t population_count() const noexcept { return rows_.size(); }
  std::size_t scenario_count() const noexcept { return scenarios_; }

  DayIndex earliest(std::size_t population) const { return rows_.at(population).earliest; }
  DayIndex latest(std::size_t population) const {
    return rows_.at(population).earliest + (rows_.at(population).width - 1);
  }
  std::int32_t window_width(std::size_t population) const { return rows_.at(population).width; }
  std::int64_t quantity(std::size_t population) const { return rows_.at(population).quantity; }

  /// Harvest week of a triple, or nothing when unharvestable. Throws RangeError for a planting
  /// day outside the population's window.
  std::optional<WeekIndex> week(std::size_t population, DayIndex plant, std::size_t scenario) const;
  /// Harvestable in every scenario.
  bool admissible(std::size_t population, DayIndex plant) const;

  std::size_t entry_count() const noexcept { return entries_; }
  std::size_t unharvestable_count() const noexcept { return unharvestable_; }
  /// Triples where the overshoot past the requirement exceeds the planting day's own GDU
  /// (the literal reading of the second harvest condition). Diagnostic only.
  std::size_t literal_bound_violations() const noexcept { return literal_violations_; }

  /// Writes `population,plant_day,scenario,harvest_week,quantity`; unharvestable triples carry
  /// `none` as the week and 0 as the quantity. plant_day is the day index.
  void write_csv(std::ostream& out, std::span<const SeedPopulation> populations) const;

 private:
  friend HarvestTable build_harvest_table(std::span<const SeedPopulation>, std::span<const DailyGduSeries>,
                                          const WeekMembership&);
  static constexpr std::int32_t kNone = INT32_MIN;

  struct Row {
    DayIndex earliest;
    std::int32_t width{0};
    std::int64_t quantity{0};
    std::vector<std::int32_t> weeks;  // [(plant - earliest) * scenarios + s]
  };

  std::vector<Row> rows_;
  std::size_t scenarios_{0};
  std::size_t entries_{0};
  std::size_t unharvestable_{0};
  std::size_t literal_violations_{0};
};

/// Requires every scenario to cover every planting window and `membership` to cover every scenario day.
HarvestTable build_harvest_table(std::span<const SeedPopulation> populations,
                                 std::span<const DailyGduSeries> scenarios, const WeekMembership& membership);

}  // namespace plantsched::harvest
