#include "plantsched/harvest_map.hpp"

#include <ostream>

#include <fmt/format.h>

#include "plantsched/errors.hpp"

namespace plantsched::harvest {
namespace {

struct Maturity {
  std::optional<DayIndex> day;
  double accumulated{0.0};
};

Maturity mature(DayIndex plant, double required_gdu, const DailyGduSeries& scenario) {
  if (!scenario.covers(plant)) {
    throw RangeError(fmt::format("planting day {} outside scenario span [{}, {}]", plant.value,
                                 scenario.start_day.value, scenario.end_day().value));
  }
  if (required_gdu <= 0.0) return {plant, 0.0};
  double sum = 0.0;
  // t' ranges over (plant, end]; the sum covers [plant, t' - 1]
  for (DayIndex t = plant; t < scenario.end_day(); t = t + 1) {
    sum += scenario.at(t);
    if (sum >= required_gdu) return {t + 1, sum};
  }
  return {std::nullopt, sum};
}

}  // namespace

std::optional<DayIndex> harvest_day(DayIndex plant, double required_gdu, const DailyGduSeries& scenario) {
  return mature(plant, required_gdu, scenario).day;
}

std::optional<WeekIndex> HarvestTable::week(std::size_t population, DayIndex plant, std::size_t scenario) const {
  const auto& row = rows_.at(population);
  const auto offset = plant - row.earliest;
  if (offset < 0 || offset >= row.width) {
    throw RangeError(fmt::format("day {} outside planting window of population {}", plant.value, population));
  }
  if (scenario >= scenarios_) throw RangeError(fmt::format("scenario {} out of range", scenario));
  const auto w = row.weeks[static_cast<std::size_t>(offset) * scenarios_ + scenario];
  if (w == kNone) return std::nullopt;
  return WeekIndex{w};
}

bool HarvestTable::admissible(std::size_t population, DayIndex plant) const {
  for (std::size_t s = 0; s < scenarios_; ++s) {
    if (!week(population, plant, s)) return false;
  }
  return true;
}

void HarvestTable::write_csv(std::ostream& out, std::span<const SeedPopulation> populations) const {
  if (populations.size() != rows_.size()) throw ValidationError("population list does not match harvest table");
  out << "population,plant_day,scenario,harvest_week,quantity\n";
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const auto& row = rows_[i];
    for (std::int32_t k = 0; k < row.width; ++k) {
      for (std::size_t s = 0; s < scenarios_; ++s) {
        const auto w = row.weeks[static_cast<std::size_t>(k) * scenarios_ + s];
        if (w == kNone) {
          out << fmt::format("{},{},{},none,0\n", populations[i].id, (row.earliest + k).value, s);
        } else {
          out << fmt::format("{},{},{},{},{}\n", populations[i].id, (row.earliest + k).value, s, w, row.quantity);
        }
      }
    }
  }
}

HarvestTable build_harvest_table(std::span<const SeedPopulation> populations,
                                 std::span<const DailyGduSeries> scenarios, const WeekMembership& membership) {
  if (scenarios.empty()) throw ValidationError("harvest table needs at least one scenario");
  HarvestTable table;
  table.scenarios_ = scenarios.size();
  table.rows_.reserve(populations.size());
  for (const auto& p : populations) {
    HarvestTable::Row row{p.earliest_plant, p.window_width(), p.harvest_quantity, {}};
    row.weeks.resize(static_cast<std::size_t>(row.width) * scenarios.size(), HarvestTable::kNone);
    for (std::int32_t k = 0; k < row.width; ++k) {
      const DayIndex plant = p.earliest_plant + k;
      for (std::size_t s = 0; s < scenarios.size(); ++s) {
        const auto m = mature(plant, p.required_gdu, scenarios[s]);
        if (!m.day) {
          ++table.unharvestable_;
          continue;
        }
        row.weeks[static_cast<std::size_t>(k) * scenarios.size() + s] = membership.week(*m.day).value;
        ++table.entries_;
        if (m.accumulated - p.required_gdu > scenarios[s].at(plant)) ++table.literal_violations_;
      }
    }
    table.rows_.push_back(std::move(row));
  }
  return table;
}

}  // namespace plantsched::harvest
