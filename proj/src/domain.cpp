#include "plantsched/domain.hpp"

#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "plantsched/errors.hpp"

namespace plantsched {

SeedPopulation validate_population(const RawPopulation& raw) {
  std::vector<std::string> issues;
  const auto label = raw.id.empty() ? std::string("<unnamed>") : raw.id;
  if (raw.id.empty()) issues.emplace_back("population id is empty");
  if (raw.site < 0 || raw.site > std::numeric_limits<std::int32_t>::max()) {
    issues.push_back(fmt::format("population {}: site {} must be a non-negative integer", label, raw.site));
  }
  const auto lo = static_cast<std::int64_t>(min_supported_day().value);
  const auto hi = static_cast<std::int64_t>(max_supported_day().value);
  for (const auto d : {raw.earliest_plant, raw.latest_plant}) {
    if (d < lo || d > hi) {
      issues.push_back(fmt::format("population {}: planting day {} outside supported calendar range", label, d));
    }
  }
  if (raw.earliest_plant > raw.latest_plant) {
    issues.push_back(fmt::format("population {}: window inverted (earliest {} > latest {})", label,
                                 raw.earliest_plant, raw.latest_plant));
  }
  if (!std::isfinite(raw.required_gdu) || raw.required_gdu < 0.0) {
    issues.push_back(fmt::format("population {}: required GDU {} must be finite and non-negative", label,
                                 raw.required_gdu));
  }
  if (raw.harvest_quantity < 1) {
    issues.push_back(fmt::format("population {}: harvest quantity {} must be positive", label, raw.harvest_quantity));
  }
  if (!issues.empty()) throw ValidationError(std::move(issues));

  return SeedPopulation{raw.id,
                        SiteId{static_cast<std::int32_t>(raw.site)},
                        DayIndex{static_cast<std::int32_t>(raw.earliest_plant)},
                        DayIndex{static_cast<std::int32_t>(raw.latest_plant)},
                        raw.required_gdu,
                        raw.harvest_quantity};
}

std::optional<SiteCapacity> default_capacity(SiteId site) {
  if (site.value == 0) return SiteCapacity{site, 7500};
  if (site.value == 1) return SiteCapacity{site, 6000};
  return std::nullopt;
}

DailyGduSeries DailyGduSeries::slice(DayIndex first, DayIndex last) const {
  if (first > last || !covers(first) || !covers(last)) {
    throw RangeError(fmt::format("slice [{}, {}] outside series [{}, {}]", first.value, last.value, start_day.value,
                                 end_day().value));
  }
  const auto b = values.begin() + (first - start_day);
  return DailyGduSeries{site, first, std::vector<double>(b, b + (last - first + 1))};
}

}  // namespace plantsched
