#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "plantsched/calendar.hpp"

namespace plantsched {

struct SiteId {
  std::int32_t value{0};

  friend constexpr auto operator<=>(SiteId, SiteId) = default;
};

/// One breeding lot. Construct through validate_population() so the invariants hold:
/// earliest_plant <= latest_plant, required_gdu >= 0, harvest_quantity >= 1.
struct SeedPopulation {
  std::string id;
  SiteId site;
  DayIndex earliest_plant;
  DayIndex latest_plant;
  double required_gdu{0.0};        // degC * day
  std::int64_t harvest_quantity{1};  // ears

  std::int32_t window_width() const noexcept { return latest_plant - earliest_plant + 1; }

  friend bool operator==(const SeedPopulation&, const SeedPopulation&) = default;
};

/// Unchecked population record as read from a file or built by hand.
struct RawPopulation {
  std::string id;
  std::int64_t site{0};
  std::int64_t earliest_plant{0};
  std::int64_t latest_plant{0};
  double required_gdu{0.0};
  std::int64_t harvest_quantity{0};
};

/// Returns the validated entity or throws ValidationError listing every violated invariant.
SeedPopulation validate_population(const RawPopulation& raw);

struct SiteCapacity {
  SiteId site;
  std::int64_t capacity{1};  // ears per week
};

/// Weekly capacities of the two challenge sites in the capacitated case.
std::optional<SiteCapacity> default_capacity(SiteId site);

/// Gap-free daily GDU values for one site, one value per consecutive day from start_day.
struct DailyGduSeries {
  SiteId site;
  DayIndex start_day;
  std::vector<double> values;

  std::int32_t size() const noexcept { return static_cast<std::int32_t>(values.size()); }
  DayIndex end_day() const noexcept { return start_day + (size() - 1); }
  bool covers(DayIndex d) const noexcept { return !values.empty() && d >= start_day && d <= end_day(); }
  double at(DayIndex d) const { return values.at(static_cast<std::size_t>(d - start_day)); }

  /// Sub-series over [first, last], both inclusive and inside the series.
  DailyGduSeries slice(DayIndex first, DayIndex last) const;

  friend bool operator==(const DailyGduSeries&, const DailyGduSeries&) = default;
};

}  // namespace plantsched
