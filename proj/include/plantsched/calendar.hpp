#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace plantsched {

/// Days since the calendar epoch 2020-01-01 (day 0). Negative for history.
struct DayIndex {
  std::int32_t value{0};

  friend constexpr auto operator<=>(DayIndex, DayIndex) = default;
  friend constexpr DayIndex operator+(DayIndex d, std::int32_t n) { return DayIndex{d.value + n}; }
  friend constexpr DayIndex operator-(DayIndex d, std::int32_t n) { return DayIndex{d.value - n}; }
  friend constexpr std::int32_t operator-(DayIndex a, DayIndex b) { return a.value - b.value; }
};

/// 1-based Sunday-Saturday week. Week 1 is 2019-12-29 .. 2020-01-04; earlier days get
/// week numbers <= 0.
struct WeekIndex {
  std::int32_t value{1};

  friend constexpr auto operator<=>(WeekIndex, WeekIndex) = default;
};

/// Planning horizon length in days (two years from the epoch).
inline constexpr std::int32_t kHorizonDays = 730;

/// Supported calendar range, inclusive: 2000-01-01 .. 2040-12-31.
DayIndex min_supported_day();
DayIndex max_supported_day();

/// Throws RangeError outside the supported range.
WeekIndex week_of(DayIndex day);

/// Converts between ISO dates ("2020-01-01") and day indices.
DayIndex parse_iso_date(std::string_view text);
std::string format_iso_date(DayIndex day);

/// Day index of a civil date; throws RangeError for invalid dates.
DayIndex day_from_civil(int year, unsigned month, unsigned day);

/// Dense day -> week table over [first_day, first_day + length).
class WeekMembership {
 public:
  WeekMembership(DayIndex first_day, std::int32_t length);

  /// Default planning horizon: kHorizonDays starting at day 0.
  static WeekMembership planning_horizon() { return {DayIndex{0}, kHorizonDays}; }

  DayIndex first_day() const noexcept { return first_day_; }
  DayIndex last_day() const noexcept { return first_day_ + (static_cast<std::int32_t>(weeks_.size()) - 1); }
  bool contains(DayIndex day) const noexcept { return day >= first_day_ && day <= last_day(); }

  /// Throws RangeError for days outside the table.
  WeekIndex week(DayIndex day) const;
  /// The binary indicator: does `day` belong to `week`?
  bool member(WeekIndex week, DayIndex day) const { return this->week(day) == week; }

  WeekIndex first_week() const noexcept { return WeekIndex{weeks_.front()}; }
  WeekIndex last_week() const noexcept { return WeekIndex{weeks_.back()}; }

 private:
  DayIndex first_day_;
  std::vector<std::int32_t> weeks_;
};

}  // namespace plantsched
