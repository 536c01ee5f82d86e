#include "plantsched/calendar.hpp"

#include <charconv>
#include <chrono>

#include <fmt/format.h>

#include "plantsched/errors.hpp"

namespace plantsched {
namespace {

namespace chr = std::chrono;

constexpr chr::sys_days kEpoch = chr::year{2020} / chr::January / 1;
// 2019-12-29 is the Sunday that opens week 1.
constexpr std::int32_t kWeekOneStart = -3;

chr::sys_days to_sys(DayIndex d) { return kEpoch + chr::days{d.value}; }

unsigned parse_unsigned(std::string_view text, std::string_view whole) {
  unsigned v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    throw ValidationError(fmt::format("invalid date '{}'", whole));
  }
  return v;
}

}  // namespace

DayIndex day_from_civil(int year, unsigned month, unsigned day) {
  const chr::year_month_day ymd{chr::year{year}, chr::month{month}, chr::day{day}};
  if (!ymd.ok()) {
    throw RangeError(fmt::format("invalid date {:04}-{:02}-{:02}", year, month, day));
  }
  const DayIndex out{static_cast<std::int32_t>((chr::sys_days{ymd} - kEpoch).count())};
  if (out < min_supported_day() || out > max_supported_day()) {
    throw RangeError(fmt::format("date {:04}-{:02}-{:02} outside supported calendar range", year, month, day));
  }
  return out;
}

DayIndex min_supported_day() {
  return DayIndex{static_cast<std::int32_t>((chr::sys_days{chr::year{2000} / chr::January / 1} - kEpoch).count())};
}

DayIndex max_supported_day() {
  return DayIndex{static_cast<std::int32_t>((chr::sys_days{chr::year{2040} / chr::December / 31} - kEpoch).count())};
}

WeekIndex week_of(DayIndex day) {
  if (day < min_supported_day() || day > max_supported_day()) {
    throw RangeError(fmt::format("day {} outside supported calendar range", day.value));
  }
  const std::int32_t offset = day.value - kWeekOneStart;
  // floor division; offset is negative for days before week 1
  const std::int32_t q = offset >= 0 ? offset / 7 : -((-offset + 6) / 7);
  return WeekIndex{q + 1};
}

DayIndex parse_iso_date(std::string_view text) {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') {
    throw ValidationError(fmt::format("invalid date '{}' (expected YYYY-MM-DD)", text));
  }
  const auto y = parse_unsigned(text.substr(0, 4), text);
  const auto m = parse_unsigned(text.substr(5, 2), text);
  const auto d = parse_unsigned(text.substr(8, 2), text);
  return day_from_civil(static_cast<int>(y), m, d);
}

std::string format_iso_date(DayIndex day) {
  const chr::year_month_day ymd{to_sys(day)};
  return fmt::format("{:04}-{:02}-{:02}", static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                     static_cast<unsigned>(ymd.day()));
}

WeekMembership::WeekMembership(DayIndex first_day, std::int32_t length) : first_day_(first_day) {
  if (length < 1) throw ValidationError("week membership table needs at least one day");
  weeks_.reserve(static_cast<std::size_t>(length));
  for (std::int32_t k = 0; k < length; ++k) weeks_.push_back(week_of(first_day + k).value);
}

WeekIndex WeekMembership::week(DayIndex day) const {
  if (!contains(day)) {
    throw RangeError(fmt::format("day {} outside week table [{}, {}]", day.value, first_day_.value, last_day().value));
  }
  return WeekIndex{weeks_[static_cast<std::size_t>(day - first_day_)]};
}

}  // namespace plantsched
