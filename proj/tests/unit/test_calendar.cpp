#include <doctest.h>

#include "oracles.hpp"
#include "plantsched/calendar.hpp"
#include "plantsched/errors.hpp"

using namespace plantsched;

TEST_SUITE("calendar") {
  TEST_CASE("week boundaries fall on Sundays") {
    CHECK(week_of(parse_iso_date("2019-12-29")).value == 1);
    CHECK(week_of(parse_iso_date("2020-01-01")).value == 1);
    CHECK(week_of(parse_iso_date("2020-01-04")).value == 1);
    CHECK(week_of(parse_iso_date("2020-01-05")).value == 2);
    CHECK(week_of(parse_iso_date("2020-01-12")).value == 3);
    CHECK(week_of(parse_iso_date("2019-12-28")).value == 0);
    CHECK(week_of(parse_iso_date("2019-12-21")).value == -1);
  }

  TEST_CASE("week_of agrees with weekday arithmetic over the supported range") {
    for (auto d = min_supported_day(); d <= max_supported_day(); d = d + 1) {
      REQUIRE(week_of(d).value == oracle::naive_week(d));
    }
  }

  TEST_CASE("iso dates round-trip") {
    CHECK(parse_iso_date("2020-01-01").value == 0);
    CHECK(parse_iso_date("2019-12-31").value == -1);
    CHECK(parse_iso_date("2021-12-31").value == 730);
    for (auto d = min_supported_day(); d <= max_supported_day(); d = d + 97) {
      CHECK(parse_iso_date(format_iso_date(d)) == d);
    }
    CHECK_THROWS_AS(parse_iso_date("2020-02-30"), ValidationError);
    CHECK_THROWS_AS(day_from_civil(2021, 2, 29), RangeError);
    CHECK_THROWS_AS(parse_iso_date("2020/01/01"), ValidationError);
  }

  TEST_CASE("out-of-range days are rejected") {
    CHECK_THROWS_AS(week_of(min_supported_day() - 1), RangeError);
    CHECK_THROWS_AS(week_of(max_supported_day() + 1), RangeError);
  }

  TEST_CASE("membership indicator is one-hot per day") {
    const auto m = WeekMembership::planning_horizon();
    CHECK(m.first_week().value == 1);
    CHECK(m.last_week().value == week_of(DayIndex{729}).value);
    for (std::int32_t d = 0; d < kHorizonDays; d += 13) {
      int hits = 0;
      for (auto w = m.first_week().value; w <= m.last_week().value; ++w) hits += m.member(WeekIndex{w}, DayIndex{d});
      CHECK(hits == 1);
    }
    CHECK_THROWS_AS(m.week(DayIndex{730}), RangeError);
  }
}
