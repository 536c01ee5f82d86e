#include <doctest.h>

#include <cmath>
#include <numeric>
#include <sstream>

#include <fmt/format.h>

#include "plantsched/errors.hpp"
#include "plantsched/ingest.hpp"

using namespace plantsched;

namespace {

std::string history_csv(DayIndex first, DayIndex last, SiteId site = SiteId{0}) {
  std::string s = "site,date,gdu\n";
  for (auto d = first; d <= last; d = d + 1) s += fmt::format("{},{},{}\n", site.value, format_iso_date(d), 10.5);
  return s;
}

}  // namespace

TEST_SUITE("ingest") {
  TEST_CASE("eleven years of daily history") {
    std::istringstream in(history_csv(parse_iso_date("2009-01-01"), parse_iso_date("2019-12-31")));
    const auto series = parse_gdu_history(in);
    REQUIRE(series.size() == 1);
    CHECK(series[0].size() == 4017);
    CHECK(series[0].start_day == parse_iso_date("2009-01-01"));
    CHECK(series[0].end_day().value == -1);
  }

  TEST_CASE("gaps and empty files are reported") {
    std::istringstream gap("site,date,gdu\n0,2019-01-01,1\n0,2019-01-03,1\n");
    try {
      parse_gdu_history(gap);
      FAIL("expected a validation error");
    } catch (const ValidationError& e) {
      CHECK(std::string(e.what()).find("2019-01-02") != std::string::npos);
    }
    std::istringstream empty("site,date,gdu\n");
    CHECK_THROWS_WITH_AS(parse_gdu_history(empty), doctest::Contains("no rows"), ValidationError);
    std::istringstream negative("site,date,gdu\n0,2019-01-01,-1\n");
    CHECK_THROWS_AS(parse_gdu_history(negative), ParseError);
  }

  TEST_CASE("sites are split and sorted") {
    std::istringstream in(history_csv(DayIndex{-3}, DayIndex{-1}, SiteId{1}) + "0,2019-12-31,4\n");
    const auto series = parse_gdu_history(in);
    REQUIRE(series.size() == 2);
    CHECK(series[0].site.value == 0);
    CHECK(series[0].size() == 1);
    CHECK(series[1].site.value == 1);
    CHECK(series[1].size() == 3);
  }

  TEST_CASE("integer planting indices count from the epoch") {
    std::istringstream in(
        "id,site,early_plant,late_plant,required_gdu,quantity\n"
        "a,0,1,10,900,250\n"
        "b,1,30,34,1000,10\n");
    CsvOptions options;
    options.epoch = parse_iso_date("2020-02-01");
    const auto pops = parse_populations(in, options);
    REQUIRE(pops.size() == 2);
    CHECK(pops[0].earliest_plant == parse_iso_date("2020-02-01"));
    CHECK(pops[0].latest_plant == parse_iso_date("2020-02-10"));
    CHECK(pops[1].earliest_plant == parse_iso_date("2020-03-01"));
    CHECK(pops[1].window_width() == 5);

    std::istringstream mixed(
        "id,site,early_plant,late_plant,required_gdu,quantity\n"
        "a,0,2020-03-01,40,900,250\n");
    const auto m = parse_populations(mixed, options);
    CHECK(m[0].earliest_plant == parse_iso_date("2020-03-01"));
    CHECK(m[0].latest_plant == parse_iso_date("2020-03-11"));
  }

  TEST_CASE("header renames") {
    std::istringstream in("name,site,from,to,gdu,ears\nx,0,1,1,5,3\n");
    CsvOptions options;
    options.header_map = {{"name", "id"}, {"from", "early_plant"}, {"to", "late_plant"},
                          {"gdu", "required_gdu"}, {"ears", "quantity"}};
    const auto pops = parse_populations(in, options);
    REQUIRE(pops.size() == 1);
    CHECK(pops[0].id == "x");
    CHECK(pops[0].harvest_quantity == 3);
  }

  TEST_CASE("population invariants are all reported") {
    RawPopulation raw{"p", 0, 10, 5, -1.0, 0};
    try {
      validate_population(raw);
      FAIL("expected a validation error");
    } catch (const ValidationError& e) {
      CHECK(e.issues().size() == 3);
    }
  }

  TEST_CASE("write/read round trip") {
    auto spec = synthetic_case1_spec();
    spec.population_count = 40;
    spec.history_first_year = 2018;
    spec.rng_seed = 3;
    const auto inst = generate_synthetic_instance(spec);
    std::stringstream pops_io;
    write_populations(pops_io, inst.populations);
    CHECK(parse_populations(pops_io) == inst.populations);
    std::stringstream hist_io;
    const std::vector<DailyGduSeries> one{inst.history};
    write_gdu_history(hist_io, one);
    const auto back = parse_gdu_history(hist_io);
    REQUIRE(back.size() == 1);
    CHECK(back[0] == inst.history);
  }

  TEST_CASE("synthetic generator") {
    auto spec = synthetic_case1_spec();
    spec.population_count = 1000;
    spec.rng_seed = 7;
    const auto a = generate_synthetic_instance(spec);
    const auto b = generate_synthetic_instance(spec);
    CHECK(a.history == b.history);
    CHECK(a.populations == b.populations);
    CHECK(a.history.size() == 4017);
    double sum = 0;
    for (const auto& p : a.populations) {
      sum += static_cast<double>(p.harvest_quantity);
      CHECK(p.harvest_quantity >= 1);
      CHECK(p.window_width() >= spec.window_width_min);
      CHECK(p.window_width() <= spec.window_width_max);
    }
    CHECK(sum / 1000.0 == doctest::Approx(250.0).epsilon(15.0 / 250.0));
    for (double v : a.history.values) CHECK(v >= 0.0);

    spec.quantity_sd = 0.0;
    const auto flat = generate_synthetic_instance(spec);
    for (const auto& p : flat.populations) CHECK(p.harvest_quantity == 250);

    spec.window_width_min = 0;
    CHECK_THROWS_AS(generate_synthetic_instance(spec), ValidationError);
  }
}
