#include <doctest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "plantsched/errors.hpp"
#include "plantsched/scheduler/report.hpp"
#include "plantsched/scheduler/solvers.hpp"
#include "plantsched/scheduler/sweep.hpp"

using namespace plantsched;
using namespace plantsched::sched;

namespace {

struct Built {
  oracle::SmallInstance in;
  harvest::HarvestTable table;
  WindowLimit window;
};

Built build(std::mt19937_64& rng) {
  Built b{oracle::random_small_instance(rng), {}, {}};
  b.table = harvest::build_harvest_table(b.in.populations, b.in.scenarios, WeekMembership(DayIndex{0}, 60));
  b.window = full_window(b.table, b.in.populations);
  return b;
}

DailyGduSeries constant(double gdu, std::int32_t days) {
  return DailyGduSeries{SiteId{0}, DayIndex{0}, std::vector<double>(static_cast<std::size_t>(days), gdu)};
}

}  // namespace

TEST_SUITE("scheduler") {
  TEST_CASE("objective arithmetic") {
    HarvestProfile p(1, WeekIndex{3}, WeekIndex{4});
    p.add(0, WeekIndex{3}, 60);
    p.add(0, WeekIndex{4}, 40);
    const std::vector<double> one{1.0};
    const auto c1 = evaluate_case1_objective(p, 100, one, WindowLimit{WeekIndex{3}, WeekIndex{4}});
    CHECK(c1.value == 60.0);
    CHECK(c1.capacity_feasible);
    CHECK_FALSE(evaluate_case1_objective(p, 50, one, WindowLimit{WeekIndex{3}, WeekIndex{4}}).capacity_feasible);
    CHECK(evaluate_case1_objective(p, 100, one, WindowLimit{WeekIndex{3}, WeekIndex{5}}).value == 100.0);

    const std::vector<std::int64_t> w{10, 20, 40};
    CHECK(pairwise_spread(w) == 60);
    CHECK(WindowLimit{WeekIndex{19}, WeekIndex{67}}.width() == 49);
    CHECK_THROWS_AS((WindowLimit{WeekIndex{5}, WeekIndex{4}}.validate()), ValidationError);
    const std::vector<double> two{0.5};
    CHECK_THROWS_AS(expectation(w, two), ValidationError);
  }

  TEST_CASE("exact solver matches enumeration") {
    std::mt19937_64 rng(101);
    for (int k = 0; k < 40; ++k) {
      const auto b = build(rng);
      const auto zmin = oracle::brute_min_capacity(b.table, b.window);
      const auto cap = zmin + static_cast<std::int64_t>(rng() % 40);
      const auto brute = oracle::brute_case1(b.table, b.in.probabilities, cap, b.window);
      REQUIRE(brute.feasible);
      const auto s = solve_case1_exact(b.table, b.in.populations, b.in.probabilities, cap, b.window);
      CHECK(s.objective_case1 == brute.objective);
      CHECK(s.max_capacity_used <= cap);
      CHECK(s.engine == "exact");
      CHECK_THROWS_AS(solve_case1_exact(b.table, b.in.populations, b.in.probabilities, zmin - 1, b.window),
                      InfeasibleError);
    }
  }

  TEST_CASE("heuristic is deterministic and feasible") {
    std::mt19937_64 rng(7);
    for (int k = 0; k < 20; ++k) {
      const auto b = build(rng);
      const auto cap = oracle::brute_min_capacity(b.table, b.window) + 30;
      HeuristicConfig hc;
      hc.seed = 3;
      const auto x = solve_case1_heuristic(b.table, b.in.populations, b.in.probabilities, cap, b.window, hc);
      const auto y = solve_case1_heuristic(b.table, b.in.populations, b.in.probabilities, cap, b.window, hc);
      CHECK(x.assignment == y.assignment);
      CHECK(x.max_capacity_used <= cap);
      CHECK(x.engine == "heuristic");
    }
  }

  TEST_CASE("minimum capacity") {
    // two lots of 10 that can share a week or split across two
    const std::vector<SeedPopulation> pops{validate_population({"a", 0, 0, 7, 30.0, 10}),
                                           validate_population({"b", 0, 0, 7, 30.0, 10})};
    const std::vector<DailyGduSeries> scen{constant(10.0, 40)};
    const auto table = harvest::build_harvest_table(pops, scen, WeekMembership(DayIndex{0}, 40));
    const auto probs = uniform_probabilities(1);
    const auto r = solve_case2(table, pops, probs, std::nullopt, Engine::Exact);
    CHECK(r.min_capacity == 10);
    CHECK(r.proven_optimal);
    CHECK(r.schedule.max_capacity_used == 10);

    std::mt19937_64 rng(55);
    for (int k = 0; k < 30; ++k) {
      const auto b = build(rng);
      const auto z = solve_case2(b.table, b.in.populations, b.in.probabilities, b.window, Engine::Exact);
      CHECK(z.min_capacity == oracle::brute_min_capacity(b.table, b.window));
      bool was_feasible = false;
      for (auto c = z.min_capacity - 3; c <= z.min_capacity + 3; ++c) {
        const bool f = find_feasible_exact(b.table, b.in.populations, c, b.window).has_value();
        CHECK(f == (c >= z.min_capacity));
        if (was_feasible) CHECK(f);
        was_feasible = f;
      }
    }
  }

  TEST_CASE("a single population") {
    const std::vector<SeedPopulation> pops{validate_population({"solo", 0, 3, 9, 40.0, 25})};
    const std::vector<DailyGduSeries> scen{constant(10.0, 30), constant(8.0, 30)};
    const auto table = harvest::build_harvest_table(pops, scen, WeekMembership(DayIndex{0}, 30));
    const auto probs = uniform_probabilities(2);
    const auto e = solve_case1(table, pops, probs, 25, std::nullopt, Engine::Auto);
    CHECK(e.engine == "exact");
    CHECK(e.max_capacity_used == 25);
    const auto h = solve_case1(table, pops, probs, 25, std::nullopt, Engine::Heuristic);
    CHECK(h.objective_case1 == e.objective_case1);
    CHECK_THROWS_AS(solve_case1(table, pops, probs, 24, std::nullopt, Engine::Heuristic), InfeasibleError);
  }

  TEST_CASE("sweep") {
    std::mt19937_64 rng(12);
    int checked = 0;
    while (checked < 10) {
      const auto b = build(rng);
      if (b.window.width() < 3) continue;
      const auto cap = oracle::brute_min_capacity(b.table, b.window) + 20;
      SweepConfig one;
      one.first_min = one.first_max = b.window.first_week;
      one.last_min = one.last_max = b.window.last_week;
      one.engine = Engine::Exact;
      const auto single = sweep_harvest_windows(b.table, b.in.populations, b.in.probabilities, cap, one);
      REQUIRE(single.grid.size() == 1);
      const auto direct = solve_case1_exact(b.table, b.in.populations, b.in.probabilities, cap, b.window);
      CHECK(single.schedule.assignment == direct.assignment);

      SweepConfig narrow = one;
      narrow.first_max = WeekIndex{b.window.first_week.value + 1};
      narrow.last_min = WeekIndex{b.window.last_week.value - 1};
      SweepConfig wide = narrow;
      wide.first_max = b.window.last_week;
      wide.last_min = b.window.first_week;
      double n_best = 1e300;
      try {
        n_best = sweep_harvest_windows(b.table, b.in.populations, b.in.probabilities, cap, narrow)
                     .schedule.pairwise_objective;
      } catch (const InfeasibleError&) {
      }
      wide.threads = 3;
      const auto w = sweep_harvest_windows(b.table, b.in.populations, b.in.probabilities, cap, wide);
      const double w_best = w.schedule.pairwise_objective;
      CHECK(w_best <= n_best);
      for (const auto& c : w.grid) CHECK(c.window.first_week <= c.window.last_week);
      wide.threads = 1;
      const auto w1 = sweep_harvest_windows(b.table, b.in.populations, b.in.probabilities, cap, wide);
      CHECK(w1.best_window == w.best_window);
      CHECK(w1.schedule.assignment == w.schedule.assignment);

      std::ostringstream csv;
      write_sweep_csv(csv, w.grid);
      CHECK(csv.str().rfind("first_week,last_week,eq6_value,status\n", 0) == 0);
      ++checked;
    }
  }

  TEST_CASE("pairwise objective ignores scenario order") {
    std::mt19937_64 rng(77);
    for (int k = 0; k < 20; ++k) {
      auto b = build(rng);
      const auto cap = oracle::brute_min_capacity(b.table, b.window) + 10;
      const auto s = solve_case1_exact(b.table, b.in.populations, b.in.probabilities, cap, b.window);
      std::vector<std::size_t> perm(b.in.scenarios.size());
      for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
      std::shuffle(perm.begin(), perm.end(), rng);
      std::vector<DailyGduSeries> scen;
      std::vector<double> probs;
      for (auto i : perm) {
        scen.push_back(b.in.scenarios[i]);
        probs.push_back(b.in.probabilities[i]);
      }
      const auto t = harvest::build_harvest_table(b.in.populations, scen, WeekMembership(DayIndex{0}, 60));
      const auto p = profile_of(t, s.assignment);
      CHECK(evaluate_pairwise_objective(p, probs, s.window) == doctest::Approx(s.pairwise_objective).epsilon(1e-12));
    }
  }

  TEST_CASE("report and schedule files") {
    const std::vector<SeedPopulation> pops{validate_population({"a", 0, 0, 2, 30.0, 7}),
                                           validate_population({"b", 0, 10, 12, 30.0, 5})};
    const std::vector<DailyGduSeries> scen{constant(10.0, 40), constant(5.0, 40)};
    const auto table = harvest::build_harvest_table(pops, scen, WeekMembership(DayIndex{0}, 40));
    const auto probs = uniform_probabilities(2);
    const std::vector<DayIndex> plan{DayIndex{0}, DayIndex{12}};
    const auto r = evaluate_schedule(plan, table, 100, probs);
    // a: days 3 / 6 -> week 1 / 2; b: days 15 / 18 -> week 3 / 4
    CHECK(r.first_week.value == 1);
    CHECK(r.last_week.value == 4);
    CHECK(r.period_weeks == 4);
    CHECK(r.max_capacity == 7);
    CHECK(r.scenarios.size() == 2);
    CHECK(r.scenarios[0].first_week.value == 1);
    CHECK(r.scenarios[1].first_week.value == 2);
    CHECK(r.case1 == doctest::Approx(100.0));
    const auto j = report_to_json(r);
    CHECK(j["harvest_period_weeks"] == 4);

    std::stringstream csv;
    write_schedule_csv(csv, pops, plan, table, probs);
    CHECK(csv.str().find("a,0,2020-01-01,1.500") != std::string::npos);
    csv.seekg(0);
    CHECK(read_schedule_csv(csv, pops) == plan);
    std::stringstream bad("population,site,plant_date,expected_harvest_week\na,0,2020-01-20,1\nb,0,2020-01-13,3.5\n");
    CHECK_THROWS_AS(read_schedule_csv(bad, pops), ValidationError);

    std::ostringstream svg;
    write_profile_svg(svg, r.profile, probs, 100, nullptr, "test");
    CHECK(svg.str().find("<svg") != std::string::npos);
  }
}
