#include "problem.hpp"

#include <algorithm>
#include <map>

#include <fmt/format.h>

#include "plantsched/errors.hpp"
#include "plantsched/scheduler/solvers.hpp"

namespace plantsched::sched {
namespace detail {
namespace {

void check_inputs(const harvest::HarvestTable& table, std::span<const SeedPopulation> populations) {
  if (populations.size() != table.population_count()) {
    throw ValidationError(fmt::format("{} populations but the harvest table has {}", populations.size(),
                                      table.population_count()));
  }
  if (populations.empty()) throw ValidationError("no populations to schedule");
  for (std::size_t i = 0; i < populations.size(); ++i) {
    if (populations[i].earliest_plant != table.earliest(i) || populations[i].latest_plant != table.latest(i) ||
        populations[i].harvest_quantity != table.quantity(i)) {
      throw ValidationError(fmt::format("population {} does not match its harvest table row", populations[i].id));
    }
  }
}

}  // namespace

std::int64_t Problem::total_quantity() const {
  std::int64_t s = 0;
  for (const auto q : quantity) s += q;
  return s;
}

std::int64_t Problem::max_quantity() const { return *std::max_element(quantity.begin(), quantity.end()); }

Problem build_problem(const harvest::HarvestTable& table, std::span<const SeedPopulation> populations,
                      std::span<const double> probabilities, std::optional<WindowLimit> window) {
  check_inputs(table, populations);
  if (probabilities.size() != table.scenario_count()) {
    throw ValidationError(fmt::format("{} probabilities for {} scenarios", probabilities.size(),
                                      table.scenario_count()));
  }
  const WindowLimit win = window ? *window : full_window(table, populations);
  win.validate();

  Problem p;
  p.window = win;
  p.weeks = win.width();
  p.scenarios = table.scenario_count();
  p.probabilities.assign(probabilities.begin(), probabilities.end());
  p.quantity.reserve(populations.size());
  p.options.resize(populations.size());

  for (std::size_t i = 0; i < populations.size(); ++i) {
    p.quantity.push_back(table.quantity(i));
    std::map<std::vector<std::int32_t>, DayIndex> seen;
    for (DayIndex d = table.earliest(i); d <= table.latest(i); d = d + 1) {
      std::vector<std::int32_t> weeks;
      weeks.reserve(p.scenarios);
      bool usable = true;
      for (std::size_t s = 0; s < p.scenarios && usable; ++s) {
        const auto w = table.week(i, d, s);
        usable = w && win.contains(*w);
        if (usable) weeks.push_back(w->value - win.first_week.value);
      }
      if (usable) seen.emplace(std::move(weeks), d);  // keeps the earliest day per pattern
    }
    if (seen.empty()) {
      throw InfeasibleError(fmt::format("population {} has no planting day harvestable inside weeks [{}, {}] in "
                                        "every scenario",
                                        populations[i].id, win.first_week.value, win.last_week.value));
    }
    auto& opts = p.options[i];
    for (auto& [weeks, day] : seen) opts.push_back(Option{day, weeks});
    std::sort(opts.begin(), opts.end(), [](const Option& a, const Option& b) { return a.day < b.day; });
  }
  return p;
}

std::vector<std::int64_t> loads_of(const Problem& problem, std::span<const int> choice) {
  std::vector<std::int64_t> loads(problem.scenarios * static_cast<std::size_t>(problem.weeks), 0);
  for (std::size_t i = 0; i < choice.size(); ++i) {
    const auto& opt = problem.options[i][static_cast<std::size_t>(choice[i])];
    for (std::size_t s = 0; s < problem.scenarios; ++s) {
      loads[s * static_cast<std::size_t>(problem.weeks) + static_cast<std::size_t>(opt.weeks[s])] +=
          problem.quantity[i];
    }
  }
  return loads;
}

PlantingSchedule make_schedule(const harvest::HarvestTable& table, const Problem& problem,
                               std::span<const int> choice, std::int64_t capacity, const char* engine) {
  PlantingSchedule out;
  out.assignment.reserve(choice.size());
  for (std::size_t i = 0; i < choice.size(); ++i) {
    out.assignment.push_back(problem.options[i][static_cast<std::size_t>(choice[i])].day);
  }
  out.window = problem.window;
  out.capacity = capacity;
  out.profile = profile_of(table, out.assignment);
  out.objective_case1 = evaluate_case1_objective(out.profile, capacity, problem.probabilities, problem.window).value;
  out.pairwise_objective = evaluate_pairwise_objective(out.profile, problem.probabilities, problem.window);
  out.max_capacity_used = out.profile.max_load();
  out.engine = engine;
  return out;
}

}  // namespace detail

WindowLimit full_window(const harvest::HarvestTable& table, std::span<const SeedPopulation> populations) {
  detail::check_inputs(table, populations);
  std::optional<std::int32_t> lo;
  std::optional<std::int32_t> hi;
  for (std::size_t i = 0; i < table.population_count(); ++i) {
    for (DayIndex d = table.earliest(i); d <= table.latest(i); d = d + 1) {
      if (!table.admissible(i, d)) continue;
      for (std::size_t s = 0; s < table.scenario_count(); ++s) {
        const auto w = table.week(i, d, s)->value;
        lo = lo ? std::min(*lo, w) : w;
        hi = hi ? std::max(*hi, w) : w;
      }
    }
  }
  if (!lo) throw InfeasibleError("no population has a planting day harvestable in every scenario");
  return WindowLimit{WeekIndex{*lo}, WeekIndex{*hi}};
}

double search_space_size(const harvest::HarvestTable& table, std::span<const SeedPopulation> populations,
                         std::optional<WindowLimit> window) {
  const auto p = detail::build_problem(table, populations, uniform_probabilities(table.scenario_count()), window);
  double size = 1.0;
  for (const auto& o : p.options) size *= static_cast<double>(o.size());
  return size;
}

}  // namespace plantsched::sched
