#include "plantsched/scheduler/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

#include <fmt/format.h>

#include "plantsched/errors.hpp"

namespace plantsched::sched {

SweepConfig default_sweep_config(const PlantingSchedule& unconstrained, WindowLimit bounds, std::int32_t radius) {
  const auto span = unconstrained.profile.harvest_span().value_or(bounds);
  auto clip = [&](std::int32_t w) { return WeekIndex{std::clamp(w, bounds.first_week.value, bounds.last_week.value)}; };
  SweepConfig c;
  c.first_min = clip(span.first_week.value - radius);
  c.first_max = clip(span.first_week.value + radius);
  c.last_min = clip(span.last_week.value - radius);
  c.last_max = clip(span.last_week.value + radius);
  return c;
}

std::string_view to_string(CellStatus status) {
  switch (status) {
    case CellStatus::Solved: return "solved";
    case CellStatus::Infeasible: return "infeasible";
    case CellStatus::Budget: return "budget";
  }
  return "unknown";
}

SweepResult sweep_harvest_windows(const harvest::HarvestTable& table, std::span<const SeedPopulation> populations,
                                  std::span<const double> probabilities, std::int64_t capacity,
                                  const SweepConfig& config) {
  if (config.first_min > config.first_max || config.last_min > config.last_max) {
    throw ValidationError("sweep ranges must be non-empty");
  }
  std::vector<SweepCell> grid;
  for (auto f = config.first_min.value; f <= config.first_max.value; ++f) {
    for (auto l = std::max(f, config.last_min.value); l <= config.last_max.value; ++l) {
      grid.push_back(SweepCell{WindowLimit{WeekIndex{f}, WeekIndex{l}}});
    }
  }
  if (grid.empty()) throw ValidationError("sweep ranges contain no window with first <= last");

  std::vector<std::optional<PlantingSchedule>> schedules(grid.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < grid.size(); k = next++) {
      auto& cell = grid[k];
      try {
        auto s = solve_case1(table, populations, probabilities, capacity, cell.window, config.engine, config.exact,
                             config.heuristic, config.exact_limit);
        cell.status = CellStatus::Solved;
        cell.pairwise = s.pairwise_objective;
        cell.case1 = s.objective_case1;
        schedules[k] = std::move(s);
      } catch (const InfeasibleError&) {
        cell.status = CellStatus::Infeasible;
      } catch (const BudgetError&) {
        cell.status = CellStatus::Budget;
      }
    }
  };
  const auto threads = std::clamp<std::size_t>(config.threads, 1, grid.size());
  {
    std::vector<std::jthread> pool;
    for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
  }

  std::optional<std::size_t> best;
  bool any_budget = false;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    any_budget = any_budget || grid[k].status == CellStatus::Budget;
    if (grid[k].status != CellStatus::Solved) continue;
    if (!best || grid[k].pairwise < grid[*best].pairwise ||
        (grid[k].pairwise == grid[*best].pairwise && grid[k].case1 < grid[*best].case1)) {
      best = k;
    }
  }
  if (!best) {
    if (any_budget) throw BudgetError("every feasible sweep cell exhausted the search budget");
    throw InfeasibleError(fmt::format("no harvest window in the sweep admits a schedule under capacity {}", capacity));
  }
  return SweepResult{grid[*best].window, std::move(*schedules[*best]), std::move(grid)};
}

void write_sweep_csv(std::ostream& out, std::span<const SweepCell> grid) {
  out << "first_week,last_week,eq6_value,status\n";
  for (const auto& c : grid) {
    out << fmt::format("{},{},{},{}\n", c.window.first_week.value, c.window.last_week.value,
                       c.status == CellStatus::Solved ? fmt::format("{}", c.pairwise) : std::string{}, to_string(c.status));
  }
}

}  // namespace plantsched::sched
