#pragma once

#include <optional>
#include <ostream>
#include <span>
#include <string_view>
#include <vector>

#include "plantsched/scheduler/solvers.hpp"

namespace plantsched::sched {

struct SweepConfig {
  // inclusive ranges of the window's first and last week; cells with first > last are skipped
  WeekIndex first_min, first_max;
  WeekIndex last_min, last_max;
  Engine engine{Engine::Auto};
  ExactConfig exact;
  HeuristicConfig heuristic;
  double exact_limit{1e7};
  unsigned threads{1};
};

/// Ranges of +-`radius` weeks around the first and last harvest weeks of `unconstrained`,
/// clipped to `bounds`.
SweepConfig default_sweep_config(const PlantingSchedule& unconstrained, WindowLimit bounds, std::int32_t radius = 8);

enum class CellStatus { Solved, Infeasible, Budget };
std::string_view to_string(CellStatus status);

struct SweepCell {
  WindowLimit window;
  CellStatus status{CellStatus::Infeasible};
  double pairwise{0.0};
  double case1{0.0};
};

struct SweepResult {
  WindowLimit best_window;
  PlantingSchedule schedule;
  std::vector<SweepCell> grid;  // first-week major, then last week ascending
};

/// Solves case 1 for every cell and keeps the one with the smallest pairwise objective (ties: the
/// smaller case-1 value, then grid order). Result does not depend on `threads`.
/// Throws InfeasibleError when no cell is solvable, BudgetError when every solvable attempt ran
/// out of budget.
SweepResult sweep_harvest_windows(const harvest::HarvestTable& table, std::span<const SeedPopulation> populations,
                                  std::span<const double> probabilities, std::int64_t capacity,
                                  const SweepConfig& config);

/// `first_week,last_week,eq6_value,status`; eq6_value is empty unless solved.
void write_sweep_csv(std::ostream& out, std::span<const SweepCell> grid);

}  // namespace plantsched::sched
