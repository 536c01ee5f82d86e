#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "plantsched/domain.hpp"
#include "plantsched/harvest_map.hpp"
#include "plantsched/scheduler/profile.hpp"

namespace plantsched::sched {

// A planting day is usable for a population only if it is harvestable in every scenario and
// every scenario's harvest week falls inside the harvest window. Without an explicit window the
// span of all usable harvest weeks is used.

struct ExactConfig {
  std::uint64_t node_budget{10'000'000};
};

struct HeuristicConfig {
  std::uint64_t seed{1};
  /// Candidate evaluations allowed during repair and improvement.
  std::uint64_t iterations{2'000'000};
  /// Extra randomized constructions; the best result is kept.
  int restarts{3};
};

enum class Engine { Auto, Exact, Heuristic };

/// Optimal schedule for the capacitated consistency objective. Ties are broken by the pairwise
/// objective, then by the lexicographically smallest assignment. Throws InfeasibleError or
/// BudgetError.
PlantingSchedule solve_case1_exact(const harvest::HarvestTable& table, std::span<const SeedPopulation> populations,
                                   std::span<const double> probabilities, std::int64_t capacity,
                                   std::optional<WindowLimit> window, const ExactConfig& config = {});

/// Greedy construction plus first-improvement local search (single-day moves and pairwise
/// exchanges of harvest slots). Deterministic for a fixed seed. Throws InfeasibleError listing
/// the weeks still over capacity when repair fails.
PlantingSchedule solve_case1_heuristic(const harvest::HarvestTable& table,
                                       std::span<const SeedPopulation> populations,
                                       std::span<const double> probabilities, std::int64_t capacity,
                                       std::optional<WindowLimit> window, const HeuristicConfig& config = {});

/// Auto picks exact when the product of distinct option counts is at most `exact_limit`.
PlantingSchedule solve_case1(const harvest::HarvestTable& table, std::span<const SeedPopulation> populations,
                             std::span<const double> probabilities, std::int64_t capacity,
                             std::optional<WindowLimit> window, Engine engine, const ExactConfig& exact = {},
                             const HeuristicConfig& heuristic = {}, double exact_limit = 1e7);

/// Any assignment keeping every weekly load at or below `capacity`, found by exhaustive search.
/// Nothing when none exists. Throws BudgetError.
std::optional<std::vector<DayIndex>> find_feasible_exact(const harvest::HarvestTable& table,
                                                         std::span<const SeedPopulation> populations,
                                                         std::int64_t capacity, std::optional<WindowLimit> window,
                                                         const ExactConfig& config = {});

/// Product of the distinct-option counts of all populations (search-space size).
double search_space_size(const harvest::HarvestTable& table, std::span<const SeedPopulation> populations,
                         std::optional<WindowLimit> window);

/// Harvest window spanning every usable harvest week of every population.
WindowLimit full_window(const harvest::HarvestTable& table, std::span<const SeedPopulation> populations);

struct Case2Result {
  std::int64_t min_capacity{0};  // z*
  bool proven_optimal{false};    // exact engine
  PlantingSchedule schedule;     // case-1 schedule at capacity z*
};

/// Minimum weekly capacity by binary search over [max quantity, total quantity] using the
/// capacity-feasibility engine, followed by a case-1 solve at that capacity.
Case2Result solve_case2(const harvest::HarvestTable& table, std::span<const SeedPopulation> populations,
                        std::span<const double> probabilities, std::optional<WindowLimit> window, Engine engine,
                        const ExactConfig& exact = {}, const HeuristicConfig& heuristic = {},
                        double exact_limit = 1e7);

}  // namespace plantsched::sched
