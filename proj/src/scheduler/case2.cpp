#include <fmt/format.h>

#include "heuristic.hpp"
#include "plantsched/errors.hpp"
#include "plantsched/scheduler/solvers.hpp"
#include "problem.hpp"

namespace plantsched::sched {
namespace {

Engine resolve(Engine engine, const harvest::HarvestTable& table, std::span<const SeedPopulation> populations,
               std::optional<WindowLimit> window, double exact_limit) {
  if (engine != Engine::Auto) return engine;
  return search_space_size(table, populations, window) <= exact_limit ? Engine::Exact : Engine::Heuristic;
}

}  // namespace

PlantingSchedule solve_case1(const harvest::HarvestTable& table, std::span<const SeedPopulation> populations,
                             std::span<const double> probabilities, std::int64_t capacity,
                             std::optional<WindowLimit> window, Engine engine, const ExactConfig& exact,
                             const HeuristicConfig& heuristic, double exact_limit) {
  if (resolve(engine, table, populations, window, exact_limit) == Engine::Exact) {
    return solve_case1_exact(table, populations, probabilities, capacity, window, exact);
  }
  return solve_case1_heuristic(table, populations, probabilities, capacity, window, heuristic);
}

Case2Result solve_case2(const harvest::HarvestTable& table, std::span<const SeedPopulation> populations,
                        std::span<const double> probabilities, std::optional<WindowLimit> window, Engine engine,
                        const ExactConfig& exact, const HeuristicConfig& heuristic, double exact_limit) {
  const auto chosen = resolve(engine, table, populations, window, exact_limit);
  const auto problem = detail::build_problem(table, populations, probabilities, window);

  auto feasible = [&](std::int64_t z) {
    if (chosen == Engine::Exact) return find_feasible_exact(table, populations, z, problem.window, exact).has_value();
    return detail::run_heuristic(problem, z, heuristic, false).feasible;
  };

  // any usable assignment fits under the total quantity
  std::int64_t lo = problem.max_quantity();
  std::int64_t hi = problem.total_quantity();
  while (lo < hi) {
    const auto mid = lo + (hi - lo) / 2;
    if (feasible(mid)) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }

  Case2Result out;
  out.min_capacity = lo;
  out.proven_optimal = chosen == Engine::Exact;
  out.schedule = chosen == Engine::Exact
                     ? solve_case1_exact(table, populations, probabilities, lo, problem.window, exact)
                     : solve_case1_heuristic(table, populations, probabilities, lo, problem.window, heuristic);
  // heuristic mode reports the bound it actually achieved
  if (!out.proven_optimal) out.min_capacity = out.schedule.max_capacity_used;
  return out;
}

}  // namespace plantsched::sched
