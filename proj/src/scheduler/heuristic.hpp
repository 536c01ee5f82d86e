#pragma once

#include <vector>

#include "plantsched/scheduler/solvers.hpp"
#include "problem.hpp"

namespace plantsched::sched::detail {

struct HeuristicOutcome {
  bool feasible{false};
  std::vector<int> choice;
  std::vector<int> binding_weeks;  // from the attempt with the least overload, when infeasible
};

/// Construction + repair, then (if `improve`) local search; keeps the best of all restarts.
HeuristicOutcome run_heuristic(const Problem& problem, std::int64_t capacity, const HeuristicConfig& config,
                               bool improve);

}  // namespace plantsched::sched::detail
