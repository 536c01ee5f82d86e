#include <algorithm>
#include <limits>
#include <numeric>

#include <fmt/format.h>

#include "plantsched/errors.hpp"
#include "plantsched/scheduler/solvers.hpp"
#include "problem.hpp"

namespace plantsched::sched {
namespace {

using detail::Problem;

/// Depth-first search over populations in decreasing-quantity order. In optimize mode every leaf
/// that can tie or beat the incumbent is visited; in feasibility mode the first leaf ends the search.
class BranchAndBound {
 public:
  BranchAndBound(const Problem& p, std::int64_t capacity, bool optimize, std::uint64_t budget)
      : p_(p), capacity_(capacity), optimize_(optimize), budget_(budget) {
    const auto n = p.population_count();
    S_ = p.scenarios;
    W_ = static_cast<std::size_t>(p.weeks);
    order_.resize(n);
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    std::stable_sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) {
      if (p.quantity[a] != p.quantity[b]) return p.quantity[a] > p.quantity[b];
      return p.options[a].size() < p.options[b].size();
    });

    remaining_.assign(n + 1, 0);
    reach_.assign((n + 1) * S_ * W_, 0);
    for (std::size_t d = n; d-- > 0;) {
      const auto i = order_[d];
      remaining_[d] = remaining_[d + 1] + p.quantity[i];
      std::vector<char> hit(S_ * W_, 0);
      for (const auto& o : p.options[i])
        for (std::size_t s = 0; s < S_; ++s) hit[s * W_ + static_cast<std::size_t>(o.weeks[s])] = 1;
      for (std::size_t k = 0; k < S_ * W_; ++k) {
        reach_[d * S_ * W_ + k] = reach_[(d + 1) * S_ * W_ + k] + (hit[k] ? p.quantity[i] : 0);
      }
    }
    // every population harvests inside the window in every scenario, so the window minimum can
    // never exceed the average load
    average_cap_ = remaining_[0] / static_cast<std::int64_t>(W_);
    loads_.assign(S_ * W_, 0);
    scenario_load_.assign(S_, 0);
    choice_.assign(n, -1);
    slack_.resize(S_);
  }

  bool run() {
    descend(0);
    return found_;
  }

  const std::vector<int>& best_choice() const { return best_choice_; }
  std::uint64_t nodes() const { return nodes_; }

 private:
  void descend(std::size_t depth) {
    if (++nodes_ > budget_) {
      throw BudgetError(fmt::format("exact search exceeded its node budget of {}", budget_));
    }
    if (depth == order_.size()) {
      leaf();
      return;
    }
    if (!room_left(depth)) return;
    if (optimize_ && found_ && lower_bound(depth) > best_obj_) return;

    const auto i = order_[depth];
    const auto q = p_.quantity[i];
    const auto& opts = p_.options[i];
    // least-loaded placements first to find good incumbents early
    std::vector<std::pair<std::int64_t, int>> ranked;
    ranked.reserve(opts.size());
    for (std::size_t k = 0; k < opts.size(); ++k) {
      std::int64_t worst = 0;
      bool fits = true;
      for (std::size_t s = 0; s < S_ && fits; ++s) {
        const auto load = loads_[s * W_ + static_cast<std::size_t>(opts[k].weeks[s])] + q;
        fits = load <= capacity_;
        worst = std::max(worst, load);
      }
      if (fits) ranked.emplace_back(worst, static_cast<int>(k));
    }
    std::stable_sort(ranked.begin(), ranked.end());
    for (const auto& [worst, k] : ranked) {
      apply(i, k, q);
      descend(depth + 1);
      apply(i, k, -q);
      if (!optimize_ && found_) return;
    }
  }

  void apply(std::size_t i, int k, std::int64_t q) {
    const auto& o = p_.options[i][static_cast<std::size_t>(k)];
    for (std::size_t s = 0; s < S_; ++s) {
      loads_[s * W_ + static_cast<std::size_t>(o.weeks[s])] += q;
      scenario_load_[s] += q;
    }
    choice_[i] = q > 0 ? k : -1;
  }

  bool room_left(std::size_t depth) const {
    const auto free_total = capacity_ * static_cast<std::int64_t>(W_);
    for (std::size_t s = 0; s < S_; ++s) {
      if (free_total - scenario_load_[s] < remaining_[depth]) return false;
    }
    return true;
  }

  double lower_bound(std::size_t depth) {
    const auto* reach = &reach_[depth * S_ * W_];
    for (std::size_t s = 0; s < S_; ++s) {
      std::int64_t best_min = std::min(capacity_, average_cap_);
      for (std::size_t w = 0; w < W_; ++w) best_min = std::min(best_min, loads_[s * W_ + w] + reach[s * W_ + w]);
      slack_[s] = capacity_ - best_min;
    }
    return expectation(slack_, p_.probabilities);
  }

  void leaf() {
    if (!optimize_) {
      found_ = true;
      best_choice_ = choice_;
      return;
    }
    std::vector<std::int64_t> spread(S_);
    for (std::size_t s = 0; s < S_; ++s) {
      const std::span<const std::int64_t> row(&loads_[s * W_], W_);
      slack_[s] = capacity_ - *std::min_element(row.begin(), row.end());
      spread[s] = pairwise_spread(row);
    }
    const double obj = expectation(slack_, p_.probabilities);
    const double pairwise = expectation(spread, p_.probabilities);
    if (found_) {
      if (obj > best_obj_) return;
      if (obj == best_obj_) {
        if (pairwise > best_pairwise_) return;
        if (pairwise == best_pairwise_ && !lexicographically_smaller()) return;
      }
    }
    found_ = true;
    best_obj_ = obj;
    best_pairwise_ = pairwise;
    best_choice_ = choice_;
  }

  bool lexicographically_smaller() const {
    for (std::size_t i = 0; i < choice_.size(); ++i) {
      const auto a = p_.options[i][static_cast<std::size_t>(choice_[i])].day;
      const auto b = p_.options[i][static_cast<std::size_t>(best_choice_[i])].day;
      if (a != b) return a < b;
    }
    return false;
  }

  const Problem& p_;
  std::int64_t capacity_;
  bool optimize_;
  std::uint64_t budget_;
  std::size_t S_{0}, W_{0};
  std::vector<std::size_t> order_;
  std::vector<std::int64_t> remaining_;
  std::vector<std::int64_t> reach_;
  std::int64_t average_cap_{0};
  std::vector<std::int64_t> loads_;
  std::vector<std::int64_t> scenario_load_;
  std::vector<std::int64_t> slack_;
  std::vector<int> choice_;

  bool found_{false};
  double best_obj_{std::numeric_limits<double>::infinity()};
  double best_pairwise_{std::numeric_limits<double>::infinity()};
  std::vector<int> best_choice_;
  std::uint64_t nodes_{0};
};

void check_capacity(std::int64_t capacity) {
  if (capacity < 1) throw ValidationError(fmt::format("capacity {} must be positive", capacity));
}

}  // namespace

PlantingSchedule solve_case1_exact(const harvest::HarvestTable& table, std::span<const SeedPopulation> populations,
                                   std::span<const double> probabilities, std::int64_t capacity,
                                   std::optional<WindowLimit> window, const ExactConfig& config) {
  check_capacity(capacity);
  const auto problem = detail::build_problem(table, populations, probabilities, window);
  if (problem.max_quantity() > capacity) {
    throw InfeasibleError(fmt::format("capacity {} is below the largest population quantity {}", capacity,
                                      problem.max_quantity()));
  }
  BranchAndBound search(problem, capacity, true, config.node_budget);
  if (!search.run()) {
    throw InfeasibleError(fmt::format("no schedule keeps every week at or below capacity {} inside weeks [{}, {}]",
                                      capacity, problem.window.first_week.value, problem.window.last_week.value));
  }
  return detail::make_schedule(table, problem, search.best_choice(), capacity, "exact");
}

std::optional<std::vector<DayIndex>> find_feasible_exact(const harvest::HarvestTable& table,
                                                         std::span<const SeedPopulation> populations,
                                                         std::int64_t capacity, std::optional<WindowLimit> window,
                                                         const ExactConfig& config) {
  check_capacity(capacity);
  const auto problem =
      detail::build_problem(table, populations, uniform_probabilities(table.scenario_count()), window);
  if (problem.max_quantity() > capacity) return std::nullopt;
  BranchAndBound search(problem, capacity, false, config.node_budget);
  if (!search.run()) return std::nullopt;
  std::vector<DayIndex> days;
  for (std::size_t i = 0; i < problem.population_count(); ++i) {
    days.push_back(problem.options[i][static_cast<std::size_t>(search.best_choice()[i])].day);
  }
  return days;
}

}  // namespace plantsched::sched
