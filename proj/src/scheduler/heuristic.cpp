#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <random>

#include <fmt/format.h>

#include "heuristic.hpp"
#include "plantsched/errors.hpp"
#include "plantsched/scheduler/solvers.hpp"

namespace plantsched::sched::detail {
namespace {

struct Key {
  double objective{0.0};
  double spread{0.0};

  bool better_than(const Key& o) const {
    return objective < o.objective || (objective == o.objective && spread < o.spread);
  }
};

class LoadState {
 public:
  LoadState(const Problem& p, std::int64_t capacity)
      : p_(p), C_(capacity), S_(p.scenarios), W_(static_cast<std::size_t>(p.weeks)) {
    loads_.assign(S_ * W_, 0);
    mins_.assign(S_, 0);
    spreads_.assign(S_, 0);
    slack_.assign(S_, capacity);
    dirty_.assign(S_, 0);
    choice_.assign(p.population_count(), -1);
  }

  const std::vector<int>& choice() const { return choice_; }
  std::int64_t overload() const { return overload_; }
  std::int64_t load(std::size_t s, std::size_t w) const { return loads_[s * W_ + w]; }

  void set(std::size_t i, int k) {
    const int old = choice_[i];
    if (old == k) return;
    const auto q = p_.quantity[i];
    const auto* before = old >= 0 ? &p_.options[i][static_cast<std::size_t>(old)].weeks : nullptr;
    const auto* after = k >= 0 ? &p_.options[i][static_cast<std::size_t>(k)].weeks : nullptr;
    for (std::size_t s = 0; s < S_; ++s) {
      const auto wb = before ? static_cast<std::size_t>((*before)[s]) : W_;
      const auto wa = after ? static_cast<std::size_t>((*after)[s]) : W_;
      if (wb == wa) continue;
      if (wb < W_) change(s, wb, -q);
      if (wa < W_) change(s, wa, q);
    }
    choice_[i] = k;
    refresh();
  }

  Key key() const { return Key{expectation(slack_, p_.probabilities), expectation(spreads_, p_.probabilities)}; }

  /// Weeks (calendar numbering) over capacity in any scenario.
  std::vector<int> overloaded_weeks() const {
    std::vector<int> out;
    for (std::size_t w = 0; w < W_; ++w) {
      for (std::size_t s = 0; s < S_; ++s) {
        if (loads_[s * W_ + w] > C_) {
          out.push_back(p_.window.first_week.value + static_cast<int>(w));
          break;
        }
      }
    }
    return out;
  }

  bool touches_overload(std::size_t i) const {
    const int k = choice_[i];
    if (k < 0) return false;
    const auto& weeks = p_.options[i][static_cast<std::size_t>(k)].weeks;
    for (std::size_t s = 0; s < S_; ++s) {
      if (loads_[s * W_ + static_cast<std::size_t>(weeks[s])] > C_) return true;
    }
    return false;
  }

 private:
  void change(std::size_t s, std::size_t w, std::int64_t delta) {
    auto* row = &loads_[s * W_];
    const auto old = row[w];
    const auto now = old + delta;
    std::int64_t d_spread = 0;
    for (std::size_t v = 0; v < W_; ++v) {
      if (v == w) continue;
      d_spread += std::abs(now - row[v]) - std::abs(old - row[v]);
    }
    spreads_[s] += d_spread;
    overload_ += std::max<std::int64_t>(0, now - C_) - std::max<std::int64_t>(0, old - C_);
    row[w] = now;
    dirty_[s] = 1;
  }

  void refresh() {
    for (std::size_t s = 0; s < S_; ++s) {
      if (!dirty_[s]) continue;
      const auto* row = &loads_[s * W_];
      mins_[s] = *std::min_element(row, row + W_);
      slack_[s] = C_ - mins_[s];
      dirty_[s] = 0;
    }
  }

  const Problem& p_;
  std::int64_t C_;
  std::size_t S_, W_;
  std::vector<std::int64_t> loads_;
  std::vector<std::int64_t> mins_;
  std::vector<std::int64_t> spreads_;
  std::vector<std::int64_t> slack_;
  std::vector<char> dirty_;
  std::vector<int> choice_;
  std::int64_t overload_{0};
};

class Search {
 public:
  Search(const Problem& p, std::int64_t capacity, std::uint64_t budget, std::mt19937_64& rng)
      : p_(p), C_(capacity), budget_(budget), rng_(rng), state_(p, capacity) {
    lookup_.resize(p.population_count());
    for (std::size_t i = 0; i < p.population_count(); ++i) {
      for (std::size_t k = 0; k < p.options[i].size(); ++k) lookup_[i].emplace(p.options[i][k].weeks, static_cast<int>(k));
    }
    visit_.resize(p.population_count());
    std::iota(visit_.begin(), visit_.end(), std::size_t{0});
  }

  const LoadState& state() const { return state_; }

  /// Places every population on its least-loaded usable option, largest quantities first.
  void construct(bool randomized) {
    std::vector<std::size_t> order(p_.population_count());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::vector<double> weight(order.size());
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (std::size_t i = 0; i < order.size(); ++i) {
      weight[i] = static_cast<double>(p_.quantity[i]) * (randomized ? 0.7 + 0.6 * u(rng_) : 1.0);
    }
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return weight[a] > weight[b]; });

    for (const auto i : order) {
      const auto q = p_.quantity[i];
      int best = -1;
      int ties = 0;
      std::tuple<std::int64_t, std::int64_t, std::int64_t> best_score{};
      for (std::size_t k = 0; k < p_.options[i].size(); ++k) {
        std::int64_t over = 0;
        std::int64_t worst = 0;
        std::int64_t sum = 0;
        for (std::size_t s = 0; s < p_.scenarios; ++s) {
          const auto load = state_.load(s, static_cast<std::size_t>(p_.options[i][k].weeks[s])) + q;
          over += std::max<std::int64_t>(0, load - C_);
          worst = std::max(worst, load);
          sum += load;
        }
        const std::tuple<std::int64_t, std::int64_t, std::int64_t> score{over, worst, sum};
        if (best < 0 || score < best_score) {
          best = static_cast<int>(k);
          best_score = score;
          ties = 1;
        } else if (randomized && score == best_score &&
                   std::uniform_int_distribution<int>(0, ties++)(rng_) == 0) {
          best = static_cast<int>(k);  // uniform among equal scores
        }
      }
      state_.set(i, best);
    }
  }

  /// Drives total overload to zero with moves and slot exchanges, kicking a few overloaded
  /// populations to random options at each local minimum. Ends on the least-overloaded state seen.
  bool repair() {
    auto best_overload = state_.overload();
    auto best_choice = state_.choice();
    int stall = 0;
    while (state_.overload() > 0 && spent_ < budget_) {
      if (pass_moves(true)) continue;
      if (pass_swaps(true)) continue;
      if (state_.overload() < best_overload) {
        best_overload = state_.overload();
        best_choice = state_.choice();
        stall = 0;
      } else if (++stall > stall_limit(2000, 5, 50)) {
        break;
      }
      kick();
    }
    if (state_.overload() > best_overload) {
      for (std::size_t i = 0; i < best_choice.size(); ++i) state_.set(i, best_choice[i]);
    }
    return state_.overload() == 0;
  }

  /// First-improvement descent on (objective, spread) keeping every week within capacity, then
  /// iterated perturbation: a feasible random change of one or two populations followed by
  /// descent, kept when not worse (plateaus are walked), undone otherwise.
  void improve() {
    descend();
    auto best_key = state_.key();
    auto best_choice = state_.choice();
    int stall = 0;
    while (spent_ < budget_ && stall < stall_limit(4000, 10, 200)) {
      if (!perturb()) break;
      descend();
      const auto key = state_.key();
      if (best_key.better_than(key)) {
        for (std::size_t i = 0; i < best_choice.size(); ++i) state_.set(i, best_choice[i]);
        ++stall;
        continue;
      }
      stall = key.better_than(best_key) ? 0 : stall + 1;
      best_key = key;
      best_choice = state_.choice();
    }
  }

 private:
  // fruitless perturbations tolerated; small instances get many, large ones few (each costs a full pass)
  int stall_limit(int work, int lo, int hi) const {
    return std::clamp(work / static_cast<int>(std::max<std::size_t>(1, p_.population_count())), lo, hi);
  }

  void kick() {
    std::vector<std::size_t> hot;
    for (std::size_t i = 0; i < p_.population_count(); ++i)
      if (p_.options[i].size() > 1 && state_.touches_overload(i)) hot.push_back(i);
    if (hot.empty()) return;
    std::shuffle(hot.begin(), hot.end(), rng_);
    hot.resize(std::min<std::size_t>(hot.size(), 2));
    for (const auto i : hot) {
      const auto n = static_cast<int>(p_.options[i].size());
      const int shift = std::uniform_int_distribution<int>(1, n - 1)(rng_);
      state_.set(i, (state_.choice()[i] + shift) % n);
      ++spent_;
    }
  }

  void descend() {
    while (spent_ < budget_) {
      if (pass_moves(false)) continue;
      if (pass_swaps(false)) continue;
      break;
    }
  }

  /// Moves one or two random populations to random options without exceeding capacity.
  bool perturb() {
    std::vector<std::size_t> movable;
    for (std::size_t i = 0; i < p_.population_count(); ++i)
      if (p_.options[i].size() > 1) movable.push_back(i);
    if (movable.empty()) return false;
    const int changes = std::uniform_int_distribution<int>(1, 2)(rng_);
    for (int c = 0; c < changes; ++c) {
      for (int tries = 0; tries < 8 && spent_ < budget_; ++tries) {
        const auto i = movable[std::uniform_int_distribution<std::size_t>(0, movable.size() - 1)(rng_)];
        const int current = state_.choice()[i];
        const auto n = static_cast<int>(p_.options[i].size());
        ++spent_;
        state_.set(i, (current + std::uniform_int_distribution<int>(1, n - 1)(rng_)) % n);
        if (state_.overload() == 0) break;
        state_.set(i, current);
      }
    }
    return true;
  }

  bool accept(std::int64_t overload_before, const Key& key_before, bool repairing) const {
    if (repairing) return state_.overload() < overload_before;
    return state_.overload() == 0 && state_.key().better_than(key_before);
  }

  bool pass_moves(bool repairing) {
    std::shuffle(visit_.begin(), visit_.end(), rng_);
    bool improved = false;
    for (const auto i : visit_) {
      if (spent_ >= budget_) break;
      if (repairing && !state_.touches_overload(i)) continue;
      const int current = state_.choice()[i];
      for (std::size_t k = 0; k < p_.options[i].size() && spent_ < budget_; ++k) {
        if (static_cast<int>(k) == current) continue;
        const auto over = state_.overload();
        const auto key = repairing ? Key{} : state_.key();
        ++spent_;
        state_.set(i, static_cast<int>(k));
        if (accept(over, key, repairing)) {
          improved = true;
          break;
        }
        state_.set(i, current);
      }
      if (repairing && state_.overload() == 0) return true;
    }
    return improved;
  }

  bool pass_swaps(bool repairing) {
    std::shuffle(visit_.begin(), visit_.end(), rng_);
    bool improved = false;
    const auto n = visit_.size();
    for (std::size_t a_pos = 0; a_pos < n && spent_ < budget_; ++a_pos) {
      const auto a = visit_[a_pos];
      if (repairing && !state_.touches_overload(a)) continue;
      for (std::size_t b_pos = 0; b_pos < n && spent_ < budget_; ++b_pos) {
        const auto b = visit_[b_pos];
        if (a == b || p_.quantity[a] == p_.quantity[b]) continue;
        const int ca = state_.choice()[a];
        const int cb = state_.choice()[b];
        const auto& wa = p_.options[a][static_cast<std::size_t>(ca)].weeks;
        const auto& wb = p_.options[b][static_cast<std::size_t>(cb)].weeks;
        if (wa == wb) continue;
        const auto ia = lookup_[a].find(wb);
        if (ia == lookup_[a].end()) continue;
        const auto ib = lookup_[b].find(wa);
        if (ib == lookup_[b].end()) continue;
        const auto over = state_.overload();
        const auto key = repairing ? Key{} : state_.key();
        ++spent_;
        state_.set(a, ia->second);
        state_.set(b, ib->second);
        if (accept(over, key, repairing)) {
          improved = true;
          break;
        }
        state_.set(b, cb);
        state_.set(a, ca);
      }
      if (repairing && state_.overload() == 0) return true;
    }
    return improved;
  }

  const Problem& p_;
  std::int64_t C_;
  std::uint64_t budget_;
  std::uint64_t spent_{0};
  std::mt19937_64& rng_;
  LoadState state_;
  std::vector<std::map<std::vector<std::int32_t>, int>> lookup_;
  std::vector<std::size_t> visit_;
};

}  // namespace

HeuristicOutcome run_heuristic(const Problem& problem, std::int64_t capacity, const HeuristicConfig& config,
                               bool improve) {
  std::mt19937_64 rng(config.seed);
  const int attempts = 1 + std::max(0, config.restarts);
  const std::uint64_t budget = std::max<std::uint64_t>(1, config.iterations / static_cast<std::uint64_t>(attempts));

  HeuristicOutcome out;
  std::int64_t least_overload = std::numeric_limits<std::int64_t>::max();
  Key best_key;
  std::vector<DayIndex> best_days;
  for (int attempt = 0; attempt < attempts; ++attempt) {
    Search search(problem, capacity, budget, rng);
    search.construct(attempt > 0);
    if (!search.repair()) {
      if (search.state().overload() < least_overload) {
        least_overload = search.state().overload();
        out.binding_weeks = search.state().overloaded_weeks();
      }
      continue;
    }
    if (!improve) {
      out.feasible = true;
      out.choice = search.state().choice();
      return out;
    }
    search.improve();
    const auto key = search.state().key();
    std::vector<DayIndex> days;
    for (std::size_t i = 0; i < problem.population_count(); ++i) {
      days.push_back(problem.options[i][static_cast<std::size_t>(search.state().choice()[i])].day);
    }
    const bool better = !out.feasible || key.better_than(best_key) ||
                        (!best_key.better_than(key) && days < best_days);
    if (better) {
      out.feasible = true;
      out.choice = search.state().choice();
      best_key = key;
      best_days = std::move(days);
    }
  }
  if (out.feasible) out.binding_weeks.clear();
  return out;
}

}  // namespace plantsched::sched::detail

namespace plantsched::sched {

PlantingSchedule solve_case1_heuristic(const harvest::HarvestTable& table,
                                       std::span<const SeedPopulation> populations,
                                       std::span<const double> probabilities, std::int64_t capacity,
                                       std::optional<WindowLimit> window, const HeuristicConfig& config) {
  if (capacity < 1) throw ValidationError(fmt::format("capacity {} must be positive", capacity));
  const auto problem = detail::build_problem(table, populations, probabilities, window);
  if (problem.max_quantity() > capacity) {
    throw InfeasibleError(fmt::format("capacity {} is below the largest population quantity {}", capacity,
                                      problem.max_quantity()));
  }
  const auto outcome = detail::run_heuristic(problem, capacity, config, true);
  if (!outcome.feasible) {
    std::string weeks;
    for (const auto w : outcome.binding_weeks) weeks += (weeks.empty() ? "" : ", ") + std::to_string(w);
    throw InfeasibleError(
        fmt::format("repair could not bring weekly harvests under capacity {}; binding weeks: {}", capacity, weeks),
        outcome.binding_weeks);
  }
  return detail::make_schedule(table, problem, outcome.choice, capacity, "heuristic");
}

}  // namespace plantsched::sched
