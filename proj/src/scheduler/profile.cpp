#include "plantsched/scheduler/profile.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "plantsched/errors.hpp"

namespace plantsched::sched {

void WindowLimit::validate() const {
  if (first_week > last_week) {
    throw ValidationError(fmt::format("harvest window [{}, {}] is empty", first_week.value, last_week.value));
  }
}

HarvestProfile::HarvestProfile(std::size_t scenarios, WeekIndex first, WeekIndex last)
    : scenarios_(scenarios), first_(first), last_(last) {
  const auto weeks = last.value >= first.value ? static_cast<std::size_t>(last.value - first.value + 1) : 0;
  loads_.assign(scenarios * weeks, 0);
}

std::int64_t HarvestProfile::at(std::size_t scenario, WeekIndex week) const {
  if (scenario >= scenarios_) throw RangeError(fmt::format("scenario {} out of range", scenario));
  if (week < first_ || week > last_) return 0;
  const auto weeks = static_cast<std::size_t>(last_.value - first_.value + 1);
  return loads_[scenario * weeks + static_cast<std::size_t>(week.value - first_.value)];
}

void HarvestProfile::add(std::size_t scenario, WeekIndex week, std::int64_t ears) {
  if (scenario >= scenarios_) throw RangeError(fmt::format("scenario {} out of range", scenario));
  if (week < first_ || week > last_) {
    throw RangeError(fmt::format("week {} outside profile range [{}, {}]", week.value, first_.value, last_.value));
  }
  const auto weeks = static_cast<std::size_t>(last_.value - first_.value + 1);
  loads_[scenario * weeks + static_cast<std::size_t>(week.value - first_.value)] += ears;
}

std::vector<std::int64_t> HarvestProfile::weekly(std::size_t scenario, WindowLimit window) const {
  std::vector<std::int64_t> out;
  out.reserve(static_cast<std::size_t>(std::max(0, window.width())));
  for (auto w = window.first_week.value; w <= window.last_week.value; ++w) out.push_back(at(scenario, WeekIndex{w}));
  return out;
}

std::int64_t HarvestProfile::total(std::size_t scenario) const {
  std::int64_t sum = 0;
  for (auto w = first_.value; w <= last_.value; ++w) sum += at(scenario, WeekIndex{w});
  return sum;
}

std::int64_t HarvestProfile::max_load(std::size_t scenario) const {
  std::int64_t m = 0;
  for (auto w = first_.value; w <= last_.value; ++w) m = std::max(m, at(scenario, WeekIndex{w}));
  return m;
}

std::int64_t HarvestProfile::max_load() const {
  std::int64_t m = 0;
  for (std::size_t s = 0; s < scenarios_; ++s) m = std::max(m, max_load(s));
  return m;
}

std::optional<WindowLimit> HarvestProfile::harvest_span() const {
  std::optional<std::int32_t> lo;
  std::optional<std::int32_t> hi;
  for (std::size_t s = 0; s < scenarios_; ++s) {
    for (auto w = first_.value; w <= last_.value; ++w) {
      if (at(s, WeekIndex{w}) == 0) continue;
      lo = lo ? std::min(*lo, w) : w;
      hi = hi ? std::max(*hi, w) : w;
    }
  }
  if (!lo) return std::nullopt;
  return WindowLimit{WeekIndex{*lo}, WeekIndex{*hi}};
}

HarvestProfile profile_of(const harvest::HarvestTable& table, std::span<const DayIndex> assignment,
                          std::size_t* skipped) {
  if (assignment.size() != table.population_count()) {
    throw ValidationError(fmt::format("assignment covers {} populations, table has {}", assignment.size(),
                                      table.population_count()));
  }
  std::optional<WeekIndex> lo;
  std::optional<WeekIndex> hi;
  std::size_t missing = 0;
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    for (std::size_t s = 0; s < table.scenario_count(); ++s) {
      if (const auto w = table.week(i, assignment[i], s)) {
        lo = lo ? std::min(*lo, *w) : *w;
        hi = hi ? std::max(*hi, *w) : *w;
      } else {
        ++missing;
      }
    }
  }
  HarvestProfile profile(table.scenario_count(), lo.value_or(WeekIndex{1}), hi.value_or(WeekIndex{0}));
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    for (std::size_t s = 0; s < table.scenario_count(); ++s) {
      if (const auto w = table.week(i, assignment[i], s)) profile.add(s, *w, table.quantity(i));
    }
  }
  if (skipped != nullptr) *skipped = missing;
  return profile;
}

double expectation(std::span<const std::int64_t> values, std::span<const double> probabilities) {
  if (values.size() != probabilities.size() || values.empty()) {
    throw ValidationError(fmt::format("{} scenario values but {} probabilities", values.size(), probabilities.size()));
  }
  const bool uniform = std::all_of(probabilities.begin(), probabilities.end(),
                                   [&](double p) { return p == probabilities.front(); });
  if (uniform) {
    std::int64_t sum = 0;
    for (const auto v : values) sum += v;
    return static_cast<double>(sum) * probabilities.front();
  }
  double out = 0.0;
  for (std::size_t s = 0; s < values.size(); ++s) out += probabilities[s] * static_cast<double>(values[s]);
  return out;
}

Case1Value evaluate_case1_objective(const HarvestProfile& profile, std::int64_t capacity,
                                    std::span<const double> probabilities, WindowLimit window) {
  window.validate();
  if (probabilities.size() != profile.scenario_count()) {
    throw ValidationError(fmt::format("{} probabilities for {} scenarios", probabilities.size(),
                                      profile.scenario_count()));
  }
  Case1Value out;
  for (std::size_t s = 0; s < profile.scenario_count(); ++s) {
    const auto weekly = profile.weekly(s, window);
    out.per_scenario.push_back(capacity - *std::min_element(weekly.begin(), weekly.end()));
    if (profile.max_load(s) > capacity) out.capacity_feasible = false;
  }
  out.value = expectation(out.per_scenario, probabilities);
  return out;
}

std::int64_t pairwise_spread(std::span<const std::int64_t> weekly) {
  std::vector<std::int64_t> v(weekly.begin(), weekly.end());
  std::sort(v.begin(), v.end());
  // sorted ascending: element k exceeds the k before it and trails the n-1-k after it
  std::int64_t sum = 0;
  const auto n = static_cast<std::int64_t>(v.size());
  for (std::int64_t k = 0; k < n; ++k) sum += v[static_cast<std::size_t>(k)] * (2 * k - (n - 1));
  return sum;
}

double evaluate_pairwise_objective(const HarvestProfile& profile, std::span<const double> probabilities,
                                   WindowLimit window) {
  window.validate();
  if (probabilities.size() != profile.scenario_count()) {
    throw ValidationError(fmt::format("{} probabilities for {} scenarios", probabilities.size(),
                                      profile.scenario_count()));
  }
  std::vector<std::int64_t> per;
  for (std::size_t s = 0; s < profile.scenario_count(); ++s) per.push_back(pairwise_spread(profile.weekly(s, window)));
  return expectation(per, probabilities);
}

std::vector<double> uniform_probabilities(std::size_t count) {
  if (count == 0) throw ValidationError("at least one scenario is required");
  return std::vector<double>(count, 1.0 / static_cast<double>(count));
}

}  // namespace plantsched::sched
