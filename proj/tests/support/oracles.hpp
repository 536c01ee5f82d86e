#pragma once

// Reference implementations written independently of the library internals. Slow on purpose.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "plantsched/calendar.hpp"
#include "plantsched/domain.hpp"
#include "plantsched/forecaster/model.hpp"
#include "plantsched/harvest_map.hpp"
#include "plantsched/rio/gp.hpp"
#include "plantsched/scheduler/profile.hpp"

namespace oracle {

using namespace plantsched;

/// Day-by-day accumulation from the planting day; nothing when the series ends first.
inline std::optional<DayIndex> naive_harvest_day(DayIndex plant, double required, const DailyGduSeries& s) {
  if (required <= 0.0) return plant;
  for (DayIndex end = plant + 1; end <= s.end_day(); end = end + 1) {
    double sum = 0.0;
    for (DayIndex d = plant; d < end; d = d + 1) sum += s.at(d);
    if (sum >= required) return end;
  }
  return std::nullopt;
}

/// Weekday arithmetic on the civil calendar: week 1 starts Sunday 2019-12-29.
inline int naive_week(DayIndex d) {
  const int since_sunday = d.value + 3;  // 2019-12-29 is day -3
  return since_sunday >= 0 ? since_sunday / 7 + 1 : -((-since_sunday + 6) / 7) + 1;
}

struct BruteResult {
  double objective{std::numeric_limits<double>::infinity()};
  double pairwise{std::numeric_limits<double>::infinity()};
  std::int64_t max_load{std::numeric_limits<std::int64_t>::max()};
  bool feasible{false};
};

/// Enumerates every planting-day combination. A day counts only if it harvests inside `window`
/// in every scenario.
template <class Visit>
void enumerate(const harvest::HarvestTable& table, sched::WindowLimit window, Visit&& visit) {
  const auto n = table.population_count();
  const auto S = table.scenario_count();
  std::vector<std::vector<std::vector<int>>> weeks(n);  // per population, per usable day, per scenario
  for (std::size_t i = 0; i < n; ++i) {
    for (DayIndex d = table.earliest(i); d <= table.latest(i); d = d + 1) {
      std::vector<int> w;
      bool ok = true;
      for (std::size_t s = 0; s < S && ok; ++s) {
        const auto wk = table.week(i, d, s);
        ok = wk && window.contains(*wk);
        if (ok) w.push_back(wk->value - window.first_week.value);
      }
      if (ok) weeks[i].push_back(w);
    }
    if (weeks[i].empty()) return;
  }
  const auto W = static_cast<std::size_t>(window.width());
  std::vector<std::int64_t> loads(S * W, 0);
  std::vector<std::size_t> idx(n, 0);
  auto apply = [&](std::size_t i, std::int64_t sign) {
    for (std::size_t s = 0; s < S; ++s)
      loads[s * W + static_cast<std::size_t>(weeks[i][idx[i]][s])] += sign * table.quantity(i);
  };
  for (std::size_t i = 0; i < n; ++i) apply(i, 1);
  while (true) {
    visit(loads, S, W);
    std::size_t i = 0;
    for (; i < n; ++i) {
      apply(i, -1);
      if (++idx[i] < weeks[i].size()) {
        apply(i, 1);
        break;
      }
      idx[i] = 0;
      apply(i, 1);
    }
    if (i == n) return;
  }
}

inline std::int64_t spread(const std::int64_t* row, std::size_t W) {
  std::int64_t total = 0;
  for (std::size_t a = 0; a < W; ++a)
    for (std::size_t b = a + 1; b < W; ++b) total += std::abs(row[a] - row[b]);
  return total;
}

/// Optimal case-1 value (and the best pairwise value among optimal schedules).
inline BruteResult brute_case1(const harvest::HarvestTable& table, const std::vector<double>& probs,
                               std::int64_t capacity, sched::WindowLimit window) {
  BruteResult best;
  enumerate(table, window, [&](const std::vector<std::int64_t>& loads, std::size_t S, std::size_t W) {
    double obj = 0.0, pairwise = 0.0;
    for (std::size_t s = 0; s < S; ++s) {
      const auto* row = &loads[s * W];
      const auto mx = *std::max_element(row, row + W);
      if (mx > capacity) return;
      obj += probs[s] * static_cast<double>(capacity - *std::min_element(row, row + W));
      pairwise += probs[s] * static_cast<double>(spread(row, W));
    }
    const double tol = 1e-9 * std::max(1.0, std::abs(obj));
    if (!best.feasible || obj < best.objective - tol || (std::abs(obj - best.objective) <= tol && pairwise < best.pairwise)) {
      best.feasible = true;
      best.objective = obj;
      best.pairwise = pairwise;
    }
  });
  return best;
}

/// Smallest achievable maximum weekly load over all scenarios.
inline std::int64_t brute_min_capacity(const harvest::HarvestTable& table, sched::WindowLimit window) {
  std::int64_t best = std::numeric_limits<std::int64_t>::max();
  enumerate(table, window, [&](const std::vector<std::int64_t>& loads, std::size_t, std::size_t) {
    best = std::min(best, *std::max_element(loads.begin(), loads.end()));
  });
  return best;
}

/// Gauss-Jordan inverse with partial pivoting.
inline Eigen::MatrixXd gauss_jordan_inverse(Eigen::MatrixXd a) {
  const auto n = a.rows();
  Eigen::MatrixXd inv = Eigen::MatrixXd::Identity(n, n);
  for (Eigen::Index c = 0; c < n; ++c) {
    Eigen::Index p = c;
    for (Eigen::Index r = c + 1; r < n; ++r)
      if (std::abs(a(r, c)) > std::abs(a(p, c))) p = r;
    a.row(c).swap(a.row(p));
    inv.row(c).swap(inv.row(p));
    const double d = a(c, c);
    a.row(c) /= d;
    inv.row(c) /= d;
    for (Eigen::Index r = 0; r < n; ++r) {
      if (r == c) continue;
      const double f = a(r, c);
      if (f == 0.0) continue;
      a.row(r) -= f * a.row(c);
      inv.row(r) -= f * inv.row(c);
    }
  }
  return inv;
}

inline double kernel(const Eigen::VectorXd& ga, double ya, const Eigen::VectorXd& gb, double yb,
                     const rio::IoKernelHyper& h) {
  double d2 = 0.0;
  for (Eigen::Index k = 0; k < ga.size(); ++k) d2 += (ga[k] - gb[k]) * (ga[k] - gb[k]);
  return h.sigma_in * h.sigma_in * std::exp(-d2 / (2 * h.len_in * h.len_in)) +
         h.sigma_out * h.sigma_out * std::exp(-(ya - yb) * (ya - yb) / (2 * h.len_out * h.len_out));
}

/// Posterior mean and variance (without the noise term) through an explicit inverse.
inline std::pair<double, double> dense_posterior(const rio::ResidualData& data, const rio::IoKernelHyper& h,
                                                 const Eigen::VectorXd& g, double y) {
  const auto n = data.size();
  Eigen::MatrixXd K(n, n);
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = 0; b < n; ++b)
      K(a, b) = kernel(data.features.row(a).transpose(), data.predictions[a], data.features.row(b).transpose(),
                       data.predictions[b], h) +
                (a == b ? h.noise_sd * h.noise_sd : 0.0);
  const Eigen::MatrixXd Kinv = gauss_jordan_inverse(K);
  Eigen::VectorXd k(n);
  for (Eigen::Index a = 0; a < n; ++a) k[a] = kernel(data.features.row(a).transpose(), data.predictions[a], g, y, h);
  return {k.dot(Kinv * data.residuals), kernel(g, y, g, y, h) - k.dot(Kinv * k)};
}

/// Central differences of the MAE loss with respect to every flattened parameter.
inline std::vector<double> numeric_gradient(const forecaster::NetworkParams& params, const std::vector<double>& windows,
                                            const std::vector<double>& targets, int window, double h = 1e-6) {
  auto flat = params.flatten();
  std::vector<double> grad(flat.size());
  forecaster::NetworkParams probe = params;
  for (std::size_t k = 0; k < flat.size(); ++k) {
    const double keep = flat[k];
    flat[k] = keep + h;
    probe.assign(flat);
    const double up = forecaster::mae_loss(probe, windows, targets, window);
    flat[k] = keep - h;
    probe.assign(flat);
    const double down = forecaster::mae_loss(probe, windows, targets, window);
    flat[k] = keep;
    grad[k] = (up - down) / (2 * h);
  }
  return grad;
}

/// Small scheduling instance: constant-ish weather so harvests fall within a few weeks.
struct SmallInstance {
  std::vector<SeedPopulation> populations;
  std::vector<DailyGduSeries> scenarios;
  std::vector<double> probabilities;
};

inline SmallInstance random_small_instance(std::mt19937_64& rng, int max_pops = 8, int max_width = 6,
                                           int max_scenarios = 3) {
  std::uniform_int_distribution<int> n_pop(1, max_pops), n_scen(1, max_scenarios), width(1, max_width),
      start(0, 10), quantity(1, 60);
  std::uniform_real_distribution<double> gdu(4.0, 16.0), req(20.0, 90.0);
  SmallInstance in;
  const int S = n_scen(rng);
  for (int s = 0; s < S; ++s) {
    DailyGduSeries series{SiteId{0}, DayIndex{0}, {}};
    for (int d = 0; d < 60; ++d) series.values.push_back(gdu(rng));
    in.scenarios.push_back(std::move(series));
  }
  const int n = n_pop(rng);
  for (int i = 0; i < n; ++i) {
    SeedPopulation p;
    p.id = "p" + std::to_string(i);
    p.earliest_plant = DayIndex{start(rng)};
    p.latest_plant = p.earliest_plant + (width(rng) - 1);
    p.required_gdu = std::round(req(rng));
    p.harvest_quantity = quantity(rng);
    in.populations.push_back(p);
  }
  std::vector<double> w(S);
  for (auto& x : w) x = std::uniform_real_distribution<double>(0.5, 1.5)(rng);
  double sum = 0;
  for (auto x : w) sum += x;
  for (auto x : w) in.probabilities.push_back(x / sum);
  return in;
}

}  // namespace oracle
