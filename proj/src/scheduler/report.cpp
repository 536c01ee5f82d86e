#include "plantsched/scheduler/report.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <fmt/format.h>

#include "plantsched/csv.hpp"
#include "plantsched/errors.hpp"

namespace plantsched::sched {

ScheduleReport evaluate_schedule(std::span<const DayIndex> assignment, const harvest::HarvestTable& table,
                                 std::int64_t capacity, std::span<const double> probabilities) {
  ScheduleReport r;
  r.profile = profile_of(table, assignment, &r.unharvestable);
  const auto span = r.profile.harvest_span();
  if (!span) throw ValidationError("schedule harvests nothing in any scenario");
  r.first_week = span->first_week;
  r.last_week = span->last_week;
  r.period_weeks = span->width();
  r.max_capacity = r.profile.max_load();
  r.capacity = capacity;

  const auto c1 = evaluate_case1_objective(r.profile, capacity, probabilities, *span);
  r.capacity_feasible = c1.capacity_feasible;
  r.case1 = c1.value;
  r.pairwise = evaluate_pairwise_objective(r.profile, probabilities, *span);

  for (std::size_t s = 0; s < r.profile.scenario_count(); ++s) {
    ScenarioSummary sum;
    const auto weekly = r.profile.weekly(s, *span);
    const auto first = std::find_if(weekly.begin(), weekly.end(), [](auto v) { return v != 0; });
    const auto last = std::find_if(weekly.rbegin(), weekly.rend(), [](auto v) { return v != 0; });
    if (first != weekly.end()) {
      sum.first_week = WeekIndex{span->first_week.value + static_cast<std::int32_t>(first - weekly.begin())};
      sum.last_week = WeekIndex{span->last_week.value - static_cast<std::int32_t>(last - weekly.rbegin())};
    }
    sum.max_load = r.profile.max_load(s);
    sum.case1 = c1.per_scenario[s];
    sum.pairwise = pairwise_spread(weekly);
    r.scenarios.push_back(sum);
  }
  return r;
}

nlohmann::ordered_json report_to_json(const ScheduleReport& r) {
  nlohmann::ordered_json j;
  j["first_harvest_week"] = r.first_week.value;
  j["last_harvest_week"] = r.last_week.value;
  j["harvest_period_weeks"] = r.period_weeks;
  j["max_required_capacity"] = r.max_capacity;
  j["capacity"] = r.capacity;
  j["capacity_feasible"] = r.capacity_feasible;
  j["case1_objective"] = r.case1;
  j["pairwise_objective"] = r.pairwise;
  j["unharvestable_triples"] = r.unharvestable;
  auto& per = j["scenarios"] = nlohmann::ordered_json::array();
  for (std::size_t s = 0; s < r.scenarios.size(); ++s) {
    const auto& x = r.scenarios[s];
    per.push_back({{"scenario", s},
                   {"first_harvest_week", x.first_week.value},
                   {"last_harvest_week", x.last_week.value},
                   {"max_weekly_harvest", x.max_load},
                   {"case1_objective", x.case1},
                   {"pairwise_objective", x.pairwise}});
  }
  return j;
}

void write_schedule_csv(std::ostream& out, std::span<const SeedPopulation> populations,
                        std::span<const DayIndex> assignment, const harvest::HarvestTable& table,
                        std::span<const double> probabilities) {
  if (assignment.size() != populations.size() || populations.size() != table.population_count()) {
    throw ValidationError("schedule, populations and harvest table disagree in size");
  }
  out << "population,site,plant_date,expected_harvest_week\n";
  for (std::size_t i = 0; i < populations.size(); ++i) {
    double expected = 0.0;
    bool harvested = true;
    for (std::size_t s = 0; s < table.scenario_count() && harvested; ++s) {
      const auto w = table.week(i, assignment[i], s);
      harvested = w.has_value();
      if (harvested) expected += probabilities[s] * w->value;
    }
    out << fmt::format("{},{},{},{}\n", populations[i].id, populations[i].site.value, format_iso_date(assignment[i]),
                       harvested ? fmt::format("{:.3f}", expected) : std::string{"none"});
  }
}

std::vector<DayIndex> read_schedule_csv(std::istream& in, std::span<const SeedPopulation> populations) {
  const auto t = csv::read(in);
  const auto c_id = t.column("population");
  const auto c_date = t.column("plant_date");
  std::map<std::string, DayIndex> by_id;
  for (const auto& row : t.rows) {
    DayIndex d;
    try {
      d = parse_iso_date(row.fields[c_date]);
    } catch (const Error& e) {
      throw ParseError(row.line, e.what());
    }
    if (!by_id.emplace(row.fields[c_id], d).second) {
      throw ParseError(row.line, fmt::format("population {} scheduled twice", row.fields[c_id]));
    }
  }
  std::vector<DayIndex> out;
  for (const auto& p : populations) {
    const auto it = by_id.find(p.id);
    if (it == by_id.end()) throw ValidationError(fmt::format("schedule has no row for population {}", p.id));
    if (it->second < p.earliest_plant || it->second > p.latest_plant) {
      throw ValidationError(fmt::format("population {} planted on {} outside its window", p.id,
                                        format_iso_date(it->second)));
    }
    out.push_back(it->second);
  }
  return out;
}

void write_profile_csv(std::ostream& out, const HarvestProfile& profile) {
  out << "scenario,week,harvest\n";
  for (std::size_t s = 0; s < profile.scenario_count(); ++s) {
    for (auto w = profile.first_week().value; w <= profile.last_week().value; ++w) {
      out << fmt::format("{},{},{}\n", s, w, profile.at(s, WeekIndex{w}));
    }
  }
}

namespace {

std::vector<double> expected_weekly(const HarvestProfile& p, std::span<const double> probabilities, WindowLimit range) {
  std::vector<double> out(static_cast<std::size_t>(range.width()), 0.0);
  for (std::size_t s = 0; s < p.scenario_count(); ++s) {
    for (auto w = range.first_week.value; w <= range.last_week.value; ++w) {
      out[static_cast<std::size_t>(w - range.first_week.value)] +=
          probabilities[s] * static_cast<double>(p.at(s, WeekIndex{w}));
    }
  }
  return out;
}

std::string escape(const std::string& s) {
  std::string out;
  for (const char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

constexpr double kWidth = 900, kHeight = 420, kLeft = 70, kRight = 20, kTop = 40, kBottom = 50;

}  // namespace

void write_profile_svg(std::ostream& out, const HarvestProfile& profile, std::span<const double> probabilities,
                       std::int64_t capacity, const HarvestProfile* baseline, const std::string& title) {
  auto range = profile.harvest_span().value_or(WindowLimit{profile.first_week(), profile.last_week()});
  if (baseline) {
    if (const auto b = baseline->harvest_span()) {
      range.first_week = std::min(range.first_week, b->first_week);
      range.last_week = std::max(range.last_week, b->last_week);
    }
  }
  const auto opt = expected_weekly(profile, probabilities, range);
  std::vector<double> base;
  if (baseline) base = expected_weekly(*baseline, probabilities, range);

  double top = static_cast<double>(capacity);
  for (const auto v : opt) top = std::max(top, v);
  for (const auto v : base) top = std::max(top, v);
  top = top > 0 ? top * 1.05 : 1.0;

  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  const double bar = plot_w / static_cast<double>(opt.size());
  auto y_of = [&](double v) { return kTop + plot_h * (1.0 - v / top); };

  out << fmt::format(R"svg(<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" font-family="sans-serif" font-size="11">)svg",
                     kWidth, kHeight)
      << '\n';
  out << fmt::format(R"svg(<text x="{}" y="20" font-size="14">{}</text>)svg", kLeft, escape(title)) << '\n';
  out << fmt::format(R"svg(<line x1="{0}" y1="{1}" x2="{0}" y2="{2}" stroke="black"/>)svg", kLeft, kTop, kTop + plot_h)
      << '\n';
  out << fmt::format(R"svg(<line x1="{0}" y1="{1}" x2="{2}" y2="{1}" stroke="black"/>)svg", kLeft, kTop + plot_h,
                     kLeft + plot_w)
      << '\n';
  for (int k = 0; k <= 4; ++k) {
    const double v = top * k / 4.0;
    out << fmt::format(R"svg(<text x="{}" y="{:.1f}" text-anchor="end">{:.0f}</text>)svg", kLeft - 5, y_of(v) + 4, v) << '\n';
  }
  for (std::size_t k = 0; k < opt.size(); ++k) {
    const double x = kLeft + bar * static_cast<double>(k);
    if (!base.empty()) {
      out << fmt::format(R"svg(<rect x="{:.2f}" y="{:.2f}" width="{:.2f}" height="{:.2f}" fill="#bbbbbb"/>)svg", x,
                         y_of(base[k]), bar, kTop + plot_h - y_of(base[k]))
          << '\n';
    }
    out << fmt::format(R"svg(<rect x="{:.2f}" y="{:.2f}" width="{:.2f}" height="{:.2f}" fill="#3366aa" fill-opacity="0.85"/>)svg",
                       x + bar * 0.15, y_of(opt[k]), bar * 0.7, kTop + plot_h - y_of(opt[k]))
        << '\n';
    const auto week = range.first_week.value + static_cast<std::int32_t>(k);
    if (opt.size() <= 40 || week % 5 == 0) {
      out << fmt::format(R"svg(<text x="{:.2f}" y="{:.1f}" text-anchor="middle">{}</text>)svg", x + bar / 2,
                         kTop + plot_h + 15, week)
          << '\n';
    }
  }
  out << fmt::format(R"svg(<line x1="{}" y1="{:.2f}" x2="{}" y2="{:.2f}" stroke="#cc3333" stroke-dasharray="6 4"/>)svg",
                     kLeft, y_of(static_cast<double>(capacity)), kLeft + plot_w, y_of(static_cast<double>(capacity)))
      << '\n';
  out << fmt::format(R"svg(<text x="{}" y="{}" text-anchor="middle">harvest week</text>)svg", kLeft + plot_w / 2,
                     kHeight - 10)
      << '\n';
  out << "</svg>\n";
}

void write_sweep_svg(std::ostream& out, std::span<const SweepCell> grid, const std::string& title) {
  if (grid.empty()) throw ValidationError("empty sweep grid");
  std::int32_t f0 = grid.front().window.first_week.value, f1 = f0;
  std::int32_t l0 = grid.front().window.last_week.value, l1 = l0;
  double lo = 0, hi = 0;
  bool any = false;
  for (const auto& c : grid) {
    f0 = std::min(f0, c.window.first_week.value);
    f1 = std::max(f1, c.window.first_week.value);
    l0 = std::min(l0, c.window.last_week.value);
    l1 = std::max(l1, c.window.last_week.value);
    if (c.status != CellStatus::Solved) continue;
    lo = any ? std::min(lo, c.pairwise) : c.pairwise;
    hi = any ? std::max(hi, c.pairwise) : c.pairwise;
    any = true;
  }
  const double plot_w = kWidth - kLeft - kRight - 60;
  const double plot_h = kHeight - kTop - kBottom;
  const double cw = plot_w / (l1 - l0 + 1);
  const double ch = plot_h / (f1 - f0 + 1);

  // light yellow (low) to dark blue (high)
  auto color = [&](double v) {
    const double t = hi > lo ? (v - lo) / (hi - lo) : 0.0;
    const auto mix = [&](int a, int b) { return static_cast<int>(std::lround(a + (b - a) * t)); };
    return fmt::format("#{:02x}{:02x}{:02x}", mix(255, 8), mix(247, 48), mix(188, 107));
  };

  out << fmt::format(R"svg(<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" font-family="sans-serif" font-size="11">)svg",
                     kWidth, kHeight)
      << '\n';
  out << fmt::format(R"svg(<text x="{}" y="20" font-size="14">{}</text>)svg", kLeft, escape(title)) << '\n';
  for (const auto& c : grid) {
    const double x = kLeft + cw * (c.window.last_week.value - l0);
    const double y = kTop + ch * (c.window.first_week.value - f0);
    out << fmt::format(R"svg(<rect x="{:.2f}" y="{:.2f}" width="{:.2f}" height="{:.2f}" fill="{}"><title>{}-{}: {}</title></rect>)svg",
                       x, y, cw, ch, c.status == CellStatus::Solved ? color(c.pairwise) : std::string{"#dddddd"},
                       c.window.first_week.value, c.window.last_week.value,
                       c.status == CellStatus::Solved ? fmt::format("{}", c.pairwise) : std::string{to_string(c.status)})
        << '\n';
  }
  for (auto f = f0; f <= f1; ++f) {
    out << fmt::format(R"svg(<text x="{}" y="{:.1f}" text-anchor="end">{}</text>)svg", kLeft - 5,
                       kTop + ch * (f - f0 + 0.5) + 4, f)
        << '\n';
  }
  for (auto l = l0; l <= l1; ++l) {
    out << fmt::format(R"svg(<text x="{:.1f}" y="{}" text-anchor="middle">{}</text>)svg", kLeft + cw * (l - l0 + 0.5),
                       kTop + plot_h + 15, l)
        << '\n';
  }
  out << fmt::format(R"svg(<text x="{}" y="{}" text-anchor="middle">last harvest week</text>)svg", kLeft + plot_w / 2,
                     kHeight - 10)
      << '\n';
  out << fmt::format(R"svg(<text x="15" y="{}" transform="rotate(-90 15 {})" text-anchor="middle">first harvest week</text>)svg",
                     kTop + plot_h / 2, kTop + plot_h / 2)
      << '\n';
  if (any) {
    out << fmt::format(R"svg(<text x="{}" y="{}">min {:.0f}</text>)svg", kWidth - 75, kTop + 10, lo) << '\n';
    out << fmt::format(R"svg(<text x="{}" y="{}">max {:.0f}</text>)svg", kWidth - 75, kTop + 25, hi) << '\n';
  }
  out << "</svg>\n";
}

}  // namespace plantsched::sched
