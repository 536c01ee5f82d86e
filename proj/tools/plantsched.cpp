#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "plantsched/errors.hpp"
#include "plantsched/forecaster/evaluation.hpp"
#include "plantsched/forecaster/model_io.hpp"
#include "plantsched/forecaster/training.hpp"
#include "plantsched/harvest_map.hpp"
#include "plantsched/ingest.hpp"
#include "plantsched/rio/gp.hpp"
#include "plantsched/rio/scenarios.hpp"
#include "plantsched/scheduler/report.hpp"
#include "plantsched/scheduler/solvers.hpp"
#include "plantsched/scheduler/sweep.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace plantsched;

namespace {

constexpr const char* kVersion = "0.1.0";

struct Globals {
  std::string out{"out"};
  std::uint64_t seed{1};
  unsigned threads{1};
  CsvOptions csv;
};

/// Collects everything a run read and wrote for manifest.json.
struct Run {
  explicit Run(const Globals& globals) : g(globals) {}

  const Globals& g;
  std::string command;
  json inputs = json::array();
  std::vector<std::string> outputs;
  json details = json::object();

  fs::path path(const std::string& name) const { return fs::path(g.out) / name; }

  void input(const fs::path& p) {
    inputs.push_back({{"path", p.generic_string()}, {"fnv1a64", digest(p)}});
  }

  void write(const std::string& name, const std::function<void(std::ostream&)>& body) {
    fs::create_directories(g.out);
    std::ofstream out(path(name), std::ios::binary);
    if (!out) throw ValidationError(fmt::format("cannot write '{}'", path(name).string()));
    body(out);
    if (!out) throw ValidationError(fmt::format("failed writing '{}'", path(name).string()));
    outputs.push_back(name);
  }

  void finish(const std::string& config_dump) {
    json m;
    m["tool"] = "plantsched";
    m["version"] = kVersion;
    m["command"] = command;
    m["seed"] = g.seed;
    m["threads"] = g.threads;
    m["inputs"] = inputs;
    m["outputs"] = outputs;
    m["details"] = details;
    m["config"] = config_dump;
    fs::create_directories(g.out);
    std::ofstream out(path("manifest.json"), std::ios::binary);
    out << m.dump(2) << '\n';
  }

  static std::string digest(const fs::path& p) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto visit = [&](const fs::path& file) {
      std::ifstream in(file, std::ios::binary);
      if (!in) throw ValidationError(fmt::format("cannot open '{}'", file.string()));
      char buf[1 << 15];
      while (in.read(buf, sizeof buf) || in.gcount() > 0) {
        for (std::streamsize k = 0; k < in.gcount(); ++k) {
          h ^= static_cast<unsigned char>(buf[k]);
          h *= 0x100000001b3ULL;
        }
      }
    };
    if (fs::is_directory(p)) {
      std::vector<fs::path> files;
      for (const auto& e : fs::directory_iterator(p)) files.push_back(e.path());
      std::sort(files.begin(), files.end());
      for (const auto& f : files) visit(f);
    } else {
      visit(p);
    }
    return fmt::format("{:016x}", h);
  }
};

DailyGduSeries site_series(const fs::path& path, std::int32_t site, const CsvOptions& csv) {
  for (auto& s : read_gdu_history(path, csv)) {
    if (s.site.value == site) return s;
  }
  throw ValidationError(fmt::format("'{}' has no rows for site {}", path.string(), site));
}

json accuracy_json(const forecaster::AccuracyReport& r) {
  json j;
  j["rmse"] = r.rmse;
  j["rrmse"] = r.rrmse;
  j["r2"] = r.r2;
  auto& folds = j["folds"] = json::array();
  for (const auto& f : r.folds) {
    folds.push_back({{"fold", f.fold},
                     {"train_first", format_iso_date(f.train_first)},
                     {"train_last", format_iso_date(f.train_last)},
                     {"test_first", format_iso_date(f.test_first)},
                     {"test_last", format_iso_date(f.test_last)},
                     {"rmse", f.rmse},
                     {"rrmse", f.rrmse},
                     {"r2", f.r2}});
  }
  return j;
}

void scenarios_svg(std::ostream& out, const rio::ScenarioSet& set) {
  constexpr double W = 900, H = 420, L = 60, R = 20, T = 40, B = 50;
  double top = 1.0;
  for (const auto& s : set.scenarios)
    for (const auto v : s.series.values) top = std::max(top, v);
  top *= 1.05;
  const auto n = set.scenarios.front().series.values.size();
  const double dx = (W - L - R) / static_cast<double>(std::max<std::size_t>(1, n - 1));
  out << fmt::format(R"svg(<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" font-family="sans-serif" font-size="11">)svg",
                     W, H)
      << '\n';
  out << fmt::format(R"svg(<text x="{}" y="20" font-size="14">GDU scenarios from {} ({} days)</text>)svg", L,
                     format_iso_date(set.scenarios.front().series.start_day), n)
      << '\n';
  out << fmt::format(R"svg(<line x1="{0}" y1="{1}" x2="{0}" y2="{2}" stroke="black"/>)svg", L, T, H - B) << '\n';
  out << fmt::format(R"svg(<line x1="{0}" y1="{1}" x2="{2}" y2="{1}" stroke="black"/>)svg", L, H - B, W - R) << '\n';
  for (int k = 0; k <= 4; ++k) {
    const double v = top * k / 4.0;
    out << fmt::format(R"svg(<text x="{}" y="{:.1f}" text-anchor="end">{:.0f}</text>)svg", L - 5,
                       H - B - (H - T - B) * v / top + 4, v)
        << '\n';
  }
  for (const auto& s : set.scenarios) {
    out << R"svg(<polyline fill="none" stroke="#3366aa" stroke-opacity="0.35" stroke-width="0.7" points=")svg";
    for (std::size_t d = 0; d < n; ++d) {
      out << fmt::format("{:.1f},{:.1f} ", L + dx * static_cast<double>(d),
                         H - B - (H - T - B) * s.series.values[d] / top);
    }
    out << "\"/>\n";
  }
  out << fmt::format(R"svg(<text x="{}" y="{}" text-anchor="middle">day</text>)svg", L + (W - L - R) / 2, H - 10)
      << '\n';
  out << "</svg>\n";
}

sched::Engine parse_engine(const std::string& s) {
  if (s == "auto") return sched::Engine::Auto;
  if (s == "exact") return sched::Engine::Exact;
  return sched::Engine::Heuristic;
}

std::pair<std::int32_t, std::int32_t> parse_range(const std::string& text, const char* what) {
  const auto colon = text.find(':');
  try {
    if (colon == std::string::npos) {
      const auto v = std::stoi(text);
      return {v, v};
    }
    return {std::stoi(text.substr(0, colon)), std::stoi(text.substr(colon + 1))};
  } catch (const std::exception&) {
    throw ValidationError(fmt::format("{} must look like A:B, got '{}'", what, text));
  }
}

/// Populations of one site, scenarios, and their harvest table.
struct Instance {
  std::vector<SeedPopulation> populations;
  rio::ScenarioSet scenarios;
  std::vector<double> probabilities;
  harvest::HarvestTable table;
};

Instance load_instance(Run& run, const std::string& populations, const std::string& scenarios, std::int32_t site) {
  Instance in;
  for (auto& p : read_populations(populations, run.g.csv)) {
    if (p.site.value == site) in.populations.push_back(std::move(p));
  }
  if (in.populations.empty()) throw ValidationError(fmt::format("'{}' has no populations at site {}", populations, site));
  in.scenarios = rio::read_scenarios(scenarios);
  in.scenarios.validate();
  const auto scenario_site = in.scenarios.scenarios.front().series.site.value;
  if (scenario_site != site) {
    throw ValidationError(fmt::format("scenarios in '{}' belong to site {}, not {}", scenarios, scenario_site, site));
  }
  run.input(populations);
  run.input(scenarios);
  in.probabilities = in.scenarios.probabilities();
  std::vector<DailyGduSeries> series;
  for (const auto& s : in.scenarios.scenarios) series.push_back(s.series);
  const WeekMembership weeks(series.front().start_day, series.front().size());
  in.table = harvest::build_harvest_table(in.populations, series, weeks);
  run.details["populations"] = in.populations.size();
  run.details["scenarios"] = series.size();
  run.details["unharvestable_triples"] = in.table.unharvestable_count();
  run.details["literal_bound_violations"] = in.table.literal_bound_violations();
  return in;
}

std::int64_t resolve_capacity(std::optional<std::int64_t> flag, std::int32_t site) {
  if (flag) return *flag;
  if (const auto c = default_capacity(SiteId{site})) return c->capacity;
  throw ValidationError(fmt::format("no default capacity for site {}; pass --capacity", site));
}

void emit_schedule_outputs(Run& run, const Instance& in, std::span<const DayIndex> assignment,
                           const sched::ScheduleReport& report, const sched::HarvestProfile* baseline,
                           const std::string& title, json extra) {
  run.write("schedule.csv", [&](std::ostream& o) {
    sched::write_schedule_csv(o, in.populations, assignment, in.table, in.probabilities);
  });
  json j = sched::report_to_json(report);
  for (auto& [k, v] : extra.items()) j[k] = v;
  run.write("report.json", [&](std::ostream& o) { o << j.dump(2) << '\n'; });
  run.write("profile.csv", [&](std::ostream& o) { sched::write_profile_csv(o, report.profile); });
  run.write("profile.svg", [&](std::ostream& o) {
    sched::write_profile_svg(o, report.profile, in.probabilities, report.capacity, baseline, title);
  });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Seed planting scheduler: GDU forecasting, weather scenarios and harvest-capacity planning"};
  app.require_subcommand(1);
  app.set_config("--config", "", "TOML file with option values; flags given on the command line win");
  Globals g;
  app.add_option("--out", g.out, "Output directory")->capture_default_str();
  app.add_option("--seed", g.seed, "Random seed")->capture_default_str();
  app.add_option("--threads", g.threads, "Worker threads")->check(CLI::Range(1u, 256u))->capture_default_str();
  std::vector<std::string> header_renames;
  std::string epoch;
  app.add_option("--map", header_renames, "Rename an input CSV column, FILE_NAME=EXPECTED_NAME (repeatable)");
  app.add_option("--epoch", epoch, "Date that integer planting index 1 refers to (default 2020-01-01)");

  // synth
  auto* synth = app.add_subcommand("synth", "Generate a synthetic GDU history and population list");
  int synth_case = 1;
  std::optional<std::int32_t> synth_count;
  std::int32_t synth_site = 0;
  std::int32_t first_year = 2009, last_year = 2019;
  synth->add_option("--case", synth_case, "Quantity distribution: 1 = N(250,100), 2 = N(350,150)")
      ->check(CLI::IsMember({1, 2}))
      ->capture_default_str();
  synth->add_option("--populations", synth_count, "Number of populations (default 2569)");
  synth->add_option("--site", synth_site, "Site id")->capture_default_str();
  synth->add_option("--first-year", first_year, "First history year")->capture_default_str();
  synth->add_option("--last-year", last_year, "Last history year")->capture_default_str();

  // forecast
  auto* forecast = app.add_subcommand("forecast", "Train the GDU forecaster and cross-validate it");
  std::string history_path;
  std::int32_t site = 0;
  int epochs = 200;
  bool no_cv = false;
  int folds = 5;
  forecast->add_option("--history", history_path, "GDU history CSV")->required()->check(CLI::ExistingFile);
  forecast->add_option("--site", site, "Site id")->capture_default_str();
  forecast->add_option("--epochs", epochs, "Maximum training epochs")->check(CLI::NonNegativeNumber)->capture_default_str();
  forecast->add_flag("--no-cv", no_cv, "Skip time-wise cross-validation");
  forecast->add_option("--folds", folds, "Cross-validation folds")->check(CLI::Range(1, 20))->capture_default_str();

  // scenarios
  auto* scen = app.add_subcommand("scenarios", "Generate Monte Carlo GDU scenarios");
  std::string model_path;
  std::size_t count = 25;
  std::int32_t horizon = kHorizonDays;
  Eigen::Index gp_points = 1000;
  scen->add_option("--model", model_path, "Model file from `forecast`")->required()->check(CLI::ExistingFile);
  scen->add_option("--history", history_path, "GDU history CSV")->required()->check(CLI::ExistingFile);
  scen->add_option("--site", site, "Site id")->capture_default_str();
  scen->add_option("--count", count, "Number of scenarios")->check(CLI::Range(1, 10000))->capture_default_str();
  scen->add_option("--horizon", horizon, "Days per scenario")->check(CLI::Range(1, 5000))->capture_default_str();
  scen->add_option("--gp-points", gp_points, "Residual points kept for the GP")
      ->check(CLI::Range(2, 5000))
      ->capture_default_str();

  // schedule
  auto* schedule = app.add_subcommand("schedule", "Optimize planting days");
  std::string populations_path, scenarios_dir, baseline_path, mode = "case1", engine = "auto";
  std::optional<std::int64_t> capacity;
  std::optional<std::int32_t> window_first, window_last;
  std::string sweep_first, sweep_last;
  std::int32_t sweep_radius = 8;
  sched::ExactConfig exact;
  sched::HeuristicConfig heuristic;
  double exact_limit = 1e7;
  bool write_table = false;
  schedule->add_option("--populations", populations_path, "Population CSV")->required()->check(CLI::ExistingFile);
  schedule->add_option("--scenarios", scenarios_dir, "Scenario directory")->required()->check(CLI::ExistingDirectory);
  schedule->add_option("--site", site, "Site id")->capture_default_str();
  schedule->add_option("--mode", mode, "case1, case2 or sweep")
      ->check(CLI::IsMember({"case1", "case2", "sweep"}))
      ->capture_default_str();
  schedule->add_option("--capacity", capacity, "Weekly capacity (default: the site's)");
  schedule->add_option("--engine", engine, "auto, exact or heuristic")
      ->check(CLI::IsMember({"auto", "exact", "heuristic"}))
      ->capture_default_str();
  schedule->add_option("--window-first", window_first, "First allowed harvest week");
  schedule->add_option("--window-last", window_last, "Last allowed harvest week");
  schedule->add_option("--sweep-first", sweep_first, "Range A:B of first weeks to sweep");
  schedule->add_option("--sweep-last", sweep_last, "Range A:B of last weeks to sweep");
  schedule->add_option("--sweep-radius", sweep_radius, "Default sweep half-width in weeks")
      ->check(CLI::Range(0, 52))
      ->capture_default_str();
  schedule->add_option("--baseline", baseline_path, "Schedule CSV to compare against")->check(CLI::ExistingFile);
  schedule->add_option("--iterations", heuristic.iterations, "Heuristic evaluation budget")->capture_default_str();
  schedule->add_option("--restarts", heuristic.restarts, "Heuristic restarts")->check(CLI::Range(0, 1000))->capture_default_str();
  schedule->add_option("--node-budget", exact.node_budget, "Exact search node budget")->capture_default_str();
  schedule->add_option("--exact-limit", exact_limit, "Largest search space handed to the exact engine")
      ->capture_default_str();
  schedule->add_flag("--write-table", write_table, "Also write harvest_table.csv");

  // evaluate
  auto* evaluate = app.add_subcommand("evaluate", "Report on an existing schedule");
  std::string schedule_path;
  evaluate->add_option("--populations", populations_path, "Population CSV")->required()->check(CLI::ExistingFile);
  evaluate->add_option("--scenarios", scenarios_dir, "Scenario directory")->required()->check(CLI::ExistingDirectory);
  evaluate->add_option("--schedule", schedule_path, "Schedule CSV")->required()->check(CLI::ExistingFile);
  evaluate->add_option("--site", site, "Site id")->capture_default_str();
  evaluate->add_option("--capacity", capacity, "Weekly capacity (default: the site's)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  Run run{g};
  try {
    for (const auto& r : header_renames) {
      const auto eq = r.find('=');
      if (eq == std::string::npos || eq == 0 || eq + 1 == r.size()) {
        throw ValidationError(fmt::format("--map expects OLD=NEW, got '{}'", r));
      }
      g.csv.header_map[r.substr(0, eq)] = r.substr(eq + 1);
    }
    if (!epoch.empty()) g.csv.epoch = parse_iso_date(epoch);
    if (*synth) {
      run.command = "synth";
      auto spec = synth_case == 1 ? synthetic_case1_spec() : synthetic_case2_spec();
      if (synth_count) spec.population_count = *synth_count;
      spec.site = SiteId{synth_site};
      spec.history_first_year = first_year;
      spec.history_last_year = last_year;
      spec.rng_seed = g.seed;
      validate_synthetic_spec(spec);
      const auto inst = generate_synthetic_instance(spec);
      run.write("history.csv", [&](std::ostream& o) { write_gdu_history(o, std::span(&inst.history, 1)); });
      run.write("populations.csv", [&](std::ostream& o) { write_populations(o, inst.populations); });
      run.details["case"] = synth_case;
      run.details["spec"] = {{"population_count", spec.population_count},
                             {"quantity_mean", spec.quantity_mean},
                             {"quantity_sd", spec.quantity_sd},
                             {"gdu_seasonal_mean", spec.gdu_seasonal_mean},
                             {"gdu_seasonal_amplitude", spec.gdu_seasonal_amplitude},
                             {"gdu_noise_sd", spec.gdu_noise_sd},
                             {"gdu_peak_day_of_year", spec.gdu_peak_day_of_year},
                             {"window_width", {spec.window_width_min, spec.window_width_max}},
                             {"required_gdu", {spec.required_gdu_min, spec.required_gdu_max}},
                             {"earliest_plant", {spec.earliest_plant_min, spec.earliest_plant_max}},
                             {"history_years", {spec.history_first_year, spec.history_last_year}},
                             {"site", spec.site.value},
                             {"rng_seed", spec.rng_seed}};
    } else if (*forecast) {
      run.command = "forecast";
      const auto history = site_series(history_path, site, g.csv);
      run.input(history_path);
      forecaster::TrainConfig config;
      config.epochs = epochs;
      config.rng_seed = g.seed;
      const auto trained = forecaster::train_detailed(history, config);
      run.write("model.bin", [&](std::ostream& o) { forecaster::save_model(o, trained.model); });
      run.details["site"] = site;
      run.details["epochs_run"] = trained.epochs_run;
      run.details["best_epoch"] = trained.best_epoch;
      if (!no_cv) {
        json report;
        report["site"] = site;
        report["model"] = accuracy_json(forecaster::cross_validate(history, config, folds));
        report["persistence"] = accuracy_json(forecaster::persistence_cross_validate(history, folds));
        run.write("cv_report.json", [&](std::ostream& o) { o << report.dump(2) << '\n'; });
      }
    } else if (*scen) {
      run.command = "scenarios";
      const auto model = forecaster::load_model(fs::path(model_path));
      const auto history = site_series(history_path, site, g.csv);
      run.input(model_path);
      run.input(history_path);
      rio::GpFitConfig gp_config;
      gp_config.max_points = gp_points;
      gp_config.seed = g.seed;
      const auto gp = rio::fit_gp(rio::residual_dataset(model, history), gp_config);
      rio::ScenarioConfig config;
      config.count = count;
      config.rng_seed = g.seed;
      config.horizon = horizon;
      config.start_day = history.end_day() + 1;
      config.threads = g.threads;
      const auto set = rio::generate_scenarios(model, gp, history, config);
      rio::write_scenarios(g.out, set);
      run.outputs.push_back("scenarios.csv");
      run.outputs.push_back("scenarios.json");
      run.write("scenarios.svg", [&](std::ostream& o) { scenarios_svg(o, set); });
      const auto& h = gp.hyper();
      run.details["gp"] = {{"sigma_in", h.sigma_in},     {"len_in", h.len_in},     {"sigma_out", h.sigma_out},
                           {"len_out", h.len_out},       {"noise_sd", h.noise_sd}, {"points", gp.data().size()},
                           {"jitter_escalations", gp.jitter_escalations()}};
      run.details["start_date"] = format_iso_date(config.start_day);
    } else if (*schedule) {
      run.command = "schedule";
      const auto in = load_instance(run, populations_path, scenarios_dir, site);
      const auto eng = parse_engine(engine);
      heuristic.seed = g.seed;
      std::optional<sched::WindowLimit> window;
      if (window_first || window_last) {
        const auto full = sched::full_window(in.table, in.populations);
        window = sched::WindowLimit{WeekIndex{window_first.value_or(full.first_week.value)},
                                    WeekIndex{window_last.value_or(full.last_week.value)}};
        window->validate();
      }
      if (write_table) {
        run.write("harvest_table.csv", [&](std::ostream& o) { in.table.write_csv(o, in.populations); });
      }

      std::optional<sched::ScheduleReport> base_report;
      json extra;
      extra["mode"] = mode;
      extra["site"] = site;

      sched::PlantingSchedule result;
      std::int64_t cap = 0;
      if (mode == "case2") {
        const auto r = sched::solve_case2(in.table, in.populations, in.probabilities, window, eng, exact, heuristic,
                                          exact_limit);
        result = r.schedule;
        cap = r.min_capacity;
        extra["min_capacity"] = r.min_capacity;
        extra["proven_optimal"] = r.proven_optimal;
      } else {
        cap = resolve_capacity(capacity, site);
        if (mode == "case1") {
          result = sched::solve_case1(in.table, in.populations, in.probabilities, cap, window, eng, exact, heuristic,
                                      exact_limit);
        } else {
          const auto bounds = window ? *window : sched::full_window(in.table, in.populations);
          sched::SweepConfig config;
          if (sweep_first.empty() || sweep_last.empty()) {
            const auto free = sched::solve_case1(in.table, in.populations, in.probabilities, cap, bounds, eng, exact,
                                                 heuristic, exact_limit);
            config = sched::default_sweep_config(free, bounds, sweep_radius);
          }
          if (!sweep_first.empty()) {
            const auto [a, b] = parse_range(sweep_first, "--sweep-first");
            config.first_min = WeekIndex{a};
            config.first_max = WeekIndex{b};
          }
          if (!sweep_last.empty()) {
            const auto [a, b] = parse_range(sweep_last, "--sweep-last");
            config.last_min = WeekIndex{a};
            config.last_max = WeekIndex{b};
          }
          config.engine = eng;
          config.exact = exact;
          config.heuristic = heuristic;
          config.exact_limit = exact_limit;
          config.threads = g.threads;
          auto swept = sched::sweep_harvest_windows(in.table, in.populations, in.probabilities, cap, config);
          run.write("sweep_grid.csv", [&](std::ostream& o) { sched::write_sweep_csv(o, swept.grid); });
          run.write("sweep.svg", [&](std::ostream& o) {
            sched::write_sweep_svg(o, swept.grid, fmt::format("Pairwise objective by allowed harvest weeks, site {}", site));
          });
          extra["sweep_cells"] = swept.grid.size();
          result = std::move(swept.schedule);
        }
      }
      extra["engine"] = result.engine;
      extra["solve_window"] = {result.window.first_week.value, result.window.last_week.value};
      extra["solve_case1_objective"] = result.objective_case1;
      extra["solve_pairwise_objective"] = result.pairwise_objective;

      const auto report = sched::evaluate_schedule(result.assignment, in.table, cap, in.probabilities);
      if (!baseline_path.empty()) {
        std::ifstream bin(baseline_path, std::ios::binary);
        const auto days = sched::read_schedule_csv(bin, in.populations);
        run.input(baseline_path);
        base_report = sched::evaluate_schedule(days, in.table, cap, in.probabilities);
        extra["baseline"] = sched::report_to_json(*base_report);
      }
      emit_schedule_outputs(run, in, result.assignment, report, base_report ? &base_report->profile : nullptr,
                            fmt::format("Expected weekly harvest, site {} ({})", site, mode), extra);
      run.details["engine"] = result.engine;
    } else if (*evaluate) {
      run.command = "evaluate";
      const auto in = load_instance(run, populations_path, scenarios_dir, site);
      std::ifstream sin(schedule_path, std::ios::binary);
      const auto days = sched::read_schedule_csv(sin, in.populations);
      run.input(schedule_path);
      const auto cap = resolve_capacity(capacity, site);
      const auto report = sched::evaluate_schedule(days, in.table, cap, in.probabilities);
      run.write("report.json", [&](std::ostream& o) { o << sched::report_to_json(report).dump(2) << '\n'; });
      run.write("profile.csv", [&](std::ostream& o) { sched::write_profile_csv(o, report.profile); });
      run.write("profile.svg", [&](std::ostream& o) {
        sched::write_profile_svg(o, report.profile, in.probabilities, cap, nullptr,
                                 fmt::format("Expected weekly harvest, site {}", site));
      });
    }
    run.finish(app.config_to_str(true, false));
  } catch (const InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << '\n';
    if (!e.binding_weeks().empty()) {
      std::cerr << "binding weeks:";
      for (const auto w : e.binding_weeks()) std::cerr << ' ' << w;
      std::cerr << '\n';
    }
    return 3;
  } catch (const BudgetError& e) {
    std::cerr << "budget exhausted: " << e.what() << '\n';
    return 4;
  } catch (const ValidationError& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return 2;
  } catch (const ShapeError& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
