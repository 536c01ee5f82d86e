#include "plantsched/rio/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <thread>

#include <fmt/format.h>
#include <json.hpp>

#include "plantsched/csv.hpp"
#include "plantsched/errors.hpp"

namespace plantsched::rio {

DailyGduSeries rollout(const forecaster::ForecastModel& model, const GpResidualModel& gp,
                       std::span<const double> seed_window, std::int32_t horizon, DayIndex start_day, SiteId site,
                       std::mt19937_64& rng) {
  const auto w = static_cast<std::size_t>(model.window);
  if (seed_window.size() < w) {
    throw ValidationError(fmt::format("rollout needs {} seed days, got {}", w, seed_window.size()));
  }
  if (horizon < 0) throw ValidationError("rollout horizon must be non-negative");
  std::vector<double> window(seed_window.end() - static_cast<std::ptrdiff_t>(w), seed_window.end());
  std::vector<double> z(w);
  std::normal_distribution<double> standard(0.0, 1.0);

  DailyGduSeries out{site, start_day, {}};
  out.values.reserve(static_cast<std::size_t>(horizon));
  for (std::int32_t t = 0; t < horizon; ++t) {
    for (std::size_t j = 0; j < w; ++j) z[j] = model.normalize(window[j]);
    const auto f = forecaster::forward(model, z);
    const auto post = gp.posterior(f.features, f.prediction);
    const double sample = f.prediction + post.mean + std::sqrt(post.variance) * standard(rng);
    const double gdu = std::max(0.0, sample);
    out.values.push_back(gdu);
    std::rotate(window.begin(), window.begin() + 1, window.end());
    window.back() = gdu;
  }
  return out;
}

std::vector<double> ScenarioSet::probabilities() const {
  std::vector<double> p;
  p.reserve(scenarios.size());
  for (const auto& s : scenarios) p.push_back(s.probability);
  return p;
}

void ScenarioSet::validate() const {
  if (scenarios.empty()) throw ValidationError("scenario set is empty");
  double total = 0.0;
  for (std::size_t k = 0; k < scenarios.size(); ++k) {
    const auto& s = scenarios[k];
    if (!(s.probability >= 0.0)) throw ValidationError(fmt::format("scenario {} has a negative probability", k));
    total += s.probability;
    if (s.series.size() != horizon_days || s.series.start_day != scenarios.front().series.start_day) {
      throw ValidationError(fmt::format("scenario {} does not span the {}-day horizon", k, horizon_days));
    }
    if (std::any_of(s.series.values.begin(), s.series.values.end(), [](double v) { return !(v >= 0.0); })) {
      throw ValidationError(fmt::format("scenario {} contains negative GDU values", k));
    }
  }
  if (std::abs(total - 1.0) > 1e-9) throw ValidationError(fmt::format("scenario probabilities sum to {}", total));
}

std::uint64_t scenario_seed(std::uint64_t set_seed, std::size_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(set_seed), static_cast<std::uint32_t>(set_seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  std::array<std::uint32_t, 2> words{};
  seq.generate(words.begin(), words.end());
  return (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
}

ScenarioSet generate_scenarios(const forecaster::ForecastModel& model, const GpResidualModel& gp,
                               const DailyGduSeries& history, const ScenarioConfig& config) {
  if (config.count < 1) throw ValidationError("scenario count must be at least 1");
  const auto w = static_cast<std::size_t>(model.window);
  if (history.values.size() < w) throw ValidationError("history is shorter than the forecast window");
  const std::span<const double> seed_window(history.values.data() + history.values.size() - w, w);

  ScenarioSet set;
  set.rng_seed = config.rng_seed;
  set.horizon_days = config.horizon;
  set.scenarios.resize(config.count);
  const double p = 1.0 / static_cast<double>(config.count);

  const auto run = [&](std::size_t k) {
    const auto seed = scenario_seed(config.rng_seed, k);
    std::mt19937_64 rng(seed);
    set.scenarios[k] = Scenario{rollout(model, gp, seed_window, config.horizon, config.start_day, history.site, rng),
                                p, seed};
  };

  const unsigned threads = std::max(1u, std::min<unsigned>(config.threads, static_cast<unsigned>(config.count)));
  if (threads == 1) {
    for (std::size_t k = 0; k < config.count; ++k) run(k);
  } else {
    std::vector<std::jthread> pool;
    std::vector<std::exception_ptr> errors(threads);
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        try {
          for (std::size_t k = t; k < config.count; k += threads) run(k);
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    }
    pool.clear();
    for (const auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }
  return set;
}

void write_scenarios(const std::filesystem::path& dir, const ScenarioSet& set) {
  set.validate();
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir / "scenarios.csv", std::ios::binary);
    if (!out) throw ValidationError(fmt::format("cannot write '{}'", (dir / "scenarios.csv").string()));
    out << "scenario,day,gdu\n";
    for (std::size_t k = 0; k < set.scenarios.size(); ++k) {
      const auto& s = set.scenarios[k].series;
      for (std::int32_t d = 0; d < s.size(); ++d) {
        out << fmt::format("{},{},{}\n", k, (s.start_day + d).value, s.values[static_cast<std::size_t>(d)]);
      }
    }
  }
  nlohmann::ordered_json meta;
  meta["format_version"] = 1;
  meta["count"] = set.scenarios.size();
  meta["horizon_days"] = set.horizon_days;
  meta["start_day"] = set.scenarios.front().series.start_day.value;
  meta["site"] = set.scenarios.front().series.site.value;
  meta["rng_seed"] = set.rng_seed;
  meta["probabilities"] = set.probabilities();
  auto seeds = nlohmann::ordered_json::array();
  for (const auto& s : set.scenarios) seeds.push_back(s.seed);
  meta["seeds"] = seeds;
  std::ofstream out(dir / "scenarios.json", std::ios::binary);
  if (!out) throw ValidationError(fmt::format("cannot write '{}'", (dir / "scenarios.json").string()));
  out << meta.dump(2) << '\n';
}

ScenarioSet read_scenarios(const std::filesystem::path& dir) {
  std::ifstream meta_in(dir / "scenarios.json", std::ios::binary);
  if (!meta_in) throw ValidationError(fmt::format("cannot open '{}'", (dir / "scenarios.json").string()));
  nlohmann::json meta;
  try {
    meta = nlohmann::json::parse(meta_in);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(fmt::format("scenarios.json: {}", e.what()));
  }
  std::ifstream in(dir / "scenarios.csv", std::ios::binary);
  if (!in) throw ValidationError(fmt::format("cannot open '{}'", (dir / "scenarios.csv").string()));
  const auto table = csv::read(in);
  const auto c_s = table.column("scenario");
  const auto c_d = table.column("day");
  const auto c_g = table.column("gdu");

  ScenarioSet set;
  try {
    const auto count = meta.at("count").get<std::size_t>();
    set.rng_seed = meta.at("rng_seed").get<std::uint64_t>();
    set.horizon_days = meta.at("horizon_days").get<std::int32_t>();
    const auto start = DayIndex{meta.at("start_day").get<std::int32_t>()};
    const auto site = SiteId{meta.at("site").get<std::int32_t>()};
    const auto probs = meta.at("probabilities").get<std::vector<double>>();
    const auto seeds = meta.at("seeds").get<std::vector<std::uint64_t>>();
    if (probs.size() != count || seeds.size() != count) {
      throw ValidationError("scenarios.json: probability/seed lists do not match count");
    }
    set.scenarios.resize(count);
    for (std::size_t k = 0; k < count; ++k) {
      set.scenarios[k] = Scenario{DailyGduSeries{site, start, {}}, probs[k], seeds[k]};
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(fmt::format("scenarios.json: {}", e.what()));
  }
  for (const auto& row : table.rows) {
    const auto s = csv::to_int(row.fields[c_s], row.line, "scenario");
    const auto d = csv::to_int(row.fields[c_d], row.line, "day");
    const auto g = csv::to_double(row.fields[c_g], row.line, "gdu");
    if (s < 0 || static_cast<std::size_t>(s) >= set.scenarios.size()) {
      throw ParseError(row.line, fmt::format("scenario {} not declared in scenarios.json", s));
    }
    auto& series = set.scenarios[static_cast<std::size_t>(s)].series;
    if (d != series.start_day.value + series.size()) {
      throw ParseError(row.line, fmt::format("scenario {}: day {} out of sequence", s, d));
    }
    series.values.push_back(g);
  }
  set.validate();
  return set;
}

}  // namespace plantsched::rio
