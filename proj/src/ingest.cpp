#include "plantsched/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <ostream>
#include <random>

#include <fmt/format.h>

#include "plantsched/csv.hpp"
#include "plantsched/errors.hpp"

namespace plantsched {
namespace {

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError(fmt::format("cannot open '{}'", path.string()));
  return in;
}

struct DatedValue {
  DayIndex day;
  double gdu;
  std::size_t line;
};

}  // namespace

std::vector<DailyGduSeries> parse_gdu_history(std::istream& in, const CsvOptions& options) {
  const auto table = csv::read(in, options.header_map);
  if (table.rows.empty()) throw ValidationError("no rows");
  const auto c_site = table.column("site");
  const auto c_date = table.column("date");
  const auto c_gdu = table.column("gdu");

  std::map<std::int32_t, std::vector<DatedValue>> by_site;
  for (const auto& row : table.rows) {
    const auto site = csv::to_int(row.fields[c_site], row.line, "site");
    if (site < 0 || site > std::numeric_limits<std::int32_t>::max()) {
      throw ParseError(row.line, fmt::format("site {} must be non-negative", site));
    }
    DayIndex day;
    try {
      day = parse_iso_date(row.fields[c_date]);
    } catch (const ValidationError& e) {
      throw ParseError(row.line, e.what());
    }
    const double gdu = csv::to_double(row.fields[c_gdu], row.line, "gdu");
    if (gdu < 0.0) throw ParseError(row.line, fmt::format("negative GDU {}", gdu));
    by_site[static_cast<std::int32_t>(site)].push_back({day, gdu, row.line});
  }

  std::vector<DailyGduSeries> out;
  for (auto& [site, rows] : by_site) {
    std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.day < b.day; });
    DailyGduSeries series{SiteId{site}, rows.front().day, {}};
    series.values.reserve(rows.size());
    for (std::size_t k = 0; k < rows.size(); ++k) {
      if (k > 0) {
        const DayIndex expected = rows[k - 1].day + 1;
        if (rows[k].day == rows[k - 1].day) {
          throw ParseError(rows[k].line, fmt::format("duplicate day {} for site {}", format_iso_date(rows[k].day), site));
        }
        if (rows[k].day != expected) {
          throw ValidationError(fmt::format("site {}: missing day {} expected (next row is {} at line {})", site,
                                            format_iso_date(expected), format_iso_date(rows[k].day), rows[k].line));
        }
      }
      series.values.push_back(rows[k].gdu);
    }
    out.push_back(std::move(series));
  }
  return out;
}

std::vector<DailyGduSeries> read_gdu_history(const std::filesystem::path& path, const CsvOptions& options) {
  auto in = open_input(path);
  return parse_gdu_history(in, options);
}

void write_gdu_history(std::ostream& out, std::span<const DailyGduSeries> series) {
  out << "site,date,gdu\n";
  for (const auto& s : series) {
    for (std::int32_t k = 0; k < s.size(); ++k) {
      out << fmt::format("{},{},{}\n", s.site.value, format_iso_date(s.start_day + k), s.values[static_cast<std::size_t>(k)]);
    }
  }
}

std::vector<SeedPopulation> parse_populations(std::istream& in, const CsvOptions& options) {
  const auto table = csv::read(in, options.header_map);
  if (table.rows.empty()) throw ValidationError("no rows");
  const auto c_id = table.column("id");
  const auto c_site = table.column("site");
  const auto c_early = table.column("early_plant");
  const auto c_late = table.column("late_plant");
  const auto c_gdu = table.column("required_gdu");
  const auto c_qty = table.column("quantity");

  const auto integer_column = [&](std::size_t c) {
    return std::all_of(table.rows.begin(), table.rows.end(),
                       [c](const csv::Row& r) { return csv::looks_like_integer(r.fields[c]); });
  };
  const bool early_is_index = integer_column(c_early);
  const bool late_is_index = integer_column(c_late);

  const auto to_day = [&](const csv::Row& row, std::size_t c, bool is_index, std::string_view what) -> std::int64_t {
    if (is_index) return options.epoch.value + csv::to_int(row.fields[c], row.line, what) - 1;
    try {
      return parse_iso_date(row.fields[c]).value;
    } catch (const ValidationError& e) {
      throw ParseError(row.line, e.what());
    }
  };

  std::vector<SeedPopulation> out;
  out.reserve(table.rows.size());
  for (const auto& row : table.rows) {
    RawPopulation raw;
    raw.id = row.fields[c_id];
    raw.site = csv::to_int(row.fields[c_site], row.line, "site");
    raw.earliest_plant = to_day(row, c_early, early_is_index, "early_plant");
    raw.latest_plant = to_day(row, c_late, late_is_index, "late_plant");
    raw.required_gdu = csv::to_double(row.fields[c_gdu], row.line, "required_gdu");
    raw.harvest_quantity = csv::to_int(row.fields[c_qty], row.line, "quantity");
    try {
      out.push_back(validate_population(raw));
    } catch (const ValidationError& e) {
      throw ParseError(row.line, e.what());
    }
  }
  return out;
}

std::vector<SeedPopulation> read_populations(const std::filesystem::path& path, const CsvOptions& options) {
  auto in = open_input(path);
  return parse_populations(in, options);
}

void write_populations(std::ostream& out, std::span<const SeedPopulation> populations) {
  out << "id,site,early_plant,late_plant,required_gdu,quantity\n";
  for (const auto& p : populations) {
    out << fmt::format("{},{},{},{},{},{}\n", p.id, p.site.value, format_iso_date(p.earliest_plant),
                       format_iso_date(p.latest_plant), p.required_gdu, p.harvest_quantity);
  }
}

SyntheticSpec synthetic_case1_spec() { return SyntheticSpec{}; }

SyntheticSpec synthetic_case2_spec() {
  SyntheticSpec spec;
  spec.quantity_mean = 350.0;
  spec.quantity_sd = 150.0;
  return spec;
}

void validate_synthetic_spec(const SyntheticSpec& spec) {
  std::vector<std::string> issues;
  if (spec.population_count < 0) issues.emplace_back("population_count must be non-negative");
  if (!(spec.quantity_sd >= 0.0)) issues.emplace_back("quantity_sd must be non-negative");
  if (!(spec.gdu_noise_sd >= 0.0)) issues.emplace_back("gdu_noise_sd must be non-negative");
  if (!(spec.gdu_seasonal_amplitude >= 0.0)) issues.emplace_back("gdu_seasonal_amplitude must be non-negative");
  if (!std::isfinite(spec.quantity_mean) || !std::isfinite(spec.gdu_seasonal_mean)) {
    issues.emplace_back("means must be finite");
  }
  if (spec.window_width_min < 1 || spec.window_width_min > spec.window_width_max) {
    issues.emplace_back("window width range must be non-empty with minimum >= 1");
  }
  if (!(spec.required_gdu_min >= 0.0) || spec.required_gdu_min > spec.required_gdu_max) {
    issues.emplace_back("required GDU range must be non-empty and non-negative");
  }
  if (spec.earliest_plant_min > spec.earliest_plant_max) issues.emplace_back("earliest planting range is empty");
  if (spec.history_first_year > spec.history_last_year) issues.emplace_back("history year range is empty");
  if (spec.site.value < 0) issues.emplace_back("site must be non-negative");
  if (!issues.empty()) throw ValidationError(std::move(issues));
}

namespace {

DailyGduSeries seasonal_series(const SyntheticSpec& spec, DayIndex first, std::int32_t length, std::mt19937_64& rng) {
  std::normal_distribution<double> noise(0.0, 1.0);
  DailyGduSeries out{spec.site, first, {}};
  out.values.reserve(static_cast<std::size_t>(length));
  for (std::int32_t k = 0; k < length; ++k) {
    const DayIndex d = first + k;
    const double phase = 2.0 * std::numbers::pi * (d.value - spec.gdu_peak_day_of_year) / 365.25;
    double v = spec.gdu_seasonal_mean + spec.gdu_seasonal_amplitude * std::cos(phase);
    // always draw so the stream position does not depend on the noise level
    v += spec.gdu_noise_sd * noise(rng);
    out.values.push_back(std::max(0.0, v));
  }
  return out;
}

}  // namespace

DailyGduSeries synthetic_gdu_series(const SyntheticSpec& spec, DayIndex first, std::int32_t length,
                                    std::uint64_t seed) {
  validate_synthetic_spec(spec);
  if (length < 0) throw ValidationError("series length must be non-negative");
  std::mt19937_64 rng(seed);
  return seasonal_series(spec, first, length, rng);
}

SyntheticInstance generate_synthetic_instance(const SyntheticSpec& spec) {
  validate_synthetic_spec(spec);
  std::mt19937_64 rng(spec.rng_seed);

  const DayIndex first = day_from_civil(spec.history_first_year, 1, 1);
  const DayIndex last = day_from_civil(spec.history_last_year, 12, 31);
  SyntheticInstance inst;
  inst.history = seasonal_series(spec, first, last - first + 1, rng);

  std::normal_distribution<double> quantity(spec.quantity_mean, spec.quantity_sd > 0.0 ? spec.quantity_sd : 1.0);
  std::uniform_int_distribution<std::int32_t> width(spec.window_width_min, spec.window_width_max);
  std::uniform_int_distribution<std::int32_t> start(spec.earliest_plant_min, spec.earliest_plant_max);
  std::uniform_real_distribution<double> required(spec.required_gdu_min, spec.required_gdu_max);

  inst.populations.reserve(static_cast<std::size_t>(spec.population_count));
  for (std::int32_t i = 0; i < spec.population_count; ++i) {
    const double q_draw = quantity(rng);
    const double q = spec.quantity_sd > 0.0 ? q_draw : spec.quantity_mean;
    RawPopulation raw;
    raw.id = fmt::format("P{:05}", i + 1);
    raw.site = spec.site.value;
    raw.earliest_plant = start(rng);
    raw.latest_plant = raw.earliest_plant + width(rng) - 1;
    raw.required_gdu = std::round(required(rng) * 10.0) / 10.0;
    raw.harvest_quantity = std::max<std::int64_t>(1, std::llround(q));
    inst.populations.push_back(validate_population(raw));
  }
  return inst;
}

}  // namespace plantsched
