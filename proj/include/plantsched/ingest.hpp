#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "plantsched/domain.hpp"

namespace plantsched {

struct CsvOptions {
  /// Header renames applied before column lookup: file header -> expected name.
  std::map<std::string, std::string> header_map;
  /// Calendar day that integer planting index 1 refers to.
  DayIndex epoch{0};
};

/// Reads `site,date,gdu` rows. Returns one gap-free series per site, ordered by site.
std::vector<DailyGduSeries> parse_gdu_history(std::istream& in, const CsvOptions& options = {});
std::vector<DailyGduSeries> read_gdu_history(const std::filesystem::path& path, const CsvOptions& options = {});
void write_gdu_history(std::ostream& out, std::span<const DailyGduSeries> series);

/// Reads `id,site,early_plant,late_plant,required_gdu,quantity` rows. Planting columns hold
/// either ISO dates or integer indices (index 1 = options.epoch); each column is detected
/// independently.
std::vector<SeedPopulation> parse_populations(std::istream& in, const CsvOptions& options = {});
std::vector<SeedPopulation> read_populations(const std::filesystem::path& path, const CsvOptions& options = {});
/// Emits planting days as ISO dates.
void write_populations(std::ostream& out, std::span<const SeedPopulation> populations);

struct SyntheticSpec {
  std::int32_t population_count{2569};
  double quantity_mean{250.0};
  double quantity_sd{100.0};

  // daily scale of a warm breeding site: mean ~9, sd ~3, low day-to-day noise
  double gdu_seasonal_mean{9.0};
  double gdu_seasonal_amplitude{4.0};
  double gdu_noise_sd{0.5};
  std::int32_t gdu_peak_day_of_year{196};  // mid-July

  std::int32_t window_width_min{5};
  std::int32_t window_width_max{30};
  double required_gdu_min{900.0};
  double required_gdu_max{1500.0};
  /// Range of the earliest planting day (day indices, inclusive).
  std::int32_t earliest_plant_min{0};
  std::int32_t earliest_plant_max{300};

  std::int32_t history_first_year{2009};
  std::int32_t history_last_year{2019};
  SiteId site{0};
  std::uint64_t rng_seed{1};
};

/// Challenge-shaped defaults: case 1 quantities ~ N(250, 100), case 2 ~ N(350, 150).
SyntheticSpec synthetic_case1_spec();
SyntheticSpec synthetic_case2_spec();

/// Throws ValidationError listing every problem.
void validate_synthetic_spec(const SyntheticSpec& spec);

struct SyntheticInstance {
  DailyGduSeries history;
  std::vector<SeedPopulation> populations;
};

/// Pure function of `spec`: identical specs give bitwise-identical instances.
SyntheticInstance generate_synthetic_instance(const SyntheticSpec& spec);

/// Seasonal sinusoid plus Gaussian noise, clamped at zero, over [first, first + length).
DailyGduSeries synthetic_gdu_series(const SyntheticSpec& spec, DayIndex first, std::int32_t length,
                                    std::uint64_t seed);

}  // namespace plantsched
