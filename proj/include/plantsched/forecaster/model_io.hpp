#pragma once

#include <filesystem>
#include <iosfwd>

#include "plantsched/forecaster/model.hpp"

namespace plantsched::forecaster {

// Binary layout, little-endian:
//   char[4]  magic "PSFM"
//   u32      format version (1)
//   u32      window, input size, lstm units, dense units
//   f64      input mean, input scale
//   u64      parameter count N
//   f64[N]   parameters in NetworkParams::flatten() order
inline constexpr std::uint32_t kModelFormatVersion = 1;

void save_model(std::ostream& out, const ForecastModel& model);
ForecastModel load_model(std::istream& in);

void save_model(const std::filesystem::path& path, const ForecastModel& model);
ForecastModel load_model(const std::filesystem::path& path);

}  // namespace plantsched::forecaster
