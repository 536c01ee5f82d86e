#include "plantsched/forecaster/model_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include <fmt/format.h>

#include "plantsched/errors.hpp"

namespace plantsched::forecaster {
namespace {

static_assert(std::endian::native == std::endian::little, "model files are written on little-endian hosts");

template <typename T>
void put(std::ostream& out, T value) {
  char buf[sizeof(T)];
  std::memcpy(buf, &value, sizeof(T));
  out.write(buf, sizeof(T));
}

template <typename T>
T get(std::istream& in) {
  char buf[sizeof(T)];
  if (!in.read(buf, sizeof(T))) throw ValidationError("model file is truncated");
  T value;
  std::memcpy(&value, buf, sizeof(T));
  return value;
}

}  // namespace

void save_model(std::ostream& out, const ForecastModel& model) {
  model.params.check_shapes();
  out.write("PSFM", 4);
  put<std::uint32_t>(out, kModelFormatVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(model.window));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(model.params.lstm.input_size()));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(model.params.lstm.hidden_size()));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(model.params.head.b_hidden.size()));
  put<double>(out, model.input_mean);
  put<double>(out, model.input_scale);
  const auto flat = model.params.flatten();
  put<std::uint64_t>(out, flat.size());
  for (const double v : flat) put<double>(out, v);
}

ForecastModel load_model(std::istream& in) {
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, "PSFM", 4) != 0) throw ValidationError("not a forecast model file");
  const auto version = get<std::uint32_t>(in);
  if (version != kModelFormatVersion) throw ValidationError(fmt::format("unsupported model format version {}", version));
  ForecastModel model;
  model.window = static_cast<int>(get<std::uint32_t>(in));
  const auto input_size = get<std::uint32_t>(in);
  const auto lstm_units = get<std::uint32_t>(in);
  const auto dense_units = get<std::uint32_t>(in);
  if (model.window < 1 || input_size != 1 || lstm_units < 1 || dense_units < 1 || lstm_units > 4096 ||
      dense_units > 4096) {
    throw ValidationError("model file has an invalid architecture header");
  }
  model.input_mean = get<double>(in);
  model.input_scale = get<double>(in);
  model.params = NetworkParams::zeros(lstm_units, dense_units, input_size);
  const auto count = get<std::uint64_t>(in);
  if (count != model.params.parameter_count()) {
    throw ValidationError(fmt::format("model file declares {} parameters, architecture needs {}", count,
                                      model.params.parameter_count()));
  }
  std::vector<double> flat(count);
  for (auto& v : flat) v = get<double>(in);
  model.params.assign(flat);
  return model;
}

void save_model(const std::filesystem::path& path, const ForecastModel& model) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError(fmt::format("cannot write '{}'", path.string()));
  save_model(out, model);
}

ForecastModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError(fmt::format("cannot open '{}'", path.string()));
  return load_model(in);
}

}  // namespace plantsched::forecaster
