#include "plantsched/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>

#include <fmt/format.h>

#include "plantsched/errors.hpp"

namespace plantsched::csv {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string> split(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.emplace_back(trim(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

std::size_t Table::column(std::string_view name) const {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) throw ValidationError(fmt::format("missing column '{}'", name));
  return static_cast<std::size_t>(it - header.begin());
}

Table read(std::istream& in, const std::map<std::string, std::string>& header_map) {
  Table table;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    auto view = trim(line);
    if (line_no == 1 && view.starts_with("\xEF\xBB\xBF")) view.remove_prefix(3);
    if (view.empty()) continue;
    auto fields = split(view);
    if (!have_header) {
      for (auto& h : fields) {
        if (const auto it = header_map.find(h); it != header_map.end()) h = it->second;
      }
      table.header = std::move(fields);
      have_header = true;
      continue;
    }
    if (fields.size() != table.header.size()) {
      throw ParseError(line_no, fmt::format("expected {} fields, found {}", table.header.size(), fields.size()));
    }
    table.rows.push_back(Row{line_no, std::move(fields)});
  }
  if (!have_header) throw ValidationError("no rows");
  return table;
}

std::int64_t to_int(std::string_view field, std::size_t line, std::string_view what) {
  std::int64_t v = 0;
  const auto* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, v);
  if (field.empty() || ec != std::errc{} || ptr != end) {
    throw ParseError(line, fmt::format("{} '{}' is not an integer", what, field));
  }
  return v;
}

double to_double(std::string_view field, std::size_t line, std::string_view what) {
  double v = 0.0;
  const auto* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, v);
  if (field.empty() || ec != std::errc{} || ptr != end || !std::isfinite(v)) {
    throw ParseError(line, fmt::format("{} '{}' is not a finite number", what, field));
  }
  return v;
}

bool looks_like_integer(std::string_view field) {
  if (field.empty()) return false;
  if (field.front() == '-' || field.front() == '+') field.remove_prefix(1);
  return !field.empty() && std::all_of(field.begin(), field.end(), [](char c) { return c >= '0' && c <= '9'; });
}

}  // namespace plantsched::csv
