#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace plantsched::csv {

// Minimal comma-separated reader: no quoting, LF or CRLF line endings, blank lines skipped.

struct Row {
  std::size_t line{0};  // 1-based line number in the source
  std::vector<std::string> fields;
};

struct Table {
  std::vector<std::string> header;
  std::vector<Row> rows;

  /// Column position of `name`; throws ValidationError naming the missing column.
  std::size_t column(std::string_view name) const;
};

/// Reads a header line plus rows; header names are renamed through `header_map` first.
/// Every row must have as many fields as the header.
Table read(std::istream& in, const std::map<std::string, std::string>& header_map = {});

std::int64_t to_int(std::string_view field, std::size_t line, std::string_view what);
double to_double(std::string_view field, std::size_t line, std::string_view what);
bool looks_like_integer(std::string_view field);

}  // namespace plantsched::csv
