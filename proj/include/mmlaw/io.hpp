#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace mmlaw::io {

/// One parsed CSV record plus the 1-based line it started on.
struct CsvRecord {
  std::vector<std::string> fields;
  std::size_t line = 0;
};

/// Minimal RFC 4180 reader: quoted fields, doubled quotes, CRLF, leading BOM.
/// Blank lines are skipped.
std::vector<CsvRecord> read_csv(std::istream& in);

/// Throws "parse error" unless `header` matches `expected` exactly.
void expect_header(const CsvRecord& header, const std::vector<std::string_view>& expected,
                   std::string_view what);

double parse_double(std::string_view text, std::string_view what, std::size_t line);
long long parse_int(std::string_view text, std::string_view what, std::size_t line);

/// "%.12g" in the C locale.
std::string format_g12(double value);
/// Shortest decimal string that reads back to the same double.
std::string format_exact(double value);
/// Fixed-point with `decimals` digits, used for SVG coordinates.
std::string format_fixed(double value, int decimals);

std::string read_file(const std::filesystem::path& path);

/// Writes `content` to a sibling temp file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace mmlaw::io
