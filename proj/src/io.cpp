#include "mmlaw/io.hpp"

#include "mmlaw/error.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <iterator>
#include <sstream>

namespace mmlaw::io {

std::vector<CsvRecord> read_csv(std::istream& in) {
  std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  if (text.size() >= 3 && text.compare(0, 3, "\xEF\xBB\xBF") == 0) text.erase(0, 3);

  std::vector<CsvRecord> records;
  CsvRecord current;
  std::string field;
  bool in_quotes = false;
  bool field_quoted = false;
  std::size_t line = 1;
  current.line = line;

  auto end_record = [&] {
    current.fields.push_back(std::move(field));
    field.clear();
    field_quoted = false;
    const bool blank = current.fields.size() == 1 && current.fields[0].empty();
    if (!blank) records.push_back(std::move(current));
    current = CsvRecord{};
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        if (!field.empty() || field_quoted) {
          throw Error(ErrorKind::Parse, "unexpected quote on line " + std::to_string(line));
        }
        in_quotes = true;
        field_quoted = true;
        break;
      case ',':
        current.fields.push_back(std::move(field));
        field.clear();
        field_quoted = false;
        break;
      case '\r':
        break;
      case '\n':
        end_record();
        ++line;
        current.line = line;
        break;
      default:
        field.push_back(c);
    }
  }
  if (in_quotes) throw Error(ErrorKind::Parse, "unterminated quoted field");
  if (!field.empty() || !current.fields.empty() || field_quoted) end_record();
  return records;
}

void expect_header(const CsvRecord& header, const std::vector<std::string_view>& expected,
                   std::string_view what) {
  bool ok = header.fields.size() == expected.size();
  for (std::size_t i = 0; ok && i < expected.size(); ++i) ok = header.fields[i] == expected[i];
  if (!ok) {
    std::string want;
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (i) want += ',';
      want += expected[i];
    }
    throw Error(ErrorKind::Parse, std::string(what) + ": expected header '" + want + "'");
  }
}

double parse_double(std::string_view text, std::string_view what, std::size_t line) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || text.empty()) {
    throw Error(ErrorKind::Parse, "line " + std::to_string(line) + ": bad " + std::string(what) +
                                      " '" + std::string(text) + "'");
  }
  return value;
}

long long parse_int(std::string_view text, std::string_view what, std::size_t line) {
  long long value = 0;
  const char* first = text.data();
  const char* last = first + text.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || text.empty()) {
    throw Error(ErrorKind::Parse, "line " + std::to_string(line) + ": bad " + std::string(what) +
                                      " '" + std::string(text) + "'");
  }
  return value;
}

std::string format_g12(double value) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] =
      std::to_chars(buf.data(), buf.data() + buf.size(), value, std::chars_format::general, 12);
  return std::string(buf.data(), ptr);
}

std::string format_exact(double value) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), ptr);
}

std::string format_fixed(double value, int decimals) {
  std::array<char, 128> buf{};
  if (value == 0.0) value = 0.0;  // drop negative zero
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value,
                                       std::chars_format::fixed, decimals);
  std::string out(buf.data(), ptr);
  if (out.find_first_not_of("-0.") == std::string::npos && !out.empty() && out[0] == '-') {
    out.erase(0, 1);
  }
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::Io, "cannot write '" + tmp.string() + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      std::error_code ignored;
      std::filesystem::remove(tmp, ignored);
      throw Error(ErrorKind::Io, "short write to '" + tmp.string() + "'");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error(ErrorKind::Io, "cannot rename onto '" + path.string() + "'");
  }
}

}  // namespace mmlaw::io
