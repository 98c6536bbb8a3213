#include "crisisflow/csv.hpp"

#include <array>
#include <cmath>

namespace crisisflow {

std::vector<std::string> split_fields(std::string_view line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.emplace_back(line.substr(start));
      break;
    }
    out.emplace_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

CsvReader::CsvReader(std::istream& in, std::vector<std::string> expected_header)
    : in_(in), width_(expected_header.size()) {
  auto header = next();
  if (!header) throw DataError("empty file: expected header");
  if (header->fields != expected_header) {
    std::string want;
    for (const auto& h : expected_header) want += (want.empty() ? "" : ",") + h;
    throw DataError("line " + std::to_string(header->line) + ": expected header '" + want + "'");
  }
}

std::optional<CsvRow> CsvReader::next() {
  std::string line;
  while (std::getline(in_, line)) {
    ++line_;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    CsvRow row{line_, split_fields(line)};
    if (row.fields.size() != width_)
      throw DataError("line " + std::to_string(line_) + ": expected " + std::to_string(width_) +
                      " fields, got " + std::to_string(row.fields.size()));
    return row;
  }
  return std::nullopt;
}

double parse_double(std::string_view s, std::size_t line, std::string_view what) {
  double value{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty())
    throw DataError("line " + std::to_string(line) + ": bad " + std::string(what) + " '" + std::string(s) + "'");
  return value;
}

std::string format_double(double x) {
  std::array<char, 32> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), ptr);
}

std::string format_sig(double x, int digits) {
  if (!std::isfinite(x)) return format_double(x);
  std::array<char, 48> buf{};
  std::snprintf(buf.data(), buf.size(), "%.*g", digits, x);
  return buf.data();
}

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string provenance_line(std::uint64_t config_hash, std::uint64_t seed) {
  std::array<char, 96> buf{};
  std::snprintf(buf.data(), buf.size(), "# crisisflow %s config=%016llx seed=%llu", kVersion,
                static_cast<unsigned long long>(config_hash), static_cast<unsigned long long>(seed));
  return buf.data();
}

}  // namespace crisisflow
