#pragma once

// Minimal comma-delimited reader/writer helpers. Fields are never quoted in
// any of the formats this tool reads or writes.

#include "crisisflow/types.hpp"

#include <charconv>
#include <cstdio>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace crisisflow {

std::vector<std::string> split_fields(std::string_view line, char sep = ',');

struct CsvRow {
  std::size_t line = 0;
  std::vector<std::string> fields;
};

/// Reads rows after a required header. Lines starting with '#' and blank
/// lines are skipped; a trailing '\r' is stripped.
class CsvReader {
public:
  CsvReader(std::istream& in, std::vector<std::string> expected_header);

  std::optional<CsvRow> next();

private:
  std::istream& in_;
  std::size_t line_ = 0;
  std::size_t width_ = 0;
};

template <typename Int>
Int parse_int(std::string_view s, std::size_t line, std::string_view what) {
  Int value{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty())
    throw DataError("line " + std::to_string(line) + ": bad " + std::string(what) + " '" + std::string(s) + "'");
  return value;
}

double parse_double(std::string_view s, std::size_t line, std::string_view what);

/// Shortest round-trip representation.
std::string format_double(double x);

/// Fixed significant-digit representation used in summary outputs.
std::string format_sig(double x, int digits = 10);

/// 64-bit FNV-1a, stable across platforms; used for config fingerprints.
std::uint64_t fnv1a(std::string_view bytes);

/// Provenance comment written as the first line of every output file.
std::string provenance_line(std::uint64_t config_hash, std::uint64_t seed);

}  // namespace crisisflow
