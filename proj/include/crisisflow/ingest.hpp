#pragma once

#include "crisisflow/types.hpp"

#include <cstdint>
#include <iosfwd>
#include <set>
#include <string>
#include <vector>

namespace crisisflow {

struct RawCounts {
  std::string country_code;
  Year year = 0;
  std::int64_t refugees = 0;
  std::int64_t asylum_seekers = 0;

  friend bool operator==(const RawCounts&, const RawCounts&) = default;
};

struct PopulationRecord {
  std::string country_code;
  Year year = 0;
  std::int64_t population = 0;

  friend bool operator==(const PopulationRecord&, const PopulationRecord&) = default;
};

/// One country's joined series. Years are contiguous and strictly increasing;
/// r[i] = R[i] / (R[i] + P[i]).
struct CountrySeries {
  std::string country_code;
  std::vector<Year> years;
  Vector r;
  std::vector<std::int64_t> R;
  std::vector<std::int64_t> P;

  Index size() const { return static_cast<Index>(years.size()); }
  Year first_year() const { return years.front(); }
  Year last_year() const { return years.back(); }
  bool contains(Year y) const { return !years.empty() && y >= first_year() && y <= last_year(); }
  Index index_of(Year y) const { return static_cast<Index>(y - first_year()); }
  double at(Year y) const { return r(index_of(y)); }
};

/// Default division codes dropped on ingestion: Unknown, Stateless,
/// Western Sahara, Palestinian.
std::set<std::string> default_excluded_codes();

struct CountsParseResult {
  std::vector<RawCounts> rows;
  std::size_t skipped = 0;
};

CountsParseResult parse_refugee_counts(std::istream& in,
                                       const std::set<std::string>& excluded = default_excluded_codes());
CountsParseResult parse_refugee_counts(const std::string& path,
                                       const std::set<std::string>& excluded = default_excluded_codes());

std::vector<PopulationRecord> parse_population(std::istream& in);
std::vector<PopulationRecord> parse_population(const std::string& path);

/// Joins counts with populations. Throws DataError listing every count row
/// without a population match, or on a year gap inside a country's span.
std::vector<CountrySeries> build_proportion_series(const std::vector<RawCounts>& counts,
                                                   const std::vector<PopulationRecord>& pops);

struct FilterSettings {
  int min_years = 10;
  double min_prop = 0.01;
  std::int64_t min_count = 1000;
};

struct Exclusion {
  std::string country_code;
  std::string reason;
};

struct FilterResult {
  std::vector<CountrySeries> kept;
  std::vector<Exclusion> excluded;
};

/// Keeps series with >= min_years observations, max r > min_prop and
/// max R > min_count.
FilterResult filter_countries(const std::vector<CountrySeries>& series,
                              const FilterSettings& settings = {});

/// Writes `EXCLUDED <code> <reason>` lines.
void write_audit(std::ostream& out, const std::vector<Exclusion>& exclusions);

/// Restricts every series to years <= cutoff; series left empty are dropped.
std::vector<CountrySeries> truncate_series(const std::vector<CountrySeries>& series, Year cutoff);

}  // namespace crisisflow
