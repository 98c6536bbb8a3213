#include "crisisflow/ingest.hpp"

#include "crisisflow/csv.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

namespace crisisflow {

std::set<std::string> default_excluded_codes() { return {"UNK", "STA", "ESH", "PSE"}; }

namespace {

std::ifstream open_or_throw(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  return in;
}

}  // namespace

CountsParseResult parse_refugee_counts(std::istream& in, const std::set<std::string>& excluded) {
  CsvReader reader(in, {"country_code", "year", "refugees", "asylum_seekers"});
  CountsParseResult result;
  std::set<std::pair<std::string, Year>> seen;
  while (auto row = reader.next()) {
    const auto& f = row->fields;
    if (excluded.count(f[0])) {
      ++result.skipped;
      continue;
    }
    RawCounts rc;
    rc.country_code = f[0];
    rc.year = parse_int<Year>(f[1], row->line, "year");
    rc.refugees = parse_int<std::int64_t>(f[2], row->line, "refugees");
    rc.asylum_seekers = parse_int<std::int64_t>(f[3], row->line, "asylum_seekers");
    if (rc.refugees < 0 || rc.asylum_seekers < 0)
      throw DataError("line " + std::to_string(row->line) + ": negative count");
    if (!seen.emplace(rc.country_code, rc.year).second)
      throw DataError("line " + std::to_string(row->line) + ": duplicate " + rc.country_code + " " +
                      std::to_string(rc.year));
    result.rows.push_back(std::move(rc));
  }
  return result;
}

CountsParseResult parse_refugee_counts(const std::string& path, const std::set<std::string>& excluded) {
  auto in = open_or_throw(path);
  return parse_refugee_counts(in, excluded);
}

std::vector<PopulationRecord> parse_population(std::istream& in) {
  CsvReader reader(in, {"country_code", "year", "population"});
  std::vector<PopulationRecord> out;
  std::set<std::pair<std::string, Year>> seen;
  while (auto row = reader.next()) {
    const auto& f = row->fields;
    PopulationRecord pr{f[0], parse_int<Year>(f[1], row->line, "year"),
                        parse_int<std::int64_t>(f[2], row->line, "population")};
    if (pr.population <= 0)
      throw DataError("line " + std::to_string(row->line) + ": population must be positive");
    if (!seen.emplace(pr.country_code, pr.year).second)
      throw DataError("line " + std::to_string(row->line) + ": duplicate " + pr.country_code + " " +
                      std::to_string(pr.year));
    out.push_back(std::move(pr));
  }
  return out;
}

std::vector<PopulationRecord> parse_population(const std::string& path) {
  auto in = open_or_throw(path);
  return parse_population(in);
}

std::vector<CountrySeries> build_proportion_series(const std::vector<RawCounts>& counts,
                                                   const std::vector<PopulationRecord>& pops) {
  std::map<std::pair<std::string, Year>, std::int64_t> pop_index;
  for (const auto& p : pops) pop_index[{p.country_code, p.year}] = p.population;

  // country -> year -> (R, P)
  std::map<std::string, std::map<Year, std::pair<std::int64_t, std::int64_t>>> joined;
  std::vector<std::string> missing;
  for (const auto& c : counts) {
    auto it = pop_index.find({c.country_code, c.year});
    if (it == pop_index.end()) {
      missing.push_back(c.country_code + " " + std::to_string(c.year));
      continue;
    }
    joined[c.country_code][c.year] = {c.refugees + c.asylum_seekers, it->second};
  }
  if (!missing.empty()) {
    std::ostringstream msg;
    msg << "no population record for " << missing.size() << " (country, year) pair(s):";
    for (const auto& m : missing) msg << ' ' << m << ';';
    throw DataError(msg.str());
  }

  std::vector<CountrySeries> out;
  out.reserve(joined.size());
  for (const auto& [code, by_year] : joined) {
    CountrySeries s;
    s.country_code = code;
    s.r.resize(static_cast<Index>(by_year.size()));
    Index i = 0;
    for (const auto& [year, rp] : by_year) {
      if (!s.years.empty() && year != s.years.back() + 1)
        throw DataError(code + ": year gap between " + std::to_string(s.years.back()) + " and " +
                        std::to_string(year));
      s.years.push_back(year);
      s.R.push_back(rp.first);
      s.P.push_back(rp.second);
      s.r(i++) = static_cast<double>(rp.first) / static_cast<double>(rp.first + rp.second);
    }
    out.push_back(std::move(s));
  }
  return out;
}

FilterResult filter_countries(const std::vector<CountrySeries>& series, const FilterSettings& settings) {
  FilterResult result;
  for (const auto& s : series) {
    if (s.size() < settings.min_years) {
      result.excluded.push_back({s.country_code, "fewer than " + std::to_string(settings.min_years) +
                                                     " years (" + std::to_string(s.size()) + ")"});
      continue;
    }
    if (!(s.r.maxCoeff() > settings.min_prop)) {
      result.excluded.push_back({s.country_code, "max proportion not above " + format_double(settings.min_prop)});
      continue;
    }
    if (!(*std::max_element(s.R.begin(), s.R.end()) > settings.min_count)) {
      result.excluded.push_back({s.country_code, "max count not above " + std::to_string(settings.min_count)});
      continue;
    }
    result.kept.push_back(s);
  }
  return result;
}

void write_audit(std::ostream& out, const std::vector<Exclusion>& exclusions) {
  for (const auto& e : exclusions) out << "EXCLUDED " << e.country_code << ' ' << e.reason << '\n';
}

std::vector<CountrySeries> truncate_series(const std::vector<CountrySeries>& series, Year cutoff) {
  std::vector<CountrySeries> out;
  for (const auto& s : series) {
    if (s.first_year() > cutoff) continue;
    const Index n = std::min<Index>(s.size(), cutoff - s.first_year() + 1);
    CountrySeries t;
    t.country_code = s.country_code;
    t.years.assign(s.years.begin(), s.years.begin() + n);
    t.R.assign(s.R.begin(), s.R.begin() + n);
    t.P.assign(s.P.begin(), s.P.begin() + n);
    t.r = s.r.head(n);
    out.push_back(std::move(t));
  }
  return out;
}

}  // namespace crisisflow
