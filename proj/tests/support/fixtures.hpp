#pragma once

// Shared builders for test series and segments.

#include "crisisflow/ingest.hpp"
#include "crisisflow/segment.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace crisisflow::testing {

/// Series with the given proportions from first_year on. Counts are derived
/// from a population of ten million so that R / (R + P) reproduces r.
inline CountrySeries make_series(const std::string& code, Year first_year, const std::vector<double>& r) {
  CountrySeries s;
  s.country_code = code;
  s.r.resize(static_cast<Index>(r.size()));
  for (std::size_t i = 0; i < r.size(); ++i) {
    s.years.push_back(first_year + static_cast<Year>(i));
    s.r(static_cast<Index>(i)) = r[i];
    const std::int64_t pop = 10'000'000;
    s.P.push_back(pop);
    s.R.push_back(static_cast<std::int64_t>(std::llround(r[i] / (1 - r[i]) * static_cast<double>(pop))));
  }
  return s;
}

inline CrisisSegment make_segment(int id, const std::string& code, Year start, Year peak, std::optional<Year> end,
                                  Year last, CrisisStatus status) {
  CrisisSegment s;
  s.crisis_id = id;
  s.country_code = code;
  s.t_start = start;
  s.t_peak = peak;
  s.t_end = end;
  s.t_last = last;
  s.status = status;
  return s;
}

}  // namespace crisisflow::testing
