#include "crisisflow/segment.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace crisisflow {

std::string_view to_string(CrisisStatus s) {
  switch (s) {
    case CrisisStatus::Ended: return "ended";
    case CrisisStatus::OngoingGrowth: return "ongoing_growth";
    case CrisisStatus::OngoingDecline: return "ongoing_decline";
  }
  return "?";
}

CrisisStatus parse_status(std::string_view s) {
  if (s == "ended") return CrisisStatus::Ended;
  if (s == "ongoing_growth") return CrisisStatus::OngoingGrowth;
  if (s == "ongoing_decline") return CrisisStatus::OngoingDecline;
  throw DataError("unknown crisis status '" + std::string(s) + "'");
}

void PeakScoreConfig::validate() const {
  if (window_w < 1) throw ConfigError("window_w must be >= 1");
  if (score_threshold_h < 0) throw ConfigError("score_threshold_h must be >= 0");
  if (!(crisis_floor > 0 && crisis_floor < 1)) throw ConfigError("crisis_floor must be in (0, 1)");
  if (!(growth_fraction > 0 && growth_fraction <= 1)) throw ConfigError("growth_fraction must be in (0, 1]");
}

Vector peak_scores(const Vector& r, int w) {
  const Index n = r.size();
  Vector score(n);
  for (Index i = 0; i < n; ++i) {
    double left = -INFINITY, right = -INFINITY;
    for (Index j = std::max<Index>(0, i - w); j < i; ++j) left = std::max(left, r(i) - r(j));
    for (Index j = i + 1; j <= std::min<Index>(n - 1, i + w); ++j) right = std::max(right, r(i) - r(j));
    if (std::isinf(left) && std::isinf(right))
      score(i) = 0.0;
    else if (std::isinf(left))
      score(i) = right;
    else if (std::isinf(right))
      score(i) = left;
    else
      score(i) = 0.5 * (left + right);
  }
  return score;
}

std::vector<Year> detect_peaks(const CountrySeries& series, const PeakScoreConfig& cfg) {
  const Index n = series.size();
  const int w = cfg.window_w;
  std::vector<Year> peaks;
  if (n < 3) return peaks;

  const Vector score = peak_scores(series.r, w);
  const auto positive = (score.array() > 0.0);
  const Index n_pos = positive.count();
  if (n_pos == 0) return peaks;
  const double mean = positive.select(score, 0.0).sum() / static_cast<double>(n_pos);
  const double var =
      positive.select((score.array() - mean).square().matrix(), 0.0).sum() / static_cast<double>(n_pos);
  const double threshold = mean + cfg.score_threshold_h * std::sqrt(var);

  for (Index i = 1; i + 1 < n; ++i) {
    if (!(score(i) > 0.0) || score(i) < threshold) continue;
    bool is_max = true;
    for (Index j = std::max<Index>(0, i - w); j <= std::min<Index>(n - 1, i + w) && is_max; ++j) {
      if (j < i) is_max = series.r(i) > series.r(j);
      if (j > i) is_max = series.r(i) >= series.r(j);
    }
    if (is_max) peaks.push_back(series.years[static_cast<std::size_t>(i)]);
  }
  return peaks;
}

namespace {

Year argmin_year(const CountrySeries& s, Year from, Year to) {
  Year best = from;
  for (Year y = from; y <= to; ++y)
    if (s.at(y) < s.at(best)) best = y;
  return best;
}

}  // namespace

std::vector<Year> find_troughs(const CountrySeries& series, const std::vector<Year>& peaks) {
  std::vector<Year> troughs;
  if (peaks.empty()) return troughs;
  troughs.push_back(argmin_year(series, series.first_year(), std::max(series.first_year(), peaks.front() - 1)));
  for (std::size_t i = 1; i < peaks.size(); ++i) troughs.push_back(argmin_year(series, peaks[i - 1] + 1, peaks[i] - 1));
  troughs.push_back(argmin_year(series, std::min(series.last_year(), peaks.back() + 1), series.last_year()));
  return troughs;
}

std::vector<CrisisSegment> extract_crises(const CountrySeries& series, const std::vector<Year>& peaks,
                                          const std::vector<Year>& troughs, const PeakScoreConfig& cfg) {
  std::vector<CrisisSegment> out;
  for (std::size_t i = 0; i < peaks.size(); ++i) {
    const Year peak = peaks[i];
    const Year trough = troughs[i];
    // The leading trough at the very first year is the beginning of the
    // series, which itself may start the crisis.
    const Year lo = (i == 0 && trough == series.first_year()) ? trough : trough + 1;
    Year start = peak - 1;
    for (Year y = lo; y < peak; ++y) {
      if (series.at(y) > cfg.crisis_floor) {
        start = y;
        break;
      }
    }
    CrisisSegment seg;
    seg.country_code = series.country_code;
    seg.t_start = std::max(start, series.first_year());
    seg.t_peak = peak;
    seg.t_last = series.last_year();
    if (!out.empty()) out.back().t_last = seg.t_start - 1;
    out.push_back(std::move(seg));
  }
  return out;
}

CrisisSegment classify_crisis(const CountrySeries& series, CrisisSegment segment, const PeakScoreConfig& cfg,
                              Year last_data_year) {
  const bool followed = segment.t_last < last_data_year;
  const double latest = series.at(last_data_year);
  if (followed || latest < cfg.crisis_floor) {
    Year end = segment.t_peak;
    for (Year y = segment.t_last; y > segment.t_peak; --y) {
      if (series.at(y) > cfg.crisis_floor) {
        end = y;
        break;
      }
    }
    segment.status = CrisisStatus::Ended;
    segment.t_end = end;
    return segment;
  }

  segment.t_end.reset();
  const bool recent_peak = segment.t_peak >= cfg.recent_peak_year;
  const bool near_peak = latest > cfg.growth_fraction * series.at(segment.t_peak);
  if (recent_peak || near_peak) {
    segment.status = CrisisStatus::OngoingGrowth;
    Year argmax = segment.t_start;
    for (Year y = segment.t_start; y <= segment.t_last; ++y)
      if (series.at(y) > series.at(argmax)) argmax = y;
    segment.t_peak = argmax;
  } else {
    segment.status = CrisisStatus::OngoingDecline;
  }
  return segment;
}

SegmentationResult segment_all(const std::vector<CountrySeries>& series, const PeakScoreConfig& cfg) {
  cfg.validate();
  std::map<std::string, const CountrySeries*> ordered;
  for (const auto& s : series) ordered[s.country_code] = &s;

  SegmentationResult result;
  for (const auto& [code, s] : ordered) {
    const auto peaks = detect_peaks(*s, cfg);
    if (peaks.empty()) {
      result.excluded.push_back({code, "no crisis detected"});
      continue;
    }
    const auto troughs = find_troughs(*s, peaks);
    for (auto seg : extract_crises(*s, peaks, troughs, cfg))
      result.segments.push_back(classify_crisis(*s, std::move(seg), cfg, s->last_year()));
  }
  int id = 1;
  for (auto& seg : result.segments) seg.crisis_id = id++;
  return result;
}

}  // namespace crisisflow
