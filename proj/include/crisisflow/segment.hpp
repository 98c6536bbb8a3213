#pragma once

#include "crisisflow/ingest.hpp"
#include "crisisflow/types.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace crisisflow {

enum class CrisisStatus { Ended, OngoingGrowth, OngoingDecline };

std::string_view to_string(CrisisStatus s);
CrisisStatus parse_status(std::string_view s);

/// One detected refugee crisis. For OngoingGrowth crises t_peak is
/// provisional (argmax of r over the segment) and only informs
/// classification.
struct CrisisSegment {
  int crisis_id = 0;
  std::string country_code;
  Year t_start = 0;
  Year t_peak = 0;
  std::optional<Year> t_end;
  Year t_last = 0;
  CrisisStatus status = CrisisStatus::OngoingDecline;

  bool peak_observed() const { return status != CrisisStatus::OngoingGrowth; }
  Year fit_end() const { return t_end.value_or(t_last); }

  friend bool operator==(const CrisisSegment&, const CrisisSegment&) = default;
};

struct PeakScoreConfig {
  int window_w = 3;
  double score_threshold_h = 1.0;
  double crisis_floor = 0.00025;
  Year recent_peak_year = 2015;
  double growth_fraction = 0.8;

  void validate() const;
};

/// Palshikar S1 score: mean of the largest signed drop to the left and to
/// the right within +-w points. Boundary points use the side they have.
Vector peak_scores(const Vector& r, int w);

/// Interior points that are the maximum of their +-w neighbourhood (ties go
/// to the earliest point) and whose score is at least mean + h*sd of the
/// positive scores.
std::vector<Year> detect_peaks(const CountrySeries& series, const PeakScoreConfig& cfg);

/// One trough per gap: [first, p0), (p0, p1), ..., (pk, last]. Each is the
/// earliest argmin of r over its gap.
std::vector<Year> find_troughs(const CountrySeries& series, const std::vector<Year>& peaks);

/// One unclassified segment per peak; t_last is the last year attributed to
/// the crisis (the year before the next crisis starts, or the series end).
std::vector<CrisisSegment> extract_crises(const CountrySeries& series, const std::vector<Year>& peaks,
                                          const std::vector<Year>& troughs, const PeakScoreConfig& cfg);

/// Assigns status and t_end. A segment whose t_last precedes last_data_year
/// is followed by another crisis.
CrisisSegment classify_crisis(const CountrySeries& series, CrisisSegment segment, const PeakScoreConfig& cfg,
                              Year last_data_year);

struct SegmentationResult {
  std::vector<CrisisSegment> segments;
  std::vector<Exclusion> excluded;
};

/// Full pipeline over a set of series; crisis ids are 1-based in
/// (country_code, t_start) order.
SegmentationResult segment_all(const std::vector<CountrySeries>& series, const PeakScoreConfig& cfg);

}  // namespace crisisflow
