#pragma once

#include "crisisflow/infer.hpp"
#include "crisisflow/ingest.hpp"
#include "crisisflow/project.hpp"
#include "crisisflow/segment.hpp"

#include <map>
#include <string>
#include <vector>

namespace crisisflow {

struct ValidationConfig {
  Year cutoff = 2016;
  std::vector<int> horizons = {1, 5, 10};
  std::vector<double> coverage_levels = {0.80, 0.90, 0.95};
  // The growth rule "peak on or after recent_peak_year" becomes "peak on or
  // after cutoff - recent_peak_lag" for a backtest.
  int recent_peak_lag = 6;

  void validate() const;
};

using TruthMap = std::map<std::string, std::map<Year, double>>;

struct Holdout {
  std::vector<CountrySeries> training;
  TruthMap truth;  // validation countries only
  std::vector<Exclusion> excluded;
};

/// Training = years <= cutoff. Validation countries have held-out data and
/// no crisis starting after the cutoff when the full series is segmented.
Holdout build_holdout(const std::vector<CountrySeries>& full, Year cutoff, const PeakScoreConfig& seg);

/// What gets scored for one country.
struct CountryForecast {
  std::string country_code;
  std::vector<Year> years;
  QuantileTable quantiles;
  Vector benchmark;  // aligned with years
};

struct PointScore {
  int horizon = 0;
  std::string method;  // "bayes" or "benchmark"
  double mean_error = 0;
  double mean_abs_error = 0;
  Index n = 0;
};

struct CoverageScore {
  int horizon = 0;
  double level = 0;
  double coverage = 0;
  Index n = 0;
};

struct ScoreReport {
  Year cutoff = 0;
  std::vector<PointScore> point;
  std::vector<CoverageScore> coverage;
  std::vector<std::string> notes;
};

/// ME and MAE of predicted - observed at cutoff + h, for the posterior
/// median and for the benchmark. Countries without truth (or forecast) at a
/// horizon are skipped with a note.
std::vector<PointScore> score_point(const std::vector<CountryForecast>& forecasts, const TruthMap& truth, Year cutoff,
                                    const std::vector<int>& horizons, std::vector<std::string>* notes = nullptr);

/// Fraction of truths inside the central interval, endpoints inclusive.
std::vector<CoverageScore> score_coverage(const std::vector<CountryForecast>& forecasts, const TruthMap& truth,
                                          Year cutoff, const std::vector<int>& horizons,
                                          const std::vector<double>& levels,
                                          std::vector<std::string>* notes = nullptr);

struct PipelineSettings {
  PeakScoreConfig segment;
  SamplerConfig sampler;
  ProjectionConfig projection;
};

struct ValidationResult {
  ScoreReport report;
  std::vector<ProjectionSet> projections;
  std::vector<CountryForecast> forecasts;
  std::vector<std::string> warnings;
};

/// Segment, fit and project on the training data only, then score.
ValidationResult run_validation(const std::vector<CountrySeries>& full, const ValidationConfig& cfg,
                                const PipelineSettings& settings);

}  // namespace crisisflow
