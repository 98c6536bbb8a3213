#pragma once

// Readers and writers for the on-disk formats. Every writer starts with the
// provenance comment line; readers skip comment lines.

#include "crisisflow/infer.hpp"
#include "crisisflow/ingest.hpp"
#include "crisisflow/project.hpp"
#include "crisisflow/segment.hpp"
#include "crisisflow/validate.hpp"

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace crisisflow {

void write_series_csv(std::ostream& out, const std::string& provenance, const std::vector<CountrySeries>& series);

void write_segments_csv(std::ostream& out, const std::string& provenance, const std::vector<CrisisSegment>& segments);
std::vector<CrisisSegment> read_segments_csv(std::istream& in);
std::vector<CrisisSegment> read_segments_csv(const std::string& path);

/// Long format `chain,iter,param_name,value`.
void write_draws_csv(std::ostream& out, const std::string& provenance, const PosteriorDraws& draws);
PosteriorDraws read_draws_csv(std::istream& in);
PosteriorDraws read_draws_csv(const std::string& path);

void write_diagnostics_csv(std::ostream& out, const std::string& provenance, const PosteriorDraws& draws);

/// One row per (crisis, projection year); benchmark keyed by country.
void write_projections_csv(std::ostream& out, const std::string& provenance,
                           const std::vector<ProjectionSet>& projections,
                           const std::map<std::string, BenchmarkProjection>& benchmarks);

struct ProjectionRow {
  std::string country_code;
  int crisis_id = 0;
  Year year = 0;
  std::array<double, 7> q{};
  double benchmark = 0;
};
std::vector<ProjectionRow> read_projections_csv(const std::string& path);

/// Draw-level trajectories `country_code,crisis_id,draw,year,value`.
void write_trajectories_csv(std::ostream& out, const std::string& provenance,
                            const std::vector<ProjectionSet>& projections);

/// `cutoff,horizon,method,metric,value,n`.
void write_validation_report_csv(std::ostream& out, const std::string& provenance, const ScoreReport& report);

void write_counts_csv(std::ostream& out, const std::vector<RawCounts>& counts);
void write_population_csv(std::ostream& out, const std::vector<PopulationRecord>& population);

}  // namespace crisisflow
