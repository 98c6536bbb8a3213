#pragma once

// Static report artifacts: fan-chart SVGs and the growth-length histogram.

#include "crisisflow/ingest.hpp"
#include "crisisflow/io.hpp"
#include "crisisflow/segment.hpp"

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace crisisflow {

/// Counts of growth-phase lengths (t_peak - t_start) over ended crises.
std::map<int, int> growth_length_histogram(const std::vector<CrisisSegment>& segments);

void write_growth_histogram_csv(std::ostream& out, const std::string& provenance, const std::map<int, int>& hist);

/// Self-contained SVG: observed points, shaded 95% and 80% bands, the median
/// line, and the benchmark curve.
void write_fan_chart_svg(std::ostream& out, const CountrySeries& series, const std::vector<ProjectionRow>& rows);

}  // namespace crisisflow
