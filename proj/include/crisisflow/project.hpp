#pragma once

#include "crisisflow/infer.hpp"
#include "crisisflow/segment.hpp"
#include "crisisflow/types.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace crisisflow {

struct ProjectionConfig {
  int horizon = 30;
  int delta_max = 15;
  double floor_value = 0.001;
  std::uint64_t seed = 20240101;

  void validate() const;
};

/// Posterior draws of the parameters one crisis projection needs, aligned
/// by draw index k.
struct CrisisDraws {
  Vector omega_growth;
  Vector omega_decline;
  Vector lambda;
  Vector sigma_growth;
  Vector sigma_decline;
  Vector psi;
  Vector rho;
  Vector sigma_rho;

  Index size() const { return lambda.size(); }
};

CrisisDraws crisis_draws(const PosteriorDraws& draws, int crisis_id, const std::string& country);

inline constexpr std::array<double, 7> kQuantileLevels = {0.025, 0.05, 0.10, 0.50, 0.90, 0.95, 0.975};

/// Rows are years, columns follow kQuantileLevels.
struct QuantileTable {
  Matrix values;

  double at(Index year_index, double level) const;
  /// Central interval endpoints for a nominal coverage level (0.8, 0.9, 0.95).
  std::pair<double, double> interval(Index year_index, double coverage) const;
};

/// Per-year empirical quantiles of trajectories (K x H) with linear
/// interpolation. Throws std::invalid_argument when K = 0.
QuantileTable summarize_quantiles(const Matrix& trajectories);

struct ProjectionSet {
  std::string country_code;
  int crisis_id = 0;
  std::vector<Year> years;
  Matrix trajectories;  // K x H
  QuantileTable quantiles;
  std::vector<int> delta_draws;  // growth crises only
  bool weight_fallback = false;  // some draw had all-zero delta weights
};

/// Decline-phase recursion from r_last with decline rate and noise; any
/// negative value is replaced by the floor before continuing.
ProjectionSet project_decline(const CrisisSegment& segment, const CrisisDraws& draws, double r_last,
                              const ProjectionConfig& cfg);

/// Normalized p_delta for delta = 0..peak_values.size()-1, where
/// peak_values[d] is the proportion at year t_last + d under that delta.
/// Computed in log space; if every weight vanishes the result is uniform and
/// `fallback` is set.
Vector delta_weights(const Vector& peak_values, Year t_last, Year t_start, double psi, double rho, double sigma_rho,
                     bool* fallback = nullptr);

/// Growth-phase projection marginalizing the peak year over delta in
/// {0, ..., delta_max}; delta* is sampled per draw.
ProjectionSet project_growth(const CrisisSegment& segment, const CrisisDraws& draws, double r_last,
                             const ProjectionConfig& cfg);

/// Dispatches on segment status. Throws std::invalid_argument for ended crises.
ProjectionSet project_crisis(const CrisisSegment& segment, const CrisisDraws& draws, double r_last,
                             const ProjectionConfig& cfg);

struct BenchmarkProjection {
  std::string country_code;
  std::vector<Year> years;  // t_last .. t_last + horizon
  Vector values;
};

/// Logistic-decline rate of the benchmark, -ln(2) / 5.
inline double benchmark_rate() { return -std::log(2.0) / 5.0; }

/// 2 r_last / (1 + exp(-omega* (t - t_last))): equals r_last at t_last and
/// 2/3 r_last five years later.
BenchmarkProjection project_benchmark(double r_last, Year t_last, int horizon);

}  // namespace crisisflow
