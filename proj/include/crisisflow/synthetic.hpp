#pragma once

// Forward simulation from the interrupted-logistic model. Used to build the
// bundled demo dataset and by calibration checks.

#include "crisisflow/ingest.hpp"
#include "crisisflow/model.hpp"
#include "crisisflow/rng.hpp"

#include <optional>
#include <string>
#include <vector>

namespace crisisflow {

/// Hyperparameters used to generate the bundled synthetic dataset.
GlobalParams synthetic_globals();

/// Crisis parameters from the hierarchical priors: truncated t3 rates and a
/// logit-normal asymptote.
CrisisParams draw_crisis_params(const GlobalParams& g, Rng& rng);

/// Country noise scales from the log-normal noise priors.
CountryNoise draw_country_noise(const GlobalParams& g, Rng& rng);

/// Path r_0, r_1, ..., r_{n_total} of the interrupted logistic recursion:
/// increments 1..n_growth use the growth rate and noise, later ones the
/// decline rate and noise. With a floor, negative values are replaced by it.
Vector simulate_path(double r0, int n_growth, int n_total, const CrisisParams& p, const CountryNoise& noise, Rng& rng,
                     std::optional<double> floor_value);

struct SyntheticConfig {
  int n_countries = 40;
  Year first_year = 1980;
  Year last_year = 2021;
  Year latest_start = 2006;
  double two_crisis_fraction = 0.25;
  double start_level = 0.003;
  double baseline = 0.0001;
  int max_growth_years = 20;
  GlobalParams global = synthetic_globals();
};

struct SyntheticCrisis {
  std::string country_code;
  Year t_start = 0;
  Year t_peak = 0;
  CrisisParams params;
};

struct SyntheticDataset {
  std::vector<RawCounts> counts;
  std::vector<PopulationRecord> population;
  std::vector<CountrySeries> series;
  std::vector<SyntheticCrisis> crises;
  std::vector<std::pair<std::string, CountryNoise>> noise;
};

SyntheticDataset simulate_dataset(const SyntheticConfig& cfg, std::uint64_t seed);

}  // namespace crisisflow
