#pragma once

#include "crisisflow/types.hpp"

#include <vector>

namespace crisisflow {

/// Split R-hat over chains given as columns of `draws` (iterations x chains).
/// Each chain is halved so within-chain drift inflates the statistic.
double split_rhat(const Matrix& draws);

/// Multi-chain effective sample size (iterations x chains) using Geyer's
/// initial monotone sequence on the combined autocorrelation estimate.
double effective_sample_size(const Matrix& draws);

/// Empirical quantile with linear interpolation between order statistics
/// (position p * (n - 1) on the sorted sample).
double quantile_sorted(const std::vector<double>& sorted, double p);

}  // namespace crisisflow
