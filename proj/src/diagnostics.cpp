#include "crisisflow/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace crisisflow {

namespace {

// Between/within variance components for chains stored as columns.
struct VarianceParts {
  double within = 0;
  double var_plus = 0;
};

VarianceParts variance_parts(const Matrix& chains) {
  const double n = static_cast<double>(chains.rows());
  const Eigen::RowVectorXd means = chains.colwise().mean();
  double within = 0;
  for (Index j = 0; j < chains.cols(); ++j)
    within += (chains.col(j).array() - means(j)).square().sum() / (n - 1);
  within /= static_cast<double>(chains.cols());
  const double between =
      chains.cols() > 1 ? n * (means.array() - means.mean()).square().sum() / static_cast<double>(chains.cols() - 1)
                        : 0.0;
  return {within, (n - 1) / n * within + between / n};
}

}  // namespace

double split_rhat(const Matrix& draws) {
  const Index half = draws.rows() / 2;
  if (half < 2 || draws.cols() < 1) return std::numeric_limits<double>::quiet_NaN();
  Matrix split(half, 2 * draws.cols());
  for (Index j = 0; j < draws.cols(); ++j) {
    split.col(2 * j) = draws.col(j).head(half);
    split.col(2 * j + 1) = draws.col(j).tail(half);
  }
  const auto parts = variance_parts(split);
  if (!(parts.within > 0)) return std::numeric_limits<double>::quiet_NaN();
  return std::sqrt(parts.var_plus / parts.within);
}

double effective_sample_size(const Matrix& draws) {
  const Index n = draws.rows();
  const Index m = draws.cols();
  if (n < 4 || m < 1) return std::numeric_limits<double>::quiet_NaN();
  const auto parts = variance_parts(draws);
  if (!(parts.within > 0)) return std::numeric_limits<double>::quiet_NaN();

  Matrix centered = draws.rowwise() - draws.colwise().mean();
  Eigen::VectorXd chain_var(m);
  for (Index j = 0; j < m; ++j) chain_var(j) = centered.col(j).squaredNorm() / static_cast<double>(n);

  auto rho_at = [&](Index lag) {
    double mean_autocov = 0;
    for (Index j = 0; j < m; ++j)
      mean_autocov += centered.col(j).head(n - lag).dot(centered.col(j).tail(n - lag)) / static_cast<double>(n);
    mean_autocov /= static_cast<double>(m);
    return 1.0 - (parts.within - mean_autocov) / parts.var_plus;
  };

  // Geyer: sum adjacent pairs while positive, enforcing monotone decrease.
  double tau = -1.0;  // rho_0 counted once via the first pair
  double prev_pair = std::numeric_limits<double>::infinity();
  for (Index t = 0; t + 1 < n; t += 2) {
    double pair = rho_at(t) + rho_at(t + 1);
    if (pair <= 0) break;
    pair = std::min(pair, prev_pair);
    prev_pair = pair;
    tau += 2.0 * pair;
  }
  tau = std::max(tau, 1.0 / std::log10(static_cast<double>(n * m)));
  return static_cast<double>(n * m) / tau;
}

double quantile_sorted(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) throw std::invalid_argument("quantile of empty sample");
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

}  // namespace crisisflow
