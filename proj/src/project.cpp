#include "crisisflow/project.hpp"

#include "crisisflow/diagnostics.hpp"
#include "crisisflow/math.hpp"
#include "crisisflow/model.hpp"
#include "crisisflow/rng.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace crisisflow {

void ProjectionConfig::validate() const {
  if (horizon < 1) throw ConfigError("horizon must be >= 1");
  if (delta_max < 0) throw ConfigError("delta_max must be >= 0");
  if (!(floor_value > 0 && floor_value < 1)) throw ConfigError("floor_value must be in (0, 1)");
}

CrisisDraws crisis_draws(const PosteriorDraws& draws, int crisis_id, const std::string& country) {
  auto col = [&](const std::string& name) -> Vector { return draws.values.col(draws.column(name)); };
  CrisisDraws d;
  d.omega_growth = col(crisis_param_name("omega1", crisis_id));
  d.omega_decline = col(crisis_param_name("omega2", crisis_id));
  d.lambda = col(crisis_param_name("lambda", crisis_id));
  d.sigma_growth = col(country_param_name("sigma1", country));
  d.sigma_decline = col(country_param_name("sigma2", country));
  d.psi = col("psi");
  d.rho = col("rho");
  d.sigma_rho = col("sigma_rho");
  return d;
}

double QuantileTable::at(Index year_index, double level) const {
  for (std::size_t j = 0; j < kQuantileLevels.size(); ++j)
    if (std::abs(kQuantileLevels[j] - level) < 1e-12) return values(year_index, static_cast<Index>(j));
  throw std::invalid_argument("quantile level not tabulated");
}

std::pair<double, double> QuantileTable::interval(Index year_index, double coverage) const {
  const double tail = 0.5 * (1.0 - coverage);
  return {at(year_index, tail), at(year_index, 1.0 - tail)};
}

QuantileTable summarize_quantiles(const Matrix& trajectories) {
  if (trajectories.rows() == 0) throw std::invalid_argument("summarize_quantiles: no draws");
  QuantileTable q;
  q.values.resize(trajectories.cols(), static_cast<Index>(kQuantileLevels.size()));
  std::vector<double> column(static_cast<std::size_t>(trajectories.rows()));
  for (Index h = 0; h < trajectories.cols(); ++h) {
    for (Index k = 0; k < trajectories.rows(); ++k) column[static_cast<std::size_t>(k)] = trajectories(k, h);
    std::sort(column.begin(), column.end());
    for (std::size_t j = 0; j < kQuantileLevels.size(); ++j)
      q.values(h, static_cast<Index>(j)) = quantile_sorted(column, kQuantileLevels[j]);
  }
  return q;
}

namespace {

struct StepParams {
  double omega;
  double lambda;
  double sigma;
};

// One recursion step with the floor rule.
double advance(double mu, const StepParams& p, double eps, double floor_value) {
  double next = mu + logistic_rate(mu, p.omega, p.lambda) + p.sigma * eps;
  return next < 0.0 ? floor_value : next;
}

Vector draw_noise(Rng& rng, Index n) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector eps(n);
  for (Index i = 0; i < n; ++i) eps(i) = normal(rng);
  return eps;
}

ProjectionSet make_set(const CrisisSegment& segment, Index k, int horizon) {
  ProjectionSet set;
  set.country_code = segment.country_code;
  set.crisis_id = segment.crisis_id;
  for (int h = 1; h <= horizon; ++h) set.years.push_back(segment.t_last + h);
  set.trajectories.resize(k, horizon);
  return set;
}

Rng draw_stream(const ProjectionConfig& cfg, const CrisisSegment& segment, Index k) {
  return make_stream(cfg.seed, {kStreamProjection, static_cast<std::uint64_t>(segment.crisis_id),
                                static_cast<std::uint64_t>(k)});
}

}  // namespace

ProjectionSet project_decline(const CrisisSegment& segment, const CrisisDraws& draws, double r_last,
                              const ProjectionConfig& cfg) {
  cfg.validate();
  const Index K = draws.size();
  ProjectionSet set = make_set(segment, K, cfg.horizon);
  const Index n_noise = std::max(cfg.horizon, cfg.delta_max);
  for (Index k = 0; k < K; ++k) {
    Rng rng = draw_stream(cfg, segment, k);
    const Vector eps = draw_noise(rng, n_noise);
    const StepParams p{draws.omega_decline(k), draws.lambda(k), draws.sigma_decline(k)};
    double mu = r_last;
    for (int h = 0; h < cfg.horizon; ++h) {
      mu = advance(mu, p, eps(h), cfg.floor_value);
      set.trajectories(k, h) = mu;
    }
  }
  set.quantiles = summarize_quantiles(set.trajectories);
  return set;
}

Vector delta_weights(const Vector& peak_values, Year t_last, Year t_start, double psi, double rho, double sigma_rho,
                     bool* fallback) {
  const Index n = peak_values.size();
  Vector logw(n);
  for (Index d = 0; d < n; ++d) {
    const double mu = peak_values(d);
    const double length = static_cast<double>(t_last + d - t_start);
    logw(d) = (mu > 0 && mu < 1) ? exponential_logpdf(length, psi) + normal_logpdf(logit(mu), rho, sigma_rho)
                                 : kNegInf<double>;
  }
  const double top = logw.maxCoeff();
  if (fallback) *fallback = false;
  if (!std::isfinite(top)) {
    if (fallback) *fallback = true;
    return Vector::Constant(n, 1.0 / static_cast<double>(n));
  }
  Vector w = (logw.array() - top).exp();
  return w / w.sum();
}

ProjectionSet project_growth(const CrisisSegment& segment, const CrisisDraws& draws, double r_last,
                             const ProjectionConfig& cfg) {
  cfg.validate();
  const Index K = draws.size();
  const int n_delta = cfg.delta_max + 1;
  const Index n_steps = std::max(cfg.horizon, cfg.delta_max);
  ProjectionSet set = make_set(segment, K, cfg.horizon);
  set.delta_draws.resize(static_cast<std::size_t>(K));

  Matrix paths(n_delta, n_steps);
  Vector peak_values(n_delta);
  for (Index k = 0; k < K; ++k) {
    Rng rng = draw_stream(cfg, segment, k);
    const Vector eps = draw_noise(rng, n_steps);
    const StepParams growth{draws.omega_growth(k), draws.lambda(k), draws.sigma_growth(k)};
    const StepParams decline{draws.omega_decline(k), draws.lambda(k), draws.sigma_decline(k)};

    for (int d = 0; d < n_delta; ++d) {
      double mu = r_last;
      for (Index h = 0; h < n_steps; ++h) {
        // Step h lands in year t_last + h + 1; the peak year t_last + d
        // closes the growth phase.
        mu = advance(mu, h + 1 <= d ? growth : decline, eps(h), cfg.floor_value);
        paths(d, h) = mu;
      }
      peak_values(d) = d == 0 ? r_last : paths(d, d - 1);
    }

    bool fallback = false;
    const Vector w =
        delta_weights(peak_values, segment.t_last, segment.t_start, draws.psi(k), draws.rho(k), draws.sigma_rho(k),
                      &fallback);
    set.weight_fallback = set.weight_fallback || fallback;

    int chosen = 0;
    if (n_delta > 1) {
      std::discrete_distribution<int> pick(w.data(), w.data() + w.size());
      chosen = pick(rng);
    }
    set.delta_draws[static_cast<std::size_t>(k)] = chosen;
    set.trajectories.row(k) = paths.row(chosen).head(cfg.horizon);
  }
  set.quantiles = summarize_quantiles(set.trajectories);
  return set;
}

ProjectionSet project_crisis(const CrisisSegment& segment, const CrisisDraws& draws, double r_last,
                             const ProjectionConfig& cfg) {
  switch (segment.status) {
    case CrisisStatus::OngoingDecline: return project_decline(segment, draws, r_last, cfg);
    case CrisisStatus::OngoingGrowth: return project_growth(segment, draws, r_last, cfg);
    case CrisisStatus::Ended: break;
  }
  throw std::invalid_argument("crisis " + std::to_string(segment.crisis_id) + " has ended; nothing to project");
}

BenchmarkProjection project_benchmark(double r_last, Year t_last, int horizon) {
  if (horizon < 0) throw std::invalid_argument("horizon must be non-negative");
  const double omega = benchmark_rate();
  BenchmarkProjection b;
  b.values.resize(horizon + 1);
  for (int h = 0; h <= horizon; ++h) {
    b.years.push_back(t_last + h);
    b.values(h) = 2.0 * r_last / (1.0 + std::exp(-omega * static_cast<double>(h)));
  }
  return b;
}

}  // namespace crisisflow
