#pragma once

// Interrupted-logistic hierarchical model: parameter containers and every
// log-density term of the joint posterior.
//
// Conventions:
//  * Normal distributions take a standard deviation.
//  * The asymptote prior is a Normal density on logit(lambda) and the noise
//    prior a Normal density on log(sigma); both are densities of the
//    transformed variable, so the sampler adds no Jacobian for those
//    coordinates.
//  * Student-t rate priors are truncated to the sign constraint and carry the
//    truncation normalizer.

#include "crisisflow/ingest.hpp"
#include "crisisflow/math.hpp"
#include "crisisflow/segment.hpp"
#include "crisisflow/types.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace crisisflow {

struct CrisisParams {
  double omega_growth = 0.3;    // > 0
  double omega_decline = -0.3;  // < 0
  double lambda = 0.5;          // in (0, 1)

  bool feasible() const { return omega_growth > 0 && omega_decline < 0 && lambda > 0 && lambda < 1; }
};

struct CountryNoise {
  double sigma_growth = 1e-3;
  double sigma_decline = 1e-3;

  bool feasible() const { return sigma_growth > 0 && sigma_decline > 0; }
};

struct GlobalParams {
  double rho = 0;
  double sigma_rho = 1;
  double psi = 0.1;
  double lambda_g = 0;
  double sigma_lambda = 1;
  double mu_omega1 = 0.3;
  double mu_omega2 = -0.3;
  double sigma_omega1 = 0.3;
  double sigma_omega2 = 0.3;
  double mu_sigma1 = -7;
  double mu_sigma2 = -7;
  double sigma_sigma1 = 1;
  double sigma_sigma2 = 1;

  bool feasible() const {
    return sigma_rho > 0 && psi > 0 && sigma_lambda > 0 && sigma_omega1 > 0 && sigma_omega2 > 0 &&
           sigma_sigma1 > 0 && sigma_sigma2 > 0;
  }
};

/// Joint parameter state. crises[m] pairs with ModelData::crises[m] and
/// countries[c] with ModelData::countries[c].
struct ModelParams {
  std::vector<CrisisParams> crises;
  std::vector<CountryNoise> countries;
  GlobalParams global;

  bool feasible() const;
};

/// Logistic rate of change: lambda - mu above the asymptote, otherwise
/// omega * mu * (1 - mu / lambda). Throws std::domain_error unless
/// lambda is in (0, 1).
template <typename Scalar>
Scalar logistic_rate(Scalar mu, Scalar omega, Scalar lambda) {
  if (!(lambda > Scalar(0) && lambda < Scalar(1))) throw std::domain_error("logistic_rate: lambda outside (0, 1)");
  if (mu > lambda) return lambda - mu;
  return omega * mu * (Scalar(1) - mu / lambda);
}

/// Per-crisis increments used by the likelihood, precomputed from the data.
struct CrisisData {
  int crisis_id = 0;
  Index country = 0;
  CrisisStatus status = CrisisStatus::OngoingDecline;
  Year t_start = 0;
  Year t_peak = 0;
  Year t_last = 0;
  Vector r_prev;     // r_{t-1} for t in (t_start, fit end]
  Vector increment;  // r_t - r_{t-1}
  Index n_growth = 0;  // leading increments with t <= t_peak
  double r_peak = 0;
  double r_last = 0;
  double r_max = 0;

  bool peak_observed() const { return status != CrisisStatus::OngoingGrowth; }
  double length() const { return static_cast<double>(t_peak - t_start); }
};

struct ModelData {
  std::vector<std::string> countries;
  std::vector<CrisisData> crises;
  std::vector<std::vector<Index>> crises_of_country;
};

/// Builds the likelihood view. Ongoing-growth crises keep only their growth
/// increments up to the provisional peak. Throws DataError on a crisis whose
/// observed peak proportion is 0 or 1.
ModelData make_model_data(const std::vector<CountrySeries>& series, const std::vector<CrisisSegment>& segments);

/// Expected increment into year t: growth branch for t <= t_peak, decline
/// branch after. Throws std::out_of_range outside (t_start, t_end or t_last].
double expected_delta(const CrisisSegment& segment, const CrisisParams& params, double r_prev, Year t);

/// Increment log-likelihood of one crisis.
double crisis_process_loglik(const CrisisData& crisis, const CrisisParams& params, const CountryNoise& noise);

double process_loglik(const ModelData& data, const ModelParams& params);

/// Exponential growth-phase lengths over crises with an observed peak.
double length_loglik(const ModelData& data, double psi);

/// Logit-normal peak proportions over crises with an observed peak.
double peak_loglik(const ModelData& data, double rho, double sigma_rho);

double crisis_prior(const CrisisParams& params, const GlobalParams& global);
double country_prior(const CountryNoise& noise, const GlobalParams& global);

/// Hierarchical priors over all crisis- and country-level parameters.
double prior_logdensity(const ModelParams& params);

/// Appendix hyperpriors, plus N(0, 3) / InvGamma(0.1, 0.1) on lambda_g and
/// sigma_lambda.
double hyperprior_logdensity(const GlobalParams& global);

double joint_logposterior(const ModelData& data, const ModelParams& params);

}  // namespace crisisflow
