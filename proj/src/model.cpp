#include "crisisflow/model.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace crisisflow {

namespace {

constexpr double kHyperMeanSd = 3.0;
constexpr double kNoiseMeanLoc = -7.0;
constexpr double kNoiseMeanSd = 4.0;
constexpr double kInvGammaShape = 0.1;
constexpr double kInvGammaScale = 0.1;

double ig(double x) { return inv_gamma_logpdf(x, kInvGammaShape, kInvGammaScale); }

// log P(omega > 0) for a t3(loc, scale) variate.
double log_mass_positive(double loc, double scale) { return std::log(student_t3_cdf(loc / scale)); }
double log_mass_negative(double loc, double scale) { return std::log(student_t3_cdf(-loc / scale)); }

}  // namespace

bool ModelParams::feasible() const {
  return global.feasible() &&
         std::all_of(crises.begin(), crises.end(), [](const auto& c) { return c.feasible(); }) &&
         std::all_of(countries.begin(), countries.end(), [](const auto& c) { return c.feasible(); });
}

ModelData make_model_data(const std::vector<CountrySeries>& series, const std::vector<CrisisSegment>& segments) {
  std::map<std::string, const CountrySeries*> by_code;
  for (const auto& s : series) by_code[s.country_code] = &s;

  ModelData data;
  std::map<std::string, Index> country_index;
  for (const auto& seg : segments) {
    if (!country_index.count(seg.country_code)) {
      country_index[seg.country_code] = static_cast<Index>(data.countries.size());
      data.countries.push_back(seg.country_code);
    }
  }
  data.crises_of_country.resize(data.countries.size());

  for (const auto& seg : segments) {
    auto it = by_code.find(seg.country_code);
    if (it == by_code.end()) throw DataError("no series for segment country " + seg.country_code);
    const CountrySeries& s = *it->second;
    if (!s.contains(seg.t_start) || !s.contains(seg.t_last) || !s.contains(seg.t_peak))
      throw DataError("segment " + std::to_string(seg.crisis_id) + " outside the observed span of " + seg.country_code);

    CrisisData c;
    c.crisis_id = seg.crisis_id;
    c.country = country_index.at(seg.country_code);
    c.status = seg.status;
    c.t_start = seg.t_start;
    c.t_peak = seg.t_peak;
    c.t_last = seg.t_last;
    const Year end = seg.status == CrisisStatus::OngoingGrowth ? seg.t_peak : seg.fit_end();
    const Index n = std::max<Index>(0, end - seg.t_start);
    c.r_prev.resize(n);
    c.increment.resize(n);
    for (Index i = 0; i < n; ++i) {
      const Year t = seg.t_start + static_cast<Year>(i) + 1;
      c.r_prev(i) = s.at(t - 1);
      c.increment(i) = s.at(t) - s.at(t - 1);
    }
    c.n_growth = std::min<Index>(n, seg.t_peak - seg.t_start);
    c.r_peak = s.at(seg.t_peak);
    c.r_last = s.at(seg.t_last);
    c.r_max = s.r.segment(s.index_of(seg.t_start), seg.t_last - seg.t_start + 1).maxCoeff();
    if (c.peak_observed() && !(c.r_peak > 0 && c.r_peak < 1))
      throw DataError("crisis " + std::to_string(seg.crisis_id) + ": peak proportion must lie in (0, 1)");
    data.crises_of_country[static_cast<std::size_t>(c.country)].push_back(static_cast<Index>(data.crises.size()));
    data.crises.push_back(std::move(c));
  }
  return data;
}

double expected_delta(const CrisisSegment& segment, const CrisisParams& params, double r_prev, Year t) {
  if (t <= segment.t_start || t > segment.fit_end())
    throw std::out_of_range("expected_delta: year " + std::to_string(t) + " outside crisis " +
                            std::to_string(segment.crisis_id));
  const double omega = t <= segment.t_peak ? params.omega_growth : params.omega_decline;
  return logistic_rate(r_prev, omega, params.lambda);
}

double crisis_process_loglik(const CrisisData& crisis, const CrisisParams& params, const CountryNoise& noise) {
  if (!(params.lambda > 0 && params.lambda < 1)) return kNegInf<double>;
  if (!(noise.sigma_growth > 0 && noise.sigma_decline > 0)) return kNegInf<double>;
  double total = 0;
  const Index n = crisis.increment.size();
  for (Index i = 0; i < n; ++i) {
    const bool growth = i < crisis.n_growth;
    const double xi = logistic_rate(crisis.r_prev(i), growth ? params.omega_growth : params.omega_decline,
                                    params.lambda);
    total += normal_logpdf(crisis.increment(i), xi, growth ? noise.sigma_growth : noise.sigma_decline);
  }
  return total;
}

double process_loglik(const ModelData& data, const ModelParams& params) {
  double total = 0;
  for (std::size_t m = 0; m < data.crises.size(); ++m) {
    const auto& c = data.crises[m];
    total += crisis_process_loglik(c, params.crises[m], params.countries[static_cast<std::size_t>(c.country)]);
  }
  return total;
}

double length_loglik(const ModelData& data, double psi) {
  if (!(psi > 0)) return kNegInf<double>;
  double total = 0;
  for (const auto& c : data.crises)
    if (c.peak_observed()) total += exponential_logpdf(c.length(), psi);
  return total;
}

double peak_loglik(const ModelData& data, double rho, double sigma_rho) {
  if (!(sigma_rho > 0)) return kNegInf<double>;
  double total = 0;
  for (const auto& c : data.crises)
    if (c.peak_observed()) total += normal_logpdf(logit(c.r_peak), rho, sigma_rho);
  return total;
}

double crisis_prior(const CrisisParams& p, const GlobalParams& g) {
  if (!p.feasible()) return kNegInf<double>;
  double lp = normal_logpdf(logit(p.lambda), g.lambda_g, g.sigma_lambda);
  lp += student_t3_logpdf(p.omega_growth, g.mu_omega1, g.sigma_omega1) - log_mass_positive(g.mu_omega1, g.sigma_omega1);
  lp += student_t3_logpdf(p.omega_decline, g.mu_omega2, g.sigma_omega2) -
        log_mass_negative(g.mu_omega2, g.sigma_omega2);
  return lp;
}

double country_prior(const CountryNoise& n, const GlobalParams& g) {
  if (!n.feasible()) return kNegInf<double>;
  return normal_logpdf(std::log(n.sigma_growth), g.mu_sigma1, g.sigma_sigma1) +
         normal_logpdf(std::log(n.sigma_decline), g.mu_sigma2, g.sigma_sigma2);
}

double prior_logdensity(const ModelParams& params) {
  if (!params.global.feasible()) return kNegInf<double>;
  double lp = 0;
  for (const auto& c : params.crises) lp += crisis_prior(c, params.global);
  for (const auto& n : params.countries) lp += country_prior(n, params.global);
  return lp;
}

double hyperprior_logdensity(const GlobalParams& g) {
  if (!g.feasible()) return kNegInf<double>;
  double lp = 0;
  lp += normal_logpdf(g.rho, 0.0, kHyperMeanSd) + ig(g.sigma_rho);
  lp += ig(g.psi);
  lp += normal_logpdf(g.lambda_g, 0.0, kHyperMeanSd) + ig(g.sigma_lambda);
  lp += normal_logpdf(g.mu_omega1, 0.0, kHyperMeanSd) + normal_logpdf(g.mu_omega2, 0.0, kHyperMeanSd);
  lp += ig(g.sigma_omega1) + ig(g.sigma_omega2);
  lp += normal_logpdf(g.mu_sigma1, kNoiseMeanLoc, kNoiseMeanSd) + normal_logpdf(g.mu_sigma2, kNoiseMeanLoc, kNoiseMeanSd);
  lp += ig(g.sigma_sigma1) + ig(g.sigma_sigma2);
  return lp;
}

double joint_logposterior(const ModelData& data, const ModelParams& params) {
  const double hyper = hyperprior_logdensity(params.global);
  if (std::isinf(hyper)) return hyper;
  const double prior = prior_logdensity(params);
  if (std::isinf(prior)) return prior;
  return process_loglik(data, params) + length_loglik(data, params.global.psi) +
         peak_loglik(data, params.global.rho, params.global.sigma_rho) + prior + hyper;
}

}  // namespace crisisflow
