#include "crisisflow/infer.hpp"

#include "crisisflow/csv.hpp"

#include "crisisflow/diagnostics.hpp"
#include "crisisflow/math.hpp"
#include "crisisflow/rng.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numeric>
#include <stdexcept>
#include <thread>

namespace crisisflow {

void SamplerConfig::validate() const {
  if (chains < 2) throw ConfigError("chains must be >= 2 (split R-hat needs several chains)");
  if (warmup_iters < 1 || keep_iters < 1 || thin < 1) throw ConfigError("warmup_iters, keep_iters and thin must be positive");
  if (keep_iters / thin < 4) throw ConfigError("keep_iters / thin must retain at least 4 draws");
  if (!(target_accept > 0 && target_accept < 1)) throw ConfigError("target_accept must be in (0, 1)");
  if (!(rhat_threshold > 1)) throw ConfigError("rhat_threshold must exceed 1");
}

namespace {

struct GlobalCoord {
  const char* name;
  Transform transform;
};

constexpr GlobalCoord kGlobalCoords[] = {
    {"rho", Transform::Identity},       {"sigma_rho", Transform::Log},    {"psi", Transform::Log},
    {"lambda_g", Transform::Identity},  {"sigma_lambda", Transform::Log}, {"mu_omega1", Transform::Identity},
    {"sigma_omega1", Transform::Log},   {"mu_omega2", Transform::Identity}, {"sigma_omega2", Transform::Log},
    {"mu_sigma1", Transform::Identity}, {"sigma_sigma1", Transform::Log}, {"mu_sigma2", Transform::Identity},
    {"sigma_sigma2", Transform::Log},
};

// Global sub-blocks as (offset, size) within the global segment. Given the
// crisis and country parameters they are conditionally independent, so each
// is updated against only the terms it enters.
enum GlobalGroup : Index { kPeakGroup, kLengthGroup, kLambdaGroup, kOmega1Group, kOmega2Group, kSigma1Group,
                           kSigma2Group, kGroupCount };
constexpr Index kGroupOffset[kGroupCount] = {0, 2, 3, 5, 7, 9, 11};
constexpr Index kGroupSize[kGroupCount] = {2, 1, 2, 2, 2, 2, 2};
static_assert(std::size(kGlobalCoords) == ParamLayout::kGlobalWidth);

double to_constrained(double z, Transform t) {
  switch (t) {
    case Transform::Identity: return z;
    case Transform::Log: return std::exp(z);
    case Transform::NegLog: return -std::exp(z);
    case Transform::Logit: return inv_logit(z);
  }
  return z;
}

double to_unconstrained(double x, Transform t) {
  switch (t) {
    case Transform::Identity: return x;
    case Transform::Log: return std::log(x);
    case Transform::NegLog: return std::log(-x);
    case Transform::Logit: return logit(x);
  }
  return x;
}

double coord_log_jacobian(double z, Transform t) {
  switch (t) {
    case Transform::Identity: return 0.0;
    case Transform::Log:
    case Transform::NegLog: return z;
    case Transform::Logit: return -log1p_exp(z) - log1p_exp(-z);
  }
  return 0.0;
}

GlobalParams global_from(const Vector& x, Index off) {
  GlobalParams g;
  g.rho = x(off + 0);
  g.sigma_rho = x(off + 1);
  g.psi = x(off + 2);
  g.lambda_g = x(off + 3);
  g.sigma_lambda = x(off + 4);
  g.mu_omega1 = x(off + 5);
  g.sigma_omega1 = x(off + 6);
  g.mu_omega2 = x(off + 7);
  g.sigma_omega2 = x(off + 8);
  g.mu_sigma1 = x(off + 9);
  g.sigma_sigma1 = x(off + 10);
  g.mu_sigma2 = x(off + 11);
  g.sigma_sigma2 = x(off + 12);
  return g;
}

void global_into(const GlobalParams& g, Vector& x, Index off) {
  x.segment(off, ParamLayout::kGlobalWidth) << g.rho, g.sigma_rho, g.psi, g.lambda_g, g.sigma_lambda, g.mu_omega1,
      g.sigma_omega1, g.mu_omega2, g.sigma_omega2, g.mu_sigma1, g.sigma_sigma1, g.mu_sigma2, g.sigma_sigma2;
}

}  // namespace

std::string crisis_param_name(const char* base, int crisis_id) {
  return std::string(base) + "[" + std::to_string(crisis_id) + "]";
}

std::string country_param_name(const char* base, const std::string& country) {
  return std::string(base) + "[" + country + "]";
}

const std::vector<std::string>& global_param_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& c : kGlobalCoords) n.emplace_back(c.name);
    return n;
  }();
  return names;
}

ParamLayout::ParamLayout(const ModelData& data)
    : ParamLayout(
          [&] {
            std::vector<int> ids;
            for (const auto& c : data.crises) ids.push_back(c.crisis_id);
            return ids;
          }(),
          data.countries) {}

ParamLayout::ParamLayout(const std::vector<int>& crisis_ids, const std::vector<std::string>& countries)
    : n_crises_(static_cast<Index>(crisis_ids.size())), n_countries_(static_cast<Index>(countries.size())) {
  for (int id : crisis_ids) {
    coords_.push_back({crisis_param_name("omega1", id), Transform::Log, true});
    coords_.push_back({crisis_param_name("omega2", id), Transform::NegLog, true});
    coords_.push_back({crisis_param_name("lambda", id), Transform::Logit, false});
  }
  for (const auto& c : countries) {
    coords_.push_back({country_param_name("sigma1", c), Transform::Log, false});
    coords_.push_back({country_param_name("sigma2", c), Transform::Log, false});
  }
  for (const auto& g : kGlobalCoords) coords_.push_back({g.name, g.transform, g.transform != Transform::Identity});
}

std::vector<std::string> ParamLayout::names() const {
  std::vector<std::string> out;
  out.reserve(coords_.size());
  for (const auto& c : coords_) out.push_back(c.name);
  return out;
}

std::vector<Block> ParamLayout::blocks() const {
  std::vector<Block> out;
  for (Index m = 0; m < n_crises_; ++m) out.push_back({crisis_offset(m), kCrisisWidth});
  for (Index c = 0; c < n_countries_; ++c) out.push_back({country_offset(c), kCountryWidth});
  for (Index k = 0; k < kGroupCount; ++k) out.push_back({global_offset() + kGroupOffset[k], kGroupSize[k]});
  return out;
}

Vector ParamLayout::constrained(const Vector& z) const {
  Vector x(z.size());
  for (Index i = 0; i < z.size(); ++i) x(i) = to_constrained(z(i), coords_[static_cast<std::size_t>(i)].transform);
  return x;
}

Vector ParamLayout::unconstrained(const Vector& x) const {
  Vector z(x.size());
  for (Index i = 0; i < x.size(); ++i) z(i) = to_unconstrained(x(i), coords_[static_cast<std::size_t>(i)].transform);
  return z;
}

Vector ParamLayout::transform(const ModelParams& p) const {
  if (static_cast<Index>(p.crises.size()) != n_crises_ || static_cast<Index>(p.countries.size()) != n_countries_)
    throw std::invalid_argument("transform: parameter keys do not match the layout");
  if (!p.feasible()) throw std::invalid_argument("transform: infeasible parameters");
  Vector x(dim());
  for (Index m = 0; m < n_crises_; ++m) {
    const auto& c = p.crises[static_cast<std::size_t>(m)];
    x.segment(crisis_offset(m), kCrisisWidth) << c.omega_growth, c.omega_decline, c.lambda;
  }
  for (Index c = 0; c < n_countries_; ++c) {
    const auto& n = p.countries[static_cast<std::size_t>(c)];
    x.segment(country_offset(c), kCountryWidth) << n.sigma_growth, n.sigma_decline;
  }
  global_into(p.global, x, global_offset());
  return unconstrained(x);
}

CrisisParams ParamLayout::crisis(const Vector& z, Index m) const {
  const Index o = crisis_offset(m);
  return {std::exp(z(o)), -std::exp(z(o + 1)), inv_logit(z(o + 2))};
}

CountryNoise ParamLayout::country(const Vector& z, Index c) const {
  const Index o = country_offset(c);
  return {std::exp(z(o)), std::exp(z(o + 1))};
}

GlobalParams ParamLayout::global(const Vector& z) const {
  const Index o = global_offset();
  Vector x(kGlobalWidth);
  for (Index i = 0; i < kGlobalWidth; ++i) x(i) = to_constrained(z(o + i), kGlobalCoords[i].transform);
  return global_from(x, 0);
}

ModelParams ParamLayout::untransform(const Vector& z) const {
  ModelParams p;
  p.crises.reserve(static_cast<std::size_t>(n_crises_));
  for (Index m = 0; m < n_crises_; ++m) p.crises.push_back(crisis(z, m));
  for (Index c = 0; c < n_countries_; ++c) p.countries.push_back(country(z, c));
  p.global = global(z);
  return p;
}

double ParamLayout::log_jacobian(const Vector& z, Index offset, Index size) const {
  double lj = 0;
  for (Index i = offset; i < offset + size; ++i) {
    const auto& c = coords_[static_cast<std::size_t>(i)];
    if (c.jacobian) lj += coord_log_jacobian(z(i), c.transform);
  }
  return lj;
}

double ParamLayout::log_jacobian(const Vector& z) const { return log_jacobian(z, 0, dim()); }

double PosteriorTarget::log_density(const Vector& z) const {
  return joint_logposterior(data_, layout_.untransform(z)) + layout_.log_jacobian(z);
}

double PosteriorTarget::block_log_density(const Vector& z, std::size_t block) const {
  const Index b = static_cast<Index>(block);
  const Index n_crises = layout_.n_crises();
  const Index n_countries = layout_.n_countries();
  const GlobalParams g = layout_.global(z);

  if (b < n_crises) {
    const auto& crisis = data_.crises[block];
    const CrisisParams p = layout_.crisis(z, b);
    const double prior = crisis_prior(p, g);
    if (std::isinf(prior)) return prior;
    return prior + crisis_process_loglik(crisis, p, layout_.country(z, crisis.country)) +
           layout_.log_jacobian(z, layout_.crisis_offset(b), ParamLayout::kCrisisWidth);
  }
  if (b < n_crises + n_countries) {
    const Index c = b - n_crises;
    const CountryNoise noise = layout_.country(z, c);
    double lp = country_prior(noise, g);
    if (std::isinf(lp)) return lp;
    for (Index m : data_.crises_of_country[static_cast<std::size_t>(c)])
      lp += crisis_process_loglik(data_.crises[static_cast<std::size_t>(m)], layout_.crisis(z, m), noise);
    return lp + layout_.log_jacobian(z, layout_.country_offset(c), ParamLayout::kCountryWidth);
  }

  const Index group = b - n_crises - n_countries;
  double lp = hyperprior_logdensity(g);
  if (std::isinf(lp)) return lp;
  switch (group) {
    case kPeakGroup: lp += peak_loglik(data_, g.rho, g.sigma_rho); break;
    case kLengthGroup: lp += length_loglik(data_, g.psi); break;
    case kLambdaGroup:
    case kOmega1Group:
    case kOmega2Group:
      for (Index m = 0; m < n_crises; ++m) lp += crisis_prior(layout_.crisis(z, m), g);
      break;
    default:
      for (Index c = 0; c < n_countries; ++c) lp += country_prior(layout_.country(z, c), g);
  }
  return lp + layout_.log_jacobian(z, layout_.global_offset() + kGroupOffset[group], kGroupSize[group]);
}

namespace {

double mean_of(const std::vector<double>& v, double fallback) {
  if (v.empty()) return fallback;
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double sd_of(const std::vector<double>& v, double floor) {
  if (v.size() < 2) return floor;
  const double m = mean_of(v, 0.0);
  double ss = 0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::max(std::sqrt(ss / static_cast<double>(v.size() - 1)), floor);
}

// Least-squares rate for increments ~ omega * r (1 - r / lambda).
double ls_rate(const CrisisData& c, double lambda, Index from, Index to, double fallback, bool positive) {
  double sxy = 0, sxx = 0;
  for (Index i = from; i < to; ++i) {
    const double r = c.r_prev(i);
    const double x = r * (1.0 - r / lambda);
    sxy += x * c.increment(i);
    sxx += x * x;
  }
  if (!(sxx > 0)) return fallback;
  const double omega = sxy / sxx;
  if (!std::isfinite(omega) || (positive ? omega <= 0 : omega >= 0)) return fallback;
  return omega;
}

}  // namespace

ModelParams initial_params(const ModelData& data) {
  constexpr double kSigmaFloor = 1e-4;
  ModelParams p;
  std::vector<double> w1, w2, logit_lambda, peaks, lengths;
  for (const auto& c : data.crises) {
    CrisisParams cp;
    cp.lambda = std::clamp(1.5 * c.r_max, 1e-4, 0.999);
    cp.omega_growth = ls_rate(c, cp.lambda, 0, c.n_growth, 0.3, true);
    cp.omega_decline = ls_rate(c, cp.lambda, c.n_growth, c.increment.size(), -0.3, false);
    p.crises.push_back(cp);
    w1.push_back(cp.omega_growth);
    w2.push_back(cp.omega_decline);
    logit_lambda.push_back(logit(cp.lambda));
    if (c.peak_observed()) {
      peaks.push_back(logit(c.r_peak));
      lengths.push_back(c.length());
    }
  }

  std::vector<double> log_s1, log_s2;
  for (std::size_t ci = 0; ci < data.countries.size(); ++ci) {
    std::vector<double> inc1, inc2;
    for (Index m : data.crises_of_country[ci]) {
      const auto& c = data.crises[static_cast<std::size_t>(m)];
      for (Index i = 0; i < c.increment.size(); ++i) (i < c.n_growth ? inc1 : inc2).push_back(c.increment(i));
    }
    CountryNoise n{sd_of(inc1, kSigmaFloor), sd_of(inc2, kSigmaFloor)};
    p.countries.push_back(n);
    log_s1.push_back(std::log(n.sigma_growth));
    log_s2.push_back(std::log(n.sigma_decline));
  }

  auto& g = p.global;
  if (peaks.empty())
    for (const auto& c : data.crises) peaks.push_back(logit(std::clamp(c.r_max, 1e-6, 0.5)));
  g.rho = mean_of(peaks, -4.0);
  g.sigma_rho = sd_of(peaks, 0.5);
  g.psi = 1.0 / std::max(mean_of(lengths, 10.0), 1.0);
  g.lambda_g = mean_of(logit_lambda, -3.0);
  g.sigma_lambda = sd_of(logit_lambda, 0.5);
  g.mu_omega1 = mean_of(w1, 0.3);
  g.sigma_omega1 = sd_of(w1, 0.1);
  g.mu_omega2 = mean_of(w2, -0.3);
  g.sigma_omega2 = sd_of(w2, 0.1);
  g.mu_sigma1 = mean_of(log_s1, -7.0);
  g.sigma_sigma1 = sd_of(log_s1, 0.5);
  g.mu_sigma2 = mean_of(log_s2, -7.0);
  g.sigma_sigma2 = sd_of(log_s2, 0.5);
  return p;
}

Vector init_chain(const ModelData& data, const ParamLayout& layout, std::uint64_t seed, int chain) {
  Vector z = layout.transform(initial_params(data));
  Rng rng = make_stream(seed, {kStreamInit, static_cast<std::uint64_t>(chain)});
  std::normal_distribution<double> jitter(0.0, 0.1);
  for (Index i = 0; i < z.size(); ++i) z(i) += jitter(rng);
  return z;
}

Index PosteriorDraws::column(const std::string& name) const {
  auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) throw DataError("draws have no parameter '" + name + "'");
  return static_cast<Index>(it - names.begin());
}

PosteriorDraws fit(const ModelData& data, const SamplerConfig& cfg, const FitOptions& options) {
  cfg.validate();
  if (data.crises.empty()) throw DataError("fit: no crises to fit");

  const ParamLayout layout(data);
  auto blocks = layout.blocks();
  if (options.fixed_global) blocks.resize(static_cast<std::size_t>(layout.n_crises() + layout.n_countries()));
  const PosteriorTarget target(data, layout);

  std::vector<ChainResult> results(static_cast<std::size_t>(cfg.chains));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(cfg.chains));
  {
    std::vector<std::jthread> workers;
    for (int ch = 0; ch < cfg.chains; ++ch) {
      workers.emplace_back([&, ch] {
        try {
          Vector z0 = init_chain(data, layout, cfg.seed, ch);
          if (options.fixed_global) {
            ModelParams p = layout.untransform(z0);
            p.global = *options.fixed_global;
            z0 = layout.transform(p);
          }
          results[static_cast<std::size_t>(ch)] = run_chain(cfg, ch, z0, target, blocks);
        } catch (...) {
          errors[static_cast<std::size_t>(ch)] = std::current_exception();
        }
      });
    }
  }
  for (int ch = 0; ch < cfg.chains; ++ch) {
    if (!errors[static_cast<std::size_t>(ch)]) continue;
    try {
      std::rethrow_exception(errors[static_cast<std::size_t>(ch)]);
    } catch (const std::exception& e) {
      throw std::runtime_error("chain " + std::to_string(ch) + " failed to initialize: " + e.what());
    }
  }

  PosteriorDraws draws;
  draws.names = layout.names();
  draws.seed = cfg.seed;
  const Index per_chain = results.front().samples.rows();
  draws.values.resize(per_chain * cfg.chains, layout.dim());
  for (int ch = 0; ch < cfg.chains; ++ch) {
    const auto& r = results[static_cast<std::size_t>(ch)];
    for (Index i = 0; i < per_chain; ++i) {
      draws.values.row(ch * per_chain + i) = layout.constrained(r.samples.row(i).transpose()).transpose();
      draws.chain.push_back(ch);
      draws.iter.push_back(r.iters[static_cast<std::size_t>(i)]);
    }
  }

  const Index sampled_dim = options.fixed_global ? layout.global_offset() : layout.dim();
  for (Index j = 0; j < sampled_dim; ++j) {
    Matrix per(per_chain, cfg.chains);
    for (int ch = 0; ch < cfg.chains; ++ch)
      per.col(ch) = results[static_cast<std::size_t>(ch)].samples.col(j);
    ParamDiagnostics d{draws.names[static_cast<std::size_t>(j)], split_rhat(per), effective_sample_size(per)};
    draws.diagnostics.push_back(std::move(d));
  }
  int above = 0;
  const ParamDiagnostics* worst = nullptr;
  for (const auto& d : draws.diagnostics) {
    if (d.rhat <= cfg.rhat_threshold) continue;
    ++above;
    if (!worst || !(d.rhat <= worst->rhat)) worst = &d;
  }
  if (worst)
    draws.warnings.push_back(std::to_string(above) + " parameters have R-hat above " +
                             format_sig(cfg.rhat_threshold, 6) + "; worst " + worst->name + " at " +
                             format_sig(worst->rhat, 6));
  return draws;
}

}  // namespace crisisflow
