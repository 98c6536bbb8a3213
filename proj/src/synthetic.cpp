#include "crisisflow/synthetic.hpp"

#include "crisisflow/math.hpp"

#include <algorithm>
#include <cmath>

namespace crisisflow {

GlobalParams synthetic_globals() {
  GlobalParams g;
  g.rho = -3.0;
  g.sigma_rho = 0.8;
  g.psi = 0.12;
  g.lambda_g = logit(0.15);
  g.sigma_lambda = 0.4;
  g.mu_omega1 = 0.35;
  g.sigma_omega1 = 0.1;
  g.mu_omega2 = -0.2;
  g.sigma_omega2 = 0.08;
  g.mu_sigma1 = std::log(0.001);
  g.sigma_sigma1 = 0.3;
  g.mu_sigma2 = std::log(0.0008);
  g.sigma_sigma2 = 0.3;
  return g;
}

namespace {

double draw_t3(double loc, double scale, Rng& rng) {
  std::student_t_distribution<double> t(3.0);
  return loc + scale * t(rng);
}

}  // namespace

CrisisParams draw_crisis_params(const GlobalParams& g, Rng& rng) {
  CrisisParams p;
  do p.omega_growth = draw_t3(g.mu_omega1, g.sigma_omega1, rng);
  while (!(p.omega_growth > 0));
  do p.omega_decline = draw_t3(g.mu_omega2, g.sigma_omega2, rng);
  while (!(p.omega_decline < 0));
  std::normal_distribution<double> normal(0.0, 1.0);
  p.lambda = inv_logit(g.lambda_g + g.sigma_lambda * normal(rng));
  return p;
}

CountryNoise draw_country_noise(const GlobalParams& g, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const double s1 = std::exp(g.mu_sigma1 + g.sigma_sigma1 * normal(rng));
  const double s2 = std::exp(g.mu_sigma2 + g.sigma_sigma2 * normal(rng));
  return {s1, s2};
}

Vector simulate_path(double r0, int n_growth, int n_total, const CrisisParams& p, const CountryNoise& noise, Rng& rng,
                     std::optional<double> floor_value) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector r(n_total + 1);
  r(0) = r0;
  for (int i = 1; i <= n_total; ++i) {
    const bool growth = i <= n_growth;
    const double prev = r(i - 1);
    const double rate = logistic_rate(prev, growth ? p.omega_growth : p.omega_decline, p.lambda);
    double next = prev + rate + (growth ? noise.sigma_growth : noise.sigma_decline) * normal(rng);
    if (floor_value && next < 0) next = *floor_value;
    r(i) = next;
  }
  return r;
}

namespace {

constexpr int kMaxPeakAttempts = 10000;

std::string country_code(int i) {
  std::string code = "S";
  code += static_cast<char>('A' + (i / 26) % 26);
  code += static_cast<char>('A' + i % 26);
  return code;
}

}  // namespace

SyntheticDataset simulate_dataset(const SyntheticConfig& cfg, std::uint64_t seed) {
  SyntheticDataset out;
  const int n_years = cfg.last_year - cfg.first_year + 1;
  for (int ci = 0; ci < cfg.n_countries; ++ci) {
    Rng rng = make_stream(seed, {kStreamSynthetic, static_cast<std::uint64_t>(ci)});
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::exponential_distribution<double> length_dist(cfg.global.psi);
    const std::string code = country_code(ci);
    const CountryNoise noise = draw_country_noise(cfg.global, rng);
    out.noise.emplace_back(code, noise);

    Vector r = Vector::Constant(n_years, cfg.baseline);
    for (int i = 0; i < n_years; ++i) r(i) *= std::exp(0.2 * normal(rng));

    auto uniform_year = [&](Year lo, Year hi) {
      return lo + static_cast<Year>(std::floor(unif(rng) * static_cast<double>(hi - lo + 1)));
    };
    auto growth_years = [&] {
      return std::clamp(static_cast<int>(std::ceil(length_dist(rng))), 1, cfg.max_growth_years);
    };

    const bool two = unif(rng) < cfg.two_crisis_fraction;
    Year start = two ? uniform_year(cfg.first_year + 3, cfg.first_year + 8)
                     : uniform_year(cfg.first_year + 3, cfg.latest_start);
    double r0 = cfg.start_level * std::exp(0.3 * normal(rng));
    for (int k = 0; k < (two ? 2 : 1); ++k) {
      // The joint density also scores the peak proportion, so paths are
      // accepted with probability proportional to its logit-normal density.
      CrisisParams p;
      int growth = 0;
      const int total = cfg.last_year - start;
      Vector path;
      for (int attempt = 0;; ++attempt) {
        p = draw_crisis_params(cfg.global, rng);
        growth = std::min(growth_years(), total - 1);
        path = simulate_path(r0, growth, total, p, noise, rng, 0.001);
        const double peak = path(growth);
        if (!(peak > 0 && peak < 1)) continue;
        const double z = (logit(peak) - cfg.global.rho) / cfg.global.sigma_rho;
        if (attempt >= kMaxPeakAttempts || unif(rng) < std::exp(-0.5 * z * z)) break;
      }
      r.segment(start - cfg.first_year, total + 1) = path;
      out.crises.push_back({code, start, start + growth, p});
      if (k == 0 && two) {
        // The next crisis breaks out during this one's decline.
        const Year next = std::min(start + growth + 8 + static_cast<Year>(unif(rng) * 7.0), cfg.latest_start);
        if (next <= start + growth + 4) break;
        start = next;
        r0 = r(start - cfg.first_year);
      }
    }

    double population = 2e6 + unif(rng) * 4.8e7;
    for (int i = 0; i < n_years; ++i) {
      const Year y = cfg.first_year + i;
      const auto pop = static_cast<std::int64_t>(std::llround(population));
      const double ratio = std::max(r(i), 0.0) / (1.0 - std::max(r(i), 0.0));
      const auto total = static_cast<std::int64_t>(std::llround(ratio * static_cast<double>(pop)));
      const auto refugees = static_cast<std::int64_t>(std::llround(0.85 * static_cast<double>(total)));
      out.counts.push_back({code, y, refugees, total - refugees});
      out.population.push_back({code, y, pop});
      population *= 1.02;
    }
  }
  out.series = build_proportion_series(out.counts, out.population);
  return out;
}

}  // namespace crisisflow
