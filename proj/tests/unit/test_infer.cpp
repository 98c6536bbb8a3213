#include <doctest.h>

#include "fixtures.hpp"

#include "crisisflow/infer.hpp"
#include "crisisflow/synthetic.hpp"

#include <algorithm>
#include <numeric>
#include <random>

using namespace crisisflow;
using testing::make_segment;
using testing::make_series;

namespace {

ModelData small_data() {
  const auto a = make_series("AAA", 2000, {0.002, 0.006, 0.015, 0.03, 0.04, 0.03, 0.022, 0.016, 0.012, 0.009});
  const auto b = make_series("BBB", 2000, {0.001, 0.004, 0.01, 0.02, 0.025, 0.027, 0.02, 0.015, 0.011, 0.009});
  return make_model_data({a, b}, {make_segment(1, "AAA", 2000, 2004, std::nullopt, 2009, CrisisStatus::OngoingDecline),
                                  make_segment(2, "BBB", 2000, 2005, std::nullopt, 2009, CrisisStatus::OngoingDecline)});
}

Vector random_point(const ParamLayout& layout, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0, 0.7);
  Vector z(layout.dim());
  for (Index i = 0; i < z.size(); ++i) z(i) = n(rng);
  return z;
}

}  // namespace

TEST_CASE("layout names and offsets") {
  const auto data = small_data();
  const ParamLayout layout(data);
  CHECK(layout.dim() == 3 * 2 + 2 * 2 + 13);
  const auto names = layout.names();
  CHECK(names[0] == "omega1[1]");
  CHECK(names[5] == "lambda[2]");
  CHECK(names[6] == "sigma1[AAA]");
  CHECK(names[layout.global_offset()] == global_param_names().front());
  const auto blocks = layout.blocks();
  CHECK(blocks.size() == 2 + 2 + 7);
  Index covered = 0;
  for (const auto& b : blocks) covered += b.size;
  CHECK(covered == layout.dim());
}

TEST_CASE("transform round-trips") {
  const ParamLayout layout(small_data());
  for (std::uint64_t s = 0; s < 20; ++s) {
    const Vector z = random_point(layout, s);
    const Vector back = layout.transform(layout.untransform(z));
    CHECK((back - z).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((layout.unconstrained(layout.constrained(z)) - z).cwiseAbs().maxCoeff() < 1e-10);
  }
  ModelParams bad = layout.untransform(Vector::Zero(layout.dim()));
  bad.crises[0].omega_growth = -1;
  CHECK_THROWS_AS(layout.transform(bad), std::invalid_argument);
}

TEST_CASE("log Jacobian matches finite differences of the constrained map") {
  const ParamLayout layout(small_data());
  const Vector z = random_point(layout, 99);
  double numeric = 0;
  for (Index i = 0; i < z.size(); ++i) {
    if (!layout.coordinates()[static_cast<std::size_t>(i)].jacobian) continue;
    const double h = 1e-6;
    Vector hi = z, lo = z;
    hi(i) += h;
    lo(i) -= h;
    numeric += std::log(std::abs((layout.constrained(hi)(i) - layout.constrained(lo)(i)) / (2 * h)));
  }
  CHECK(layout.log_jacobian(z) == doctest::Approx(numeric).epsilon(1e-7));
}

TEST_CASE("unconstrained density is the joint posterior plus the Jacobian") {
  const auto data = small_data();
  const ParamLayout layout(data);
  const PosteriorTarget target(data, layout);
  const Vector z = random_point(layout, 3);
  CHECK(target.log_density(z) ==
        doctest::Approx(joint_logposterior(data, layout.untransform(z)) + layout.log_jacobian(z)).epsilon(1e-12));
}

TEST_CASE("block densities change exactly as the full density does") {
  const auto data = small_data();
  const ParamLayout layout(data);
  const PosteriorTarget target(data, layout);
  std::mt19937_64 rng(8);
  std::normal_distribution<double> n(0, 0.3);
  const auto blocks = layout.blocks();
  for (int trial = 0; trial < 20; ++trial) {
    const Vector z = random_point(layout, 100 + static_cast<std::uint64_t>(trial));
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      Vector z2 = z;
      for (Index i = 0; i < blocks[b].size; ++i) z2(blocks[b].offset + i) += n(rng);
      const double full = target.log_density(z2) - target.log_density(z);
      const double local = target.block_log_density(z2, b) - target.block_log_density(z, b);
      CAPTURE(b);
      CHECK(local == doctest::Approx(full).epsilon(1e-9).scale(1.0));
    }
  }
}

TEST_CASE("starting points are feasible and reproducible") {
  const auto data = small_data();
  const ParamLayout layout(data);
  CHECK(initial_params(data).feasible());
  const Vector a = init_chain(data, layout, 5, 0), b = init_chain(data, layout, 5, 0), c = init_chain(data, layout, 5, 1);
  CHECK(a == b);
  CHECK(a != c);
  CHECK(std::isfinite(PosteriorTarget(data, layout).log_density(a)));
}

TEST_CASE("fit is reproducible for a fixed seed") {
  const auto data = small_data();
  SamplerConfig cfg;
  cfg.chains = 2;
  cfg.warmup_iters = 300;
  cfg.keep_iters = 300;
  cfg.thin = 3;
  cfg.seed = 11;
  const auto a = fit(data, cfg), b = fit(data, cfg);
  CHECK(a.values == b.values);
  CHECK(a.size() == 200);
  CHECK(a.chain.front() == 0);
  CHECK(a.chain.back() == 1);
  CHECK(a.iter.front() == 3);
  CHECK(a.diagnostics.size() == a.names.size());
  cfg.seed = 12;
  CHECK(fit(data, cfg).values != a.values);
  CHECK_THROWS_AS(fit(ModelData{}, cfg), DataError);
}

TEST_CASE("with no data, draws follow the priors") {
  // Ongoing-growth crises with a single observation contribute no likelihood
  // terms, so crisis and country draws should reproduce their priors. This
  // exercises which coordinates carry a Jacobian.
  ModelData data;
  data.countries = {"AAA"};
  data.crises_of_country = {{}};
  for (int m = 0; m < 4; ++m) {
    CrisisData c;
    c.crisis_id = m + 1;
    c.status = CrisisStatus::OngoingGrowth;
    c.r_peak = c.r_last = c.r_max = 0.05;
    data.crises_of_country[0].push_back(m);
    data.crises.push_back(c);
  }
  GlobalParams g;
  g.lambda_g = -1.5;
  g.sigma_lambda = 0.5;
  g.mu_omega1 = 0.2;
  g.sigma_omega1 = 0.15;
  g.mu_omega2 = -0.1;
  g.sigma_omega2 = 0.2;
  g.mu_sigma1 = -6;
  g.sigma_sigma1 = 0.4;
  SamplerConfig cfg;
  cfg.chains = 2;
  cfg.warmup_iters = 2000;
  cfg.keep_iters = 40000;
  cfg.thin = 10;
  cfg.seed = 21;
  FitOptions opt;
  opt.fixed_global = g;
  const auto draws = fit(data, cfg, opt);

  std::vector<double> logit_lambda, omega1, omega2, log_sigma;
  for (int m = 1; m <= 4; ++m)
    for (Index k = 0; k < draws.size(); ++k) {
      logit_lambda.push_back(logit(draws.values(k, draws.column(crisis_param_name("lambda", m)))));
      omega1.push_back(draws.values(k, draws.column(crisis_param_name("omega1", m))));
      omega2.push_back(draws.values(k, draws.column(crisis_param_name("omega2", m))));
    }
  for (Index k = 0; k < draws.size(); ++k) log_sigma.push_back(std::log(draws.values(k, draws.column("sigma1[AAA]"))));

  auto mean = [](const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0) / v.size(); };
  auto sd = [&](const std::vector<double>& v) {
    const double m = mean(v);
    double ss = 0;
    for (double x : v) ss += (x - m) * (x - m);
    return std::sqrt(ss / (v.size() - 1));
  };
  CHECK(mean(logit_lambda) == doctest::Approx(g.lambda_g).epsilon(0.02));
  CHECK(sd(logit_lambda) == doctest::Approx(g.sigma_lambda).epsilon(0.04));
  CHECK(mean(log_sigma) == doctest::Approx(g.mu_sigma1).epsilon(0.01));
  CHECK(sd(log_sigma) == doctest::Approx(g.sigma_sigma1).epsilon(0.06));

  // Truncated t3 CDF at a few points.
  auto truncated_cdf = [](double x, double loc, double scale, bool positive) {
    const double lo = student_t3_cdf(-loc / scale);
    const double fx = student_t3_cdf((x - loc) / scale);
    return positive ? (fx - lo) / (1 - lo) : fx / lo;
  };
  auto fraction_below = [](const std::vector<double>& v, double x) {
    return static_cast<double>(std::count_if(v.begin(), v.end(), [&](double y) { return y <= x; })) / v.size();
  };
  for (double x : {0.05, 0.2, 0.45})
    CHECK(fraction_below(omega1, x) ==
          doctest::Approx(truncated_cdf(x, g.mu_omega1, g.sigma_omega1, true)).epsilon(0.03).scale(1));
  for (double x : {-0.5, -0.2, -0.05})
    CHECK(fraction_below(omega2, x) ==
          doctest::Approx(truncated_cdf(x, g.mu_omega2, g.sigma_omega2, false)).epsilon(0.03).scale(1));
}

TEST_CASE("posterior recovers the rates of a long simulated crisis") {
  const GlobalParams g = synthetic_globals();
  Rng rng = make_stream(3, {});
  const CrisisParams truth{0.45, -0.2, 0.12};
  const CountryNoise noise{0.0005, 0.0005};
  const Vector path = simulate_path(0.003, 12, 35, truth, noise, rng, std::nullopt);
  const auto s = make_series("AAA", 1980, std::vector<double>(path.data(), path.data() + path.size()));
  const auto data =
      make_model_data({s}, {make_segment(1, "AAA", 1980, 1992, std::nullopt, 2015, CrisisStatus::OngoingDecline)});
  SamplerConfig cfg;
  cfg.chains = 2;
  cfg.warmup_iters = 2000;
  cfg.keep_iters = 4000;
  FitOptions opt;
  opt.fixed_global = g;
  const auto draws = fit(data, cfg, opt);
  auto median = [&](const char* name) {
    const Index j = draws.column(crisis_param_name(name, 1));
    std::vector<double> v(draws.values.col(j).data(), draws.values.col(j).data() + draws.size());
    std::sort(v.begin(), v.end());
    return v[v.size() / 2];
  };
  CHECK(median("omega1") == doctest::Approx(truth.omega_growth).epsilon(0.15));
  CHECK(median("omega2") == doctest::Approx(truth.omega_decline).epsilon(0.15));
  CHECK(median("lambda") == doctest::Approx(truth.lambda).epsilon(0.15));
  CHECK_THROWS_AS(draws.column("nope"), DataError);
}
