#include <doctest.h>

#include "fixtures.hpp"

#include "crisisflow/project.hpp"

using namespace crisisflow;
using testing::make_segment;

namespace {

CrisisDraws constant_draws(Index k, double sigma) {
  CrisisDraws d;
  d.omega_growth = Vector::Constant(k, 0.4);
  d.omega_decline = Vector::Constant(k, -0.2);
  d.lambda = Vector::Constant(k, 0.1);
  d.sigma_growth = Vector::Constant(k, sigma);
  d.sigma_decline = Vector::Constant(k, sigma);
  d.psi = Vector::Constant(k, 0.12);
  d.rho = Vector::Constant(k, -3.0);
  d.sigma_rho = Vector::Constant(k, 0.8);
  return d;
}

ProjectionConfig small_config() {
  ProjectionConfig cfg;
  cfg.horizon = 10;
  cfg.seed = 9;
  return cfg;
}

const CrisisSegment kDecline = make_segment(4, "AAA", 2000, 2008, std::nullopt, 2020, CrisisStatus::OngoingDecline);
const CrisisSegment kGrowth = make_segment(5, "BBB", 2014, 2020, std::nullopt, 2020, CrisisStatus::OngoingGrowth);

}  // namespace

TEST_CASE("benchmark: two thirds remain after five years") {
  const auto b = project_benchmark(0.09, 2021, 30);
  CHECK(b.values(0) == 0.09);
  CHECK(b.values(5) == doctest::Approx(0.06).epsilon(1e-12));
  CHECK(b.years[5] == 2026);
  CHECK(benchmark_rate() == doctest::Approx(-std::log(2.0) / 5));
}

TEST_CASE("noise-free decline follows the recursion") {
  const auto set = project_decline(kDecline, constant_draws(3, 0.0), 0.05, small_config());
  double mu = 0.05;
  for (int h = 0; h < 10; ++h) {
    mu += -0.2 * mu * (1 - mu / 0.1);
    CHECK(set.trajectories(0, h) == doctest::Approx(mu).epsilon(1e-14));
  }
  CHECK(set.years.front() == 2021);
  CHECK(set.years.back() == 2030);
  CHECK(set.quantiles.at(9, 0.025) == doctest::Approx(mu));
}

TEST_CASE("floor replaces negative values") {
  auto draws = constant_draws(200, 0.05);
  const auto set = project_decline(kDecline, draws, 0.002, small_config());
  CHECK(set.trajectories.minCoeff() >= 0.0);
  CHECK((set.trajectories.array() == 0.001).any());
}

TEST_CASE("projections depend only on the seed") {
  const auto a = project_growth(kGrowth, constant_draws(50, 0.002), 0.03, small_config());
  const auto b = project_growth(kGrowth, constant_draws(50, 0.002), 0.03, small_config());
  CHECK(a.trajectories == b.trajectories);
  CHECK(a.delta_draws == b.delta_draws);
  auto other = small_config();
  other.seed = 10;
  CHECK(project_growth(kGrowth, constant_draws(50, 0.002), 0.03, other).trajectories != a.trajectories);
}

TEST_CASE("growth with delta_max 0 equals the decline projection") {
  auto cfg = small_config();
  cfg.delta_max = 0;
  const auto draws = constant_draws(40, 0.003);
  const auto g = project_growth(kGrowth, draws, 0.03, cfg);
  auto as_decline = kGrowth;
  as_decline.status = CrisisStatus::OngoingDecline;
  CHECK(g.trajectories == project_decline(as_decline, draws, 0.03, cfg).trajectories);
}

TEST_CASE("delta weights: equal peaks give odds exp(psi) per year") {
  const Vector peaks = Vector::Constant(16, 0.05);
  const Vector w = delta_weights(peaks, 2020, 2010, 0.3, -3, 1);
  CHECK(w.sum() == doctest::Approx(1.0));
  for (Index d = 0; d + 1 < w.size(); ++d) CHECK(w(d) / w(d + 1) == doctest::Approx(std::exp(0.3)));
}

TEST_CASE("delta weights use the peak density and fall back to uniform") {
  Vector peaks(3);
  peaks << 0.01, 0.05, 0.2;
  const Vector w = delta_weights(peaks, 2020, 2010, 1e-9, std::log(0.05 / 0.95), 0.5);
  CHECK(w(1) > w(0));
  CHECK(w(1) > w(2));
  bool fallback = false;
  const Vector u = delta_weights(Vector::Constant(4, 0.0), 2020, 2010, 0.1, -3, 1, &fallback);
  CHECK(fallback);
  CHECK(u(2) == doctest::Approx(0.25));
}

TEST_CASE("noise-free growth path grows for delta* years then declines") {
  auto cfg = small_config();
  const auto set = project_growth(kGrowth, constant_draws(20, 0.0), 0.03, cfg);
  for (Index k = 0; k < 20; ++k) {
    const int d = set.delta_draws[static_cast<std::size_t>(k)];
    double mu = 0.03;
    for (int h = 0; h < cfg.horizon; ++h) {
      mu += (h + 1 <= d ? 0.4 : -0.2) * mu * (1 - mu / 0.1);
      CHECK(set.trajectories(k, h) == doctest::Approx(mu).epsilon(1e-13));
    }
  }
}

TEST_CASE("dispatch and quantile tables") {
  const auto ended = make_segment(1, "AAA", 2000, 2005, 2010, 2010, CrisisStatus::Ended);
  CHECK_THROWS_AS(project_crisis(ended, constant_draws(3, 0.0), 0.01, small_config()), std::invalid_argument);
  CHECK(project_crisis(kGrowth, constant_draws(3, 0.0), 0.01, small_config()).delta_draws.size() == 3);

  Matrix t(4, 1);
  t << 4, 1, 3, 2;
  const auto q = summarize_quantiles(t);
  CHECK(q.at(0, 0.5) == doctest::Approx(2.5));
  CHECK(q.interval(0, 0.95).first == doctest::Approx(1.075));
  CHECK(q.interval(0, 0.8).second == doctest::Approx(3.7));
  CHECK_THROWS_AS(q.at(0, 0.3), std::invalid_argument);
  CHECK_THROWS_AS(summarize_quantiles(Matrix(0, 3)), std::invalid_argument);
}

TEST_CASE("config validation") {
  ProjectionConfig cfg;
  cfg.delta_max = -1;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = {};
  cfg.floor_value = 0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  CHECK(ProjectionConfig{}.delta_max == 15);
  CHECK(ProjectionConfig{}.floor_value == 0.001);
}
