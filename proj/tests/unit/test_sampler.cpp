#include <doctest.h>

#include "crisisflow/diagnostics.hpp"
#include "crisisflow/math.hpp"
#include "crisisflow/sampler.hpp"

using namespace crisisflow;

namespace {

SamplerConfig small_config(std::uint64_t seed) {
  SamplerConfig cfg;
  cfg.chains = 1;
  cfg.warmup_iters = 1000;
  cfg.keep_iters = 4000;
  cfg.thin = 2;
  cfg.seed = seed;
  return cfg;
}

double std_normal(const Vector& z) { return normal_logpdf(z(0), 0.0, 1.0); }

}  // namespace

TEST_CASE("chains are reproducible per (seed, chain id)") {
  const auto cfg = small_config(1);
  const auto a = run_chain(cfg, 0, Vector::Zero(1), std_normal);
  const auto b = run_chain(cfg, 0, Vector::Zero(1), std_normal);
  const auto c = run_chain(cfg, 1, Vector::Zero(1), std_normal);
  CHECK(a.samples == b.samples);
  CHECK(a.samples != c.samples);
}

TEST_CASE("thinning keeps keep_iters / thin rows at the right iterations") {
  const auto r = run_chain(small_config(2), 0, Vector::Zero(1), std_normal);
  CHECK(r.samples.rows() == 2000);
  CHECK(r.iters.front() == 2);
  CHECK(r.iters.back() == 4000);
}

TEST_CASE("step size adapts toward the target acceptance") {
  auto cfg = small_config(3);
  cfg.warmup_iters = 4000;
  for (double scale : {1e-4, 1.0, 50.0}) {
    const auto r = run_chain(cfg, 0, Vector::Zero(1), [&](const Vector& z) { return normal_logpdf(z(0), 0.0, scale); });
    CAPTURE(scale);
    CHECK(r.accept_rate(0) == doctest::Approx(cfg.target_accept).epsilon(0.3));
  }
}

TEST_CASE("proposals outside the support are rejected") {
  const auto r = run_chain(small_config(4), 0, Vector::Constant(1, 1.0), [](const Vector& z) {
    return z(0) > 0 ? -z(0) : kNegInf<double>;
  });
  CHECK(r.samples.minCoeff() > 0);
  CHECK(r.samples.mean() == doctest::Approx(1.0).epsilon(0.15));
}

TEST_CASE("an infeasible start is an error") {
  CHECK_THROWS_AS(run_chain(small_config(5), 0, Vector::Constant(1, -1.0),
                            [](const Vector& z) { return z(0) > 0 ? 0.0 : kNegInf<double>; }),
                  std::runtime_error);
}

TEST_CASE("blocked updates sample independent blocks") {
  // Two independent coordinates in separate blocks with very different scales.
  struct Target {
    double block_log_density(const Vector& z, std::size_t b) const {
      return b == 0 ? normal_logpdf(z(0), 1.0, 0.01) : normal_logpdf(z(1), -3.0, 10.0);
    }
  };
  auto cfg = small_config(6);
  cfg.keep_iters = 20000;
  cfg.thin = 1;
  const auto r = run_chain(cfg, 0, Vector::Zero(2), Target{}, {Block{0, 1}, Block{1, 1}});
  Matrix x0(r.samples.rows(), 1), x1(r.samples.rows(), 1);
  x0.col(0) = r.samples.col(0);
  x1.col(0) = r.samples.col(1);
  CHECK(x0.mean() == doctest::Approx(1.0).epsilon(3 * 0.01 / std::sqrt(effective_sample_size(x0))));
  CHECK(std::abs(x1.mean() + 3.0) < 3 * 10.0 / std::sqrt(effective_sample_size(x1)));
}

TEST_CASE("config validation") {
  SamplerConfig cfg;
  cfg.thin = 0;
  CHECK_THROWS(cfg.validate());
  cfg = {};
  cfg.chains = 0;
  CHECK_THROWS(cfg.validate());
  CHECK_NOTHROW(SamplerConfig{}.validate());
}
