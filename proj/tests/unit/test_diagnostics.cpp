#include <doctest.h>

#include "crisisflow/diagnostics.hpp"
#include "crisisflow/rng.hpp"

using namespace crisisflow;

namespace {

Matrix ar1(Index n, Index chains, double phi, std::uint64_t seed, double shift = 0) {
  Matrix x(n, chains);
  for (Index c = 0; c < chains; ++c) {
    Rng rng = make_stream(seed, {static_cast<std::uint64_t>(c)});
    std::normal_distribution<double> e(0, std::sqrt(1 - phi * phi));
    double v = 0;
    for (Index i = 0; i < n; ++i) {
      v = phi * v + e(rng);
      x(i, c) = v + shift * static_cast<double>(c);
    }
  }
  return x;
}

}  // namespace

TEST_CASE("quantiles interpolate between order statistics") {
  const std::vector<double> v = {1, 2, 3, 4};
  CHECK(quantile_sorted(v, 0.0) == 1.0);
  CHECK(quantile_sorted(v, 1.0) == 4.0);
  CHECK(quantile_sorted(v, 0.5) == doctest::Approx(2.5));
  CHECK(quantile_sorted(v, 0.25) == doctest::Approx(1.75));
  CHECK(quantile_sorted(v, 0.025) == doctest::Approx(1.075));
  CHECK(quantile_sorted({7.0}, 0.3) == 7.0);
}

TEST_CASE("R-hat is near one for well-mixed chains and large for separated ones") {
  CHECK(split_rhat(ar1(2000, 4, 0.0, 1)) == doctest::Approx(1.0).epsilon(0.01));
  CHECK(split_rhat(ar1(2000, 4, 0.0, 2, 3.0)) > 1.5);
  // A drifting chain is caught by the split.
  Matrix drift(1000, 2);
  for (Index i = 0; i < 1000; ++i) drift(i, 0) = drift(i, 1) = static_cast<double>(i) / 100.0;
  CHECK(split_rhat(drift) > 1.5);
}

TEST_CASE("ESS matches theory for independent and AR(1) draws") {
  const Index n = 20000, chains = 4;
  CHECK(effective_sample_size(ar1(n, chains, 0.0, 3)) == doctest::Approx(n * chains).epsilon(0.1));
  const double phi = 0.8;
  const double expected = n * chains * (1 - phi) / (1 + phi);
  CHECK(effective_sample_size(ar1(n, chains, phi, 4)) == doctest::Approx(expected).epsilon(0.15));
}
