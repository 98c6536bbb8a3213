#pragma once

// Scalar log-densities and link functions shared by the model, sampler and
// projection code. Everything is templated on the scalar type so the same
// expressions can be evaluated in long double by test oracles.

#include <cmath>
#include <limits>
#include <numbers>

namespace crisisflow {

template <typename Scalar>
inline constexpr Scalar kNegInf = -std::numeric_limits<Scalar>::infinity();

template <typename Scalar>
Scalar logit(Scalar x) {
  using std::log;
  return log(x / (Scalar(1) - x));
}

template <typename Scalar>
Scalar inv_logit(Scalar z) {
  using std::exp;
  if (z >= Scalar(0)) return Scalar(1) / (Scalar(1) + exp(-z));
  const Scalar e = exp(z);
  return e / (Scalar(1) + e);
}

// log(1 + exp(-|z|)) stable form used by the logit-transform Jacobian.
template <typename Scalar>
Scalar log1p_exp(Scalar z) {
  using std::exp;
  using std::log1p;
  return z > Scalar(0) ? z + log1p(exp(-z)) : log1p(exp(z));
}

/// Normal log-density, parameterized by standard deviation.
template <typename Scalar>
Scalar normal_logpdf(Scalar x, Scalar mean, Scalar sd) {
  using std::log;
  if (!(sd > Scalar(0))) return kNegInf<Scalar>;
  const Scalar z = (x - mean) / sd;
  return Scalar(-0.5) * z * z - log(sd) - Scalar(0.5) * log(Scalar(2) * std::numbers::pi_v<Scalar>);
}

/// Exponential log-density with rate `rate`, x >= 0.
template <typename Scalar>
Scalar exponential_logpdf(Scalar x, Scalar rate) {
  using std::log;
  if (!(rate > Scalar(0)) || x < Scalar(0)) return kNegInf<Scalar>;
  return log(rate) - rate * x;
}

/// Inverse-gamma log-density with shape a and scale b.
template <typename Scalar>
Scalar inv_gamma_logpdf(Scalar x, Scalar shape, Scalar scale) {
  using std::lgamma;
  using std::log;
  if (!(x > Scalar(0))) return kNegInf<Scalar>;
  return shape * log(scale) - lgamma(shape) - (shape + Scalar(1)) * log(x) - scale / x;
}

/// Student-t log-density with 3 degrees of freedom, location and scale.
template <typename Scalar>
Scalar student_t3_logpdf(Scalar x, Scalar loc, Scalar scale) {
  using std::log;
  using std::sqrt;
  if (!(scale > Scalar(0))) return kNegInf<Scalar>;
  const Scalar z = (x - loc) / scale;
  // Gamma(2) / (Gamma(3/2) sqrt(3 pi)) = 2 / (sqrt(3) pi)
  const Scalar log_norm = log(Scalar(2) / (sqrt(Scalar(3)) * std::numbers::pi_v<Scalar>));
  return log_norm - log(scale) - Scalar(2) * log(Scalar(1) + z * z / Scalar(3));
}

/// Standard Student-t CDF with 3 degrees of freedom (closed form).
template <typename Scalar>
Scalar student_t3_cdf(Scalar t) {
  using std::atan;
  using std::sqrt;
  const Scalar s3 = sqrt(Scalar(3));
  const Scalar u = t / s3;
  return Scalar(0.5) +
         (u / (Scalar(1) + u * u) + atan(u)) / std::numbers::pi_v<Scalar>;
}

}  // namespace crisisflow
