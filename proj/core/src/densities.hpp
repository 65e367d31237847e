#pragma once

// Internal scalar log densities and normal-tail helpers. Everything here
// returns -inf for out-of-support arguments instead of throwing, so the
// posterior can reject bad states.

#include <cmath>
#include <limits>

namespace popindex::detail {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();
inline constexpr double kLogTwoPi = 1.8378770664093454836;  // log(2*pi)

// Thread-safe log gamma. glibc's lgamma writes the global signgam.
inline double lgamma_safe(double x) {
#if defined(__GLIBC__)
  int sign = 0;
  return ::lgamma_r(x, &sign);
#else
  return std::lgamma(x);
#endif
}

inline double normal_lpdf(double x, double mu, double sigma) {
  if (!(sigma > 0.0)) return x == mu ? 0.0 : kNegInf;
  const double z = (x - mu) / sigma;
  return -0.5 * kLogTwoPi - std::log(sigma) - 0.5 * z * z;
}

inline double lognormal_lpdf(double x, double mu, double sigma) {
  if (!(x > 0.0)) return kNegInf;
  const double lx = std::log(x);
  if (!(sigma > 0.0)) return lx == mu ? 0.0 : kNegInf;
  const double z = (lx - mu) / sigma;
  return -lx - std::log(sigma) - 0.5 * kLogTwoPi - 0.5 * z * z;
}

inline double poisson_lpmf(double count, double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    return (lambda == 0.0 && count == 0.0) ? 0.0 : kNegInf;
  return count * std::log(lambda) - lambda - lgamma_safe(count + 1.0);
}

inline double exponential_lpdf(double x, double rate) {
  if (x < 0.0) return kNegInf;
  return std::log(rate) - rate * x;
}

inline double gamma_lpdf(double x, double shape, double rate) {
  if (!(x > 0.0)) return kNegInf;
  return shape * std::log(rate) - lgamma_safe(shape) + (shape - 1.0) * std::log(x) -
         rate * x;
}

// Beta log density; the 0*log(0) boundary cases are taken as 0 so a
// uniform prior contributes exactly nothing at omega in {0, 1}.
inline double beta_lpdf(double x, double alpha, double beta) {
  if (x < 0.0 || x > 1.0) return kNegInf;
  const double log_norm =
      lgamma_safe(alpha + beta) - lgamma_safe(alpha) - lgamma_safe(beta);
  double term = 0.0;
  if (alpha != 1.0) {
    if (x == 0.0) return kNegInf;
    term += (alpha - 1.0) * std::log(x);
  }
  if (beta != 1.0) {
    if (x == 1.0) return kNegInf;
    term += (beta - 1.0) * std::log1p(-x);
  }
  return log_norm + term;
}

inline double std_normal_lpdf(double z) { return -0.5 * kLogTwoPi - 0.5 * z * z; }

// log Phi(z), stable over the whole real line. erfc carries us to about
// z = -37; below that an asymptotic tail expansion takes over.
inline double log_std_normal_cdf(double z) {
  if (z > -35.0) {
    const double phi = 0.5 * std::erfc(-z * M_SQRT1_2);
    if (z >= 0.0) return std::log1p(-0.5 * std::erfc(z * M_SQRT1_2));
    return std::log(phi);
  }
  const double zi = 1.0 / z;
  const double zi2 = zi * zi;
  const double series = 1.0 + zi2 * (-1.0 + zi2 * (3.0 - 15.0 * zi2));
  return -0.5 * z * z - std::log(-z) - 0.5 * kLogTwoPi + std::log(series);
}

inline double std_normal_cdf(double z) { return 0.5 * std::erfc(-z * M_SQRT1_2); }

// phi(z) / Phi(z) (inverse Mills ratio of the lower tail).
inline double mills_ratio(double z) {
  if (z > -35.0) return std::exp(std_normal_lpdf(z) - log_std_normal_cdf(z));
  const double zi = 1.0 / z;
  const double zi2 = zi * zi;
  return -z / (1.0 + zi2 * (-1.0 + zi2 * (3.0 - 15.0 * zi2)));
}

// Numerically safe logistic and its complement.
inline double logistic(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

// log(sigmoid(x)) and log(1 - sigmoid(x)) without cancellation.
inline double log_logistic(double x) {
  return x >= 0.0 ? -std::log1p(std::exp(-x)) : x - std::log1p(std::exp(x));
}

}  // namespace popindex::detail
