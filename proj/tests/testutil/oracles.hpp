#pragma once

// Textbook densities used as independent oracles. Deliberately written
// from the distribution formulas, not shared with the library.

#include <cmath>

namespace oracle {

inline double log_normal_pdf(double x, double mu, double sigma) {
  const double d = std::log(x) - mu;
  return std::log(1.0 / (x * sigma * std::sqrt(2.0 * M_PI))) -
         d * d / (2.0 * sigma * sigma);
}

inline double normal_pdf_log(double x, double mu, double sigma) {
  const double d = x - mu;
  return std::log(1.0 / (sigma * std::sqrt(2.0 * M_PI))) -
         d * d / (2.0 * sigma * sigma);
}

inline double poisson_pmf_log(long long k, double lambda) {
  return static_cast<double>(k) * std::log(lambda) - lambda -
         std::lgamma(static_cast<double>(k) + 1.0);
}

inline double beta_pdf_log(double x, double alpha, double beta) {
  const double log_b =
      std::lgamma(alpha) + std::lgamma(beta) - std::lgamma(alpha + beta);
  return (alpha - 1.0) * std::log(x) + (beta - 1.0) * std::log(1.0 - x) - log_b;
}

inline double gamma_pdf_log(double x, double shape, double rate) {
  return shape * std::log(rate) + (shape - 1.0) * std::log(x) - rate * x -
         std::lgamma(shape);
}

inline double exponential_pdf_log(double x, double rate) {
  return std::log(rate * std::exp(-rate * x));
}

inline double std_normal_cdf(double z) {
  return 0.5 * (1.0 + std::erf(z / std::sqrt(2.0)));
}

}  // namespace oracle
