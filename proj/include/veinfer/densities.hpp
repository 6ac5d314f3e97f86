#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

#include "veinfer/special_functions.hpp"

namespace veinfer {

// Gamma log-density with shape a and RATE b (mean a/b). Rate
// parameterization is used for every Gamma in this library.
inline double gamma_logpdf(double x, double a, double b) {
  if (!(a > 0.0)) throw std::domain_error("gamma_logpdf: shape a must be positive");
  if (!(b > 0.0)) throw std::domain_error("gamma_logpdf: rate b must be positive");
  if (!(x > 0.0)) throw std::domain_error("gamma_logpdf: x must be positive");
  return a * std::log(b) - log_gamma(a) + (a - 1.0) * std::log(x) - b * x;
}

inline double normal_logpdf(double x, double mean, double variance) {
  if (!(variance > 0.0) || !std::isfinite(variance))
    throw std::domain_error("normal_logpdf: variance must be positive and finite");
  const double r = x - mean;
  // 1.837877... = log(2*pi)
  return -0.5 * (1.8378770664093454836 + std::log(variance)) - 0.5 * r * r / variance;
}

inline double poisson_logpmf(long long k, double mean) {
  if (k < 0) throw std::domain_error("poisson_logpmf: k must be nonnegative");
  if (!(mean > 0.0)) throw std::domain_error("poisson_logpmf: mean must be positive");
  return k * std::log(mean) - mean - log_gamma(static_cast<double>(k) + 1.0);
}

inline double binomial_logpmf(long long k, long long n, double p) {
  if (n < 0 || k < 0 || k > n)
    throw std::domain_error("binomial_logpmf: need 0 <= k <= n");
  if (!(p >= 0.0 && p <= 1.0))
    throw std::domain_error("binomial_logpmf: p must lie in [0,1]");
  // Boundary masses handled explicitly so 0*log(0) never produces NaN.
  if (p == 0.0) return k == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
  if (p == 1.0) return k == n ? 0.0 : -std::numeric_limits<double>::infinity();
  const double nd = static_cast<double>(n), kd = static_cast<double>(k);
  const double log_choose =
      log_gamma(nd + 1.0) - log_gamma(kd + 1.0) - log_gamma(nd - kd + 1.0);
  return log_choose + kd * std::log(p) + (nd - kd) * std::log1p(-p);
}

}  // namespace veinfer
