#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "veinfer/errors.hpp"

namespace veinfer {

// Lanczos approximation, g=7, 9 coefficients (Godfrey's set). Relative error
// is a few ulps for x >= 0.5; smaller arguments go through the recurrence
// log Gamma(x) = log Gamma(x+1) - log x.
inline double log_gamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x))
    throw std::domain_error("log_gamma: requires finite x > 0");
  static constexpr double c[9] = {
      0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
      771.32342877765313,      -176.61502916214059,   12.507343278686905,
      -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};
  double shift = 0.0;
  while (x < 0.5) {
    shift -= std::log(x);
    x += 1.0;
  }
  const double z = x - 1.0;
  double sum = c[0];
  for (int i = 1; i < 9; ++i) sum += c[i] / (z + i);
  const double t = z + 7.5;
  // 0.918938... = log(2*pi)/2
  return shift + 0.91893853320467274178 + (z + 0.5) * std::log(t) - t + std::log(sum);
}

inline double log_beta(double a, double b) {
  return log_gamma(a) + log_gamma(b) - log_gamma(a + b);
}

namespace detail {

// Continued fraction for the incomplete beta, evaluated with the modified
// Lentz algorithm. Converges quickly for x < (a+1)/(a+b+2).
inline double inc_beta_cf(double x, double a, double b) {
  constexpr double tiny = 1e-300;
  constexpr double eps = 3e-16;
  const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= 500; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < eps) return h;
  }
  throw numerical_error("reg_inc_beta: continued fraction did not converge");
}

}  // namespace detail

// Regularized incomplete beta function I_x(a,b).
inline double reg_inc_beta(double x, double a, double b) {
  if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b))
    throw std::domain_error("reg_inc_beta: shapes must be finite and positive");
  if (!(x >= 0.0 && x <= 1.0))
    throw std::domain_error("reg_inc_beta: x must lie in [0,1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const bool flip = x > (a + 1.0) / (a + b + 2.0);
  const double xx = flip ? 1.0 - x : x;
  const double aa = flip ? b : a;
  const double bb = flip ? a : b;
  const double front =
      std::exp(aa * std::log(xx) + bb * std::log1p(-xx) - log_beta(aa, bb)) / aa;
  const double v = front * detail::inc_beta_cf(xx, aa, bb);
  return flip ? 1.0 - v : v;
}

struct QuantileSolverConfig {
  int max_iterations = 200;
  double tolerance = 1e-12;  // relative to the target probability
};

// Beta quantile: bracketed Newton with bisection fallback; the bracket is
// tightened every iteration so the solve cannot escape (0,1).
inline double inv_reg_inc_beta(double p, double a, double b,
                               QuantileSolverConfig cfg = {}) {
  if (!(p > 0.0 && p < 1.0))
    throw std::domain_error("inv_reg_inc_beta: p must lie in (0,1)");
  if (!(a > 0.0) || !(b > 0.0))
    throw std::domain_error("inv_reg_inc_beta: shapes must be positive");
  if (!(cfg.tolerance >= 1e-14))
    throw std::domain_error("inv_reg_inc_beta: tolerance must be at least 1e-14");
  if (cfg.max_iterations < 1)
    throw std::domain_error("inv_reg_inc_beta: max_iterations must be positive");
  const double log_b = log_beta(a, b);
  double lo = 0.0, hi = 1.0;
  double x = a / (a + b);
  for (int it = 0; it < cfg.max_iterations; ++it) {
    const double f = reg_inc_beta(x, a, b) - p;
    if (std::fabs(f) <= cfg.tolerance * p) return x;
    if (f > 0.0)
      hi = x;
    else
      lo = x;
    const double log_pdf =
        (a - 1.0) * std::log(x) + (b - 1.0) * std::log1p(-x) - log_b;
    double nx = x - f * std::exp(-log_pdf);
    if (!std::isfinite(nx) || nx <= lo || nx >= hi) nx = 0.5 * (lo + hi);
    x = nx;
  }
  throw numerical_error(
      "inv_reg_inc_beta: iteration cap reached before tolerance (p=" +
      std::to_string(p) + ", a=" + std::to_string(a) + ", b=" + std::to_string(b) + ")");
}

}  // namespace veinfer
