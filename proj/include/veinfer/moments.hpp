#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>

#include "veinfer/errors.hpp"

namespace veinfer {

// Follow-up time per participant is min(T, C): T ~ Exponential(lambda)
// infection time, C = d - U administrative censoring with U ~ Uniform(0,d).
//
// Corrected mode evaluates the true moments of min(T, C). PaperCompat mode
// reproduces a published second-moment formula that disagrees with the
// integral it claims to evaluate (its variance even turns negative once
// lambda*d exceeds about 2.307); it exists so results computed with that
// formula can be replicated exactly, and it is never the default.
enum class MomentMode { PaperCompat, Corrected };

namespace detail {

// E[min(T,C)] = d * sum_{j>=0} (-x)^j / (j+2)!  with x = lambda*d.
// Used below the cutoff where the closed form's cancellation costs digits.
inline double surveillance_mean_series(double x, double d) {
  double term = 0.5;  // j = 0: 1/2!
  double sum = term;
  for (int j = 1; j < 60; ++j) {
    term *= -x / (j + 2);
    sum += term;
    if (std::fabs(term) <= 1e-17 * std::fabs(sum)) break;
  }
  return d * sum;
}

// E[min(T,C)^2] = d^2 * sum_{j>=0} (-1)^j 2(j+1)/(j+3)! x^j.
inline double surveillance_m2_series(double x, double d) {
  double term = 1.0 / 3.0;  // j = 0: 2*1/3!
  double sum = term;
  for (int j = 1; j < 80; ++j) {
    term *= -x * (j + 1) / (static_cast<double>(j) * (j + 3));
    sum += term;
    if (std::fabs(term) <= 1e-17 * std::fabs(sum)) break;
  }
  return d * d * sum;
}

// Cutoffs chosen so both branches carry ~1e-13 relative error at the switch;
// below them the closed forms lose digits to cancellation.
inline constexpr double mean_series_cutoff = 1e-3;
inline constexpr double m2_series_cutoff = 0.5;

}  // namespace detail

// Mean follow-up time. Closed form (1/lambda)(1 + (exp(-x)-1)/x), x=lambda*d;
// series below the cutoff. lambda = 0 is the censoring-only limit d/2.
inline double surveillance_mean(double lambda, double d) {
  if (!(d > 0.0)) throw std::domain_error("surveillance_mean: d must be positive");
  if (!(lambda >= 0.0))
    throw std::domain_error("surveillance_mean: lambda must be nonnegative");
  const double x = lambda * d;
  if (x < detail::mean_series_cutoff) return detail::surveillance_mean_series(x, d);
  // (x + expm1(-x)) is exact by Sterbenz once expm1 is rounded
  return d * (x + std::expm1(-x)) / (x * x);
}

inline double surveillance_second_moment(double lambda, double d, MomentMode mode) {
  if (!(lambda > 0.0))
    throw std::domain_error("surveillance_second_moment: lambda must be positive");
  if (!(d > 0.0))
    throw std::domain_error("surveillance_second_moment: d must be positive");
  const double x = lambda * d;
  if (mode == MomentMode::PaperCompat)
    return std::exp(-x) * (2.0 + 4.0 / x) / (lambda * lambda);
  if (x < detail::m2_series_cutoff) return detail::surveillance_m2_series(x, d);
  const double em = std::expm1(-x);
  const double g = (x + em) / x;  // = 1 - (1 - exp(-x))/x
  return d * d * (4.0 * g + 2.0 * em) / (x * x);
}

inline double surveillance_variance(double lambda, double d, MomentMode mode) {
  const double m = surveillance_mean(lambda, d);
  const double m2 = surveillance_second_moment(lambda, d, mode);
  const double v = m2 - m * m;
  // Cauchy-Schwarz makes this strict for the true moments; PaperCompat may
  // legitimately return a nonpositive value (that is the defect it preserves).
  if (mode == MomentMode::Corrected && !(v > 0.0))
    throw std::logic_error("surveillance_variance: corrected variance must be positive");
  return v;
}

struct SurveillanceMoments {
  double mean;      // years per participant
  double variance;  // years^2 per participant
  MomentMode mode;
};

inline SurveillanceMoments surveillance_moments(double lambda, double d, MomentMode mode) {
  const SurveillanceMoments m{surveillance_mean(lambda, d),
                              surveillance_variance(lambda, d, mode), mode};
  if (!(m.variance > 0.0))
    throw numerical_error(
        "surveillance_moments: nonpositive variance (PaperCompat outside its valid range)");
  return m;
}

// Moments of the cohort total S = sum of n i.i.d. follow-up times.
inline std::pair<double, double> cohort_normal_params(long long n, double lambda,
                                                      double d, MomentMode mode) {
  if (n < 1) throw std::domain_error("cohort_normal_params: n must be at least 1");
  const double nd = static_cast<double>(n);
  return {nd * surveillance_mean(lambda, d),
          nd * surveillance_variance(lambda, d, mode)};
}

}  // namespace veinfer
