#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "veinfer/priors.hpp"
#include "veinfer/quadrature.hpp"
#include "veinfer/rng.hpp"
#include "veinfer/special_functions.hpp"
#include "veinfer/trial.hpp"

namespace veinfer {

// One simulated participant: recruited at U ~ Uniform(0,d), potentially
// infected at T ~ Exponential(lambda), censored at study end, so the
// censoring time is C = d - U and follow-up is min(T, C).
struct ParticipantOutcome {
  double recruit_time;
  double event_time;  // potential infection time T (+inf when lambda = 0)
  double followup;
  bool infected;
};

inline ParticipantOutcome simulate_participant(double lambda, double d,
                                               RngStream& rng) {
  const double u = d * rng.uniform01();
  const double t = rng.exponential(lambda);
  const double horizon = d - u;
  return {u, t, std::min(t, horizon), t < horizon};
}

// Total follow-up (person-years) and case count for one cohort.
inline std::pair<double, long long> simulate_cohort(long long n, double lambda,
                                                    double d, RngStream& rng) {
  if (n < 1) throw std::domain_error("simulate_cohort: n must be at least 1");
  if (!(lambda >= 0.0))
    throw std::domain_error("simulate_cohort: lambda must be nonnegative");
  if (!(d > 0.0)) throw std::domain_error("simulate_cohort: d must be positive");
  double s = 0.0;
  long long x = 0;
  for (long long i = 0; i < n; ++i) {
    const ParticipantOutcome o = simulate_participant(lambda, d, rng);
    s += o.followup;
    x += o.infected ? 1 : 0;
  }
  return {s, x};
}

inline TrialData simulate_trial(long long n_v, long long n_c, const RatePair& rates,
                                double d, std::uint64_t seed) {
  RngStream rng_v(seed, stream_domain::simulate | 0u);
  RngStream rng_c(seed, stream_domain::simulate | 1u);
  const auto [s_v, x_v] = simulate_cohort(n_v, rates.lambda_v(), d, rng_v);
  const auto [s_c, x_c] = simulate_cohort(n_c, rates.lambda_c(), d, rng_c);
  return TrialData(n_v, n_c, s_v, s_c, x_v, x_c, d);
}

struct MomentEstimate {
  double mean;
  double variance;
  double se_mean;
  double se_var;  // asymptotic, via the empirical fourth central moment
};

// Monte Carlo moments of min(T, C); the oracle used to validate the
// closed-form surveillance moments.
inline MomentEstimate mc_moments(long long replicates, double lambda, double d,
                                 std::uint64_t seed) {
  if (replicates < 10000)
    throw std::domain_error("mc_moments: replicates must be at least 10000");
  RngStream rng(seed, stream_domain::moments);
  std::vector<double> y;
  y.reserve(static_cast<std::size_t>(replicates));
  for (long long i = 0; i < replicates; ++i)
    y.push_back(simulate_participant(lambda, d, rng).followup);
  const double n = static_cast<double>(replicates);
  double mean = 0.0;
  for (double v : y) mean += v;
  mean /= n;
  double m2 = 0.0, m4 = 0.0;
  for (double v : y) {
    const double c = v - mean;
    const double c2 = c * c;
    m2 += c2;
    m4 += c2 * c2;
  }
  m2 /= n;
  m4 /= n;
  const double var = m2 * n / (n - 1.0);
  return {mean, var, std::sqrt(var / n), std::sqrt(std::max(0.0, m4 - m2 * m2) / n)};
}

// Independent adaptive-quadrature evaluation of E[min(T,C)^k]:
// integral over (0,d) of k x^(k-1) e^(-lambda x) (d-x)/d dx.
inline double quadrature_moment_oracle(double lambda, double d, int k) {
  if (!(lambda > 0.0))
    throw std::domain_error("quadrature_moment_oracle: lambda must be positive");
  if (!(d > 0.0)) throw std::domain_error("quadrature_moment_oracle: d must be positive");
  if (k != 1 && k != 2)
    throw std::domain_error("quadrature_moment_oracle: k must be 1 or 2");
  auto f = [&](double x) {
    const double base = std::exp(-lambda * x) * (d - x) / d;
    return k == 1 ? base : 2.0 * x * base;
  };
  return integrate(f, 0.0, d, 1e-10);
}

// Distributional check of the ratio representation: with independent
// lambda_v ~ Gamma(a_v, b_v) and lambda_c ~ Gamma(a_c, b_c), the weighted
// ratio b_v*lambda_v / (b_v*lambda_v + b_c*lambda_c) is Beta(a_v, a_c).
// Returns the Kolmogorov-Smirnov distance between the sampled ratios and
// that Beta CDF.
inline double beta_representation_check(const GammaPriorPair& priors,
                                        long long n_samples, std::uint64_t seed) {
  if (n_samples < 10000)
    throw std::domain_error("beta_representation_check: need at least 10000 samples");
  RngStream rng(seed, stream_domain::beta_check);
  std::vector<double> r;
  r.reserve(static_cast<std::size_t>(n_samples));
  for (long long i = 0; i < n_samples; ++i) {
    const double gv = priors.b_v() * rng.gamma(priors.a_v(), priors.b_v());
    const double gc = priors.b_c() * rng.gamma(priors.a_c(), priors.b_c());
    r.push_back(gv / (gv + gc));
  }
  std::sort(r.begin(), r.end());
  const double n = static_cast<double>(n_samples);
  double ks = 0.0;
  for (long long i = 0; i < n_samples; ++i) {
    const double cdf = reg_inc_beta(r[static_cast<std::size_t>(i)], priors.a_v(),
                                    priors.a_c());
    ks = std::max(ks, std::fabs(cdf - static_cast<double>(i) / n));
    ks = std::max(ks, std::fabs(static_cast<double>(i + 1) / n - cdf));
  }
  return ks;
}

}  // namespace veinfer
