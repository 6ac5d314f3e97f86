#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>

#include "veinfer/special_functions.hpp"
#include "veinfer/trial.hpp"

namespace veinfer {

class BetaDistributionParams {
 public:
  BetaDistributionParams(double a, double b) : a_(a), b_(b) {
    if (!(a > 0.0) || !std::isfinite(a))
      throw std::domain_error("BetaDistributionParams: a must be finite and positive");
    if (!(b > 0.0) || !std::isfinite(b))
      throw std::domain_error("BetaDistributionParams: b must be finite and positive");
  }
  double a() const { return a_; }
  double b() const { return b_; }

 private:
  double a_, b_;
};

// Prior used when a request does not supply one: the protocol prior of the
// built-in trial dataset (see analysis.hpp).
inline BetaDistributionParams default_conditional_prior() {
  return BetaDistributionParams(0.700102, 1.0);
}

// Conditional on the case total, x_v ~ Binomial(x_v+x_c, theta), so a
// Beta(a,b) prior on theta is conjugate.
inline BetaDistributionParams posterior_theta(const BetaDistributionParams& prior,
                                              long long x_v, long long x_c) {
  if (x_v < 0 || x_c < 0)
    throw std::domain_error("posterior_theta: case counts must be nonnegative");
  return BetaDistributionParams(prior.a() + static_cast<double>(x_v),
                                prior.b() + static_cast<double>(x_c));
}

// Equal-tail interval on the VE scale. ve_from_theta is decreasing, so the
// upper theta quantile becomes the lower VE bound.
inline std::pair<Efficacy, Efficacy> ve_credible_interval(
    const BetaDistributionParams& posterior, double s_v, double s_c, double level,
    QuantileSolverConfig cfg = {}) {
  if (!(level > 0.0 && level < 1.0))
    throw std::domain_error("ve_credible_interval: level must lie in (0,1)");
  const double tail = 0.5 * (1.0 - level);
  const double theta_lo = inv_reg_inc_beta(tail, posterior.a(), posterior.b(), cfg);
  const double theta_hi = inv_reg_inc_beta(1.0 - tail, posterior.a(), posterior.b(), cfg);
  return {ve_from_theta(theta_hi, s_v, s_c), ve_from_theta(theta_lo, s_v, s_c)};
}

inline Efficacy posterior_median_ve(const BetaDistributionParams& posterior,
                                    double s_v, double s_c,
                                    QuantileSolverConfig cfg = {}) {
  return ve_from_theta(inv_reg_inc_beta(0.5, posterior.a(), posterior.b(), cfg),
                       s_v, s_c);
}

// E[VE] in closed form: E[theta/(1-theta)] = a/(b-1) under Beta(a,b).
inline Efficacy posterior_mean_ve(const BetaDistributionParams& posterior,
                                  double s_v, double s_c) {
  detail::check_surveillance_pair(s_v, s_c, "posterior_mean_ve");
  if (!(posterior.b() > 1.0))
    throw std::domain_error("posterior_mean_ve: posterior mean of VE undefined (b <= 1)");
  return Efficacy(1.0 - (s_c / s_v) * posterior.a() / (posterior.b() - 1.0));
}

// P(VE > threshold) = P(theta < theta(threshold)) = I_x(a,b).
inline double posterior_prob_ve_above(const Efficacy& threshold,
                                      const BetaDistributionParams& posterior,
                                      double s_v, double s_c) {
  if (!(threshold.value() < 1.0))
    throw std::domain_error("posterior_prob_ve_above: threshold must be below 1");
  const double x = theta_from_ve(threshold, s_v, s_c);
  return reg_inc_beta(x, posterior.a(), posterior.b());
}

// Plug-in point estimate 1 - (x_v/s_v)/(x_c/s_c).
inline Efficacy irr_point_estimate(const TrialData& data) {
  if (data.x_c() == 0)
    throw std::domain_error("irr_point_estimate: undefined when x_c = 0");
  const double rate_v = static_cast<double>(data.x_v()) / data.s_v();
  const double rate_c = static_cast<double>(data.x_c()) / data.s_c();
  return Efficacy(1.0 - rate_v / rate_c);
}

}  // namespace veinfer
