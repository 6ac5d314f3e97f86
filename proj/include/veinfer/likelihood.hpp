#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "veinfer/densities.hpp"
#include "veinfer/errors.hpp"
#include "veinfer/moments.hpp"
#include "veinfer/priors.hpp"
#include "veinfer/trial.hpp"

namespace veinfer {

// AppendixNv reproduces a quirk of the reference analysis this library can
// replicate: the control arm's surveillance variance is scaled by n_v rather
// than its own cohort size. Means always use the owning cohort's n.
enum class VarianceNSource { PerCohort, AppendixNv };

struct LikelihoodConfig {
  MomentMode moment_mode = MomentMode::Corrected;
  VarianceNSource variance_n_source = VarianceNSource::PerCohort;
};

struct LogPosteriorTerms {
  double prior_v;         // Gamma(a_v, b_v) at lambda_v
  double prior_c;         // Gamma(a_c, b_c) at lambda_c
  double surveillance_v;  // Normal at s_v
  double surveillance_c;  // Normal at s_c
  double total_cases;     // Poisson at x_v + x_c
  double case_split;      // Binomial at x_v

  double total() const {
    return prior_v + prior_c + surveillance_v + surveillance_c + total_cases +
           case_split;
  }
};

// Joint log-density (up to the data's normalizing constant) of the full
// model at rates (lambda_v, lambda_c). Throws numerical_error naming the
// offending term if any piece fails to evaluate finitely.
inline LogPosteriorTerms log_posterior_terms(double lambda_v, double lambda_c,
                                             const TrialData& data,
                                             const GammaPriorPair& priors,
                                             const LikelihoodConfig& cfg = {}) {
  if (!(lambda_v > 0.0) || !(lambda_c > 0.0))
    throw std::domain_error("log_posterior: rates must be positive");

  auto finite_or_throw = [](double v, const char* term) {
    if (!std::isfinite(v))
      throw numerical_error(std::string("log_posterior: non-finite ") + term + " term");
    return v;
  };

  LogPosteriorTerms t{};
  t.prior_v = finite_or_throw(gamma_logpdf(lambda_v, priors.a_v(), priors.b_v()),
                              "prior_v");
  t.prior_c = finite_or_throw(gamma_logpdf(lambda_c, priors.a_c(), priors.b_c()),
                              "prior_c");

  const double mean_v = surveillance_mean(lambda_v, data.d());
  const double mean_c = surveillance_mean(lambda_c, data.d());
  const double var_v = surveillance_variance(lambda_v, data.d(), cfg.moment_mode);
  const double var_c = surveillance_variance(lambda_c, data.d(), cfg.moment_mode);
  const double nv = static_cast<double>(data.n_v());
  const double nc = static_cast<double>(data.n_c());
  const double var_n_c =
      cfg.variance_n_source == VarianceNSource::PerCohort ? nc : nv;
  const double total_var_v = nv * var_v;
  const double total_var_c = var_n_c * var_c;
  if (!(total_var_v > 0.0) || !std::isfinite(total_var_v))
    throw numerical_error("log_posterior: surveillance_v variance not positive");
  if (!(total_var_c > 0.0) || !std::isfinite(total_var_c))
    throw numerical_error("log_posterior: surveillance_c variance not positive");
  t.surveillance_v =
      finite_or_throw(normal_logpdf(data.s_v(), nv * mean_v, total_var_v),
                      "surveillance_v");
  t.surveillance_c =
      finite_or_throw(normal_logpdf(data.s_c(), nc * mean_c, total_var_c),
                      "surveillance_c");

  const double mu = data.s_v() * lambda_v + data.s_c() * lambda_c;
  t.total_cases =
      finite_or_throw(poisson_logpmf(data.x_v() + data.x_c(), mu), "total_cases");
  const double theta = data.s_v() * lambda_v / mu;
  t.case_split = finite_or_throw(
      binomial_logpmf(data.x_v(), data.x_v() + data.x_c(), theta), "case_split");
  return t;
}

inline double log_posterior(double lambda_v, double lambda_c, const TrialData& data,
                            const GammaPriorPair& priors,
                            const LikelihoodConfig& cfg = {}) {
  return log_posterior_terms(lambda_v, lambda_c, data, priors, cfg).total();
}

}  // namespace veinfer
