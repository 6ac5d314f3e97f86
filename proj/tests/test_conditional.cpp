#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "support/test_util.hpp"
#include "veinfer/conditional.hpp"
#include "veinfer/quadrature.hpp"
#include "veinfer/rng.hpp"
#include "veinfer/special_functions.hpp"

using test_util::rel_close;
using veinfer::BetaDistributionParams;
using veinfer::Efficacy;
using veinfer::posterior_mean_ve;
using veinfer::posterior_median_ve;
using veinfer::posterior_prob_ve_above;
using veinfer::posterior_theta;
using veinfer::ve_credible_interval;

namespace {
const double S_V = 2214.0;
const double S_C = 2222.0;

BetaDistributionParams builtin_posterior() {
  return posterior_theta(veinfer::default_conditional_prior(), 8, 162);
}
}  // namespace

TEST_CASE("conjugate update adds the case counts") {
  auto post = builtin_posterior();
  CHECK(post.a() == 0.700102 + 8.0);
  CHECK(post.b() == 1.0 + 162.0);
  CHECK_THROWS_AS(posterior_theta(veinfer::default_conditional_prior(), -1, 0),
                  std::domain_error);
}

TEST_CASE("credible interval at the reference posterior") {
  auto [lo, hi] = ve_credible_interval(builtin_posterior(), S_V, S_C, 0.95);
  CHECK(std::fabs(lo.value() - 0.903171289900310234) < 1e-9);
  CHECK(std::fabs(hi.value() - 0.976169441698477347) < 1e-9);
  CHECK(lo.value() < hi.value());
  CHECK_THROWS_AS(ve_credible_interval(builtin_posterior(), S_V, S_C, 0.0),
                  std::domain_error);
  CHECK_THROWS_AS(ve_credible_interval(builtin_posterior(), S_V, S_C, 1.0),
                  std::domain_error);
}

TEST_CASE("posterior mean, median, and tail probability at the reference posterior") {
  CHECK(rel_close(posterior_mean_ve(builtin_posterior(), S_V, S_C).value(),
                  1.0 - (S_C / S_V) * 8.700102 / 162.0, 1e-15));
  CHECK(std::fabs(posterior_mean_ve(builtin_posterior(), S_V, S_C).value() -
                  0.94610161) < 1e-8);
  CHECK(std::fabs(posterior_median_ve(builtin_posterior(), S_V, S_C).value() -
                  0.94836419) < 1e-7);
  CHECK(posterior_prob_ve_above(Efficacy(0.3), builtin_posterior(), S_V, S_C) > 0.9999);
  CHECK(rel_close(posterior_prob_ve_above(Efficacy(0.95), builtin_posterior(), S_V, S_C),
                  0.463867871641641852, 1e-12));
}

TEST_CASE("closed-form posterior mean matches brute-force sampling") {
  veinfer::RngStream rng(71, veinfer::stream_domain::beta_check | 3);
  auto post = builtin_posterior();
  const int n = 1000000;
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    double g1 = rng.gamma(post.a(), 1.0);
    double g2 = rng.gamma(post.b(), 1.0);
    double theta = g1 / (g1 + g2);
    double ve = 1.0 - (S_C / S_V) * theta / (1.0 - theta);
    sum += ve;
    sum_sq += ve * ve;
  }
  double mc_mean = sum / n;
  double mc_sd = std::sqrt(sum_sq / n - mc_mean * mc_mean);
  double closed = posterior_mean_ve(post, S_V, S_C).value();
  CHECK(std::fabs(mc_mean - closed) < 3.0 * mc_sd / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("uniform prior with equal surveillance gives analytic bounds") {
  // Beta(1,1) posterior on theta: quantiles are the probabilities themselves,
  // so with s_v = s_c the 95% interval is (1 - 0.975/0.025, 1 - 0.025/0.975).
  BetaDistributionParams uniform(1.0, 1.0);
  auto [lo, hi] = ve_credible_interval(uniform, 10.0, 10.0, 0.95);
  CHECK(std::fabs(lo.value() - (-38.0)) < 1e-8);
  CHECK(std::fabs(hi.value() - 0.9743589743589744) < 1e-10);
}

TEST_CASE("interval endpoints and tail probabilities are consistent") {
  auto post = builtin_posterior();
  for (double level : {0.5, 0.8, 0.95, 0.99}) {
    auto [lo, hi] = ve_credible_interval(post, S_V, S_C, level);
    double p_lo = posterior_prob_ve_above(lo, post, S_V, S_C);
    double p_hi = posterior_prob_ve_above(hi, post, S_V, S_C);
    INFO("level = " << level);
    CHECK(std::fabs(p_lo - p_hi - level) < 1e-8);
    CHECK(std::fabs(p_lo - (0.5 + level / 2.0)) < 1e-8);
  }
}

TEST_CASE("tail probability is decreasing in the threshold") {
  auto post = builtin_posterior();
  double prev = 1.1;
  for (double t = -1.0; t < 1.0; t += 0.1) {
    double p = posterior_prob_ve_above(Efficacy(t), post, S_V, S_C);
    CHECK(p <= prev);
    prev = p;
  }
  CHECK_THROWS_AS(posterior_prob_ve_above(Efficacy(1.0), post, S_V, S_C),
                  std::domain_error);
}

TEST_CASE("interval is invariant to rescaling both surveillance times") {
  auto post = builtin_posterior();
  auto [lo1, hi1] = ve_credible_interval(post, S_V, S_C, 0.95);
  auto [lo2, hi2] = ve_credible_interval(post, S_V * 3.7, S_C * 3.7, 0.95);
  CHECK(rel_close(lo1.value(), lo2.value(), 1e-12));
  CHECK(rel_close(hi1.value(), hi2.value(), 1e-12));
}

TEST_CASE("posterior density matches the normalized prior-times-likelihood") {
  // Conjugacy done the hard way: for several priors and case splits, compare
  // the Beta(a+x_v, b+x_c) density against prior * theta^x_v (1-theta)^x_c
  // normalized by quadrature.
  struct PriorCase {
    double a, b;
  };
  for (PriorCase pc : {PriorCase{1.0, 1.0}, PriorCase{2.0, 3.0}, PriorCase{1.5, 2.5}}) {
    for (long long xv : {0ll, 2ll, 5ll}) {
      for (long long xc : {0ll, 3ll}) {
        auto post = posterior_theta(BetaDistributionParams(pc.a, pc.b), xv, xc);
        auto unnormalized = [&](double t) {
          if (t <= 0.0 || t >= 1.0) return 0.0;
          return std::pow(t, pc.a - 1.0 + xv) * std::pow(1.0 - t, pc.b - 1.0 + xc);
        };
        const double z = veinfer::integrate(unnormalized, 0.0, 1.0, 1e-12);
        for (int i = 1; i < 50; ++i) {
          const double t = i / 50.0;
          const double direct = unnormalized(t) / z;
          const double conjugate =
              std::exp((post.a() - 1.0) * std::log(t) +
                       (post.b() - 1.0) * std::log1p(-t) -
                       veinfer::log_beta(post.a(), post.b()));
          INFO("a=" << pc.a << " b=" << pc.b << " xv=" << xv << " xc=" << xc
                    << " t=" << t);
          CHECK(rel_close(conjugate, direct, 1e-9));
        }
      }
    }
  }
}

TEST_CASE("posterior mean requires b above one") {
  CHECK_THROWS_WITH(
      posterior_mean_ve(BetaDistributionParams(2.0, 1.0), S_V, S_C),
      Catch::Matchers::ContainsSubstring("posterior mean of VE undefined"));
  CHECK_THROWS_AS(posterior_mean_ve(BetaDistributionParams(2.0, 0.5), S_V, S_C),
                  std::domain_error);
}

TEST_CASE("irr point estimate") {
  veinfer::TrialData data(17411, 17511, S_V, S_C, 8, 162, 0.29);
  CHECK(std::fabs(veinfer::irr_point_estimate(data).value() - 0.9504388460) < 1e-9);
  CHECK(std::fabs(veinfer::irr_point_estimate(data).percent() - 95.0) < 0.1);
  veinfer::TrialData no_cases(10, 10, 1.0, 1.0, 0, 0, 1.0);
  CHECK_THROWS_AS(veinfer::irr_point_estimate(no_cases), std::domain_error);
}
