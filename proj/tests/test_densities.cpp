#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "support/lgamma_oracle.hpp"
#include "support/test_util.hpp"
#include "veinfer/densities.hpp"
#include "veinfer/quadrature.hpp"

using test_util::rel_close;
using veinfer::binomial_logpmf;
using veinfer::gamma_logpdf;
using veinfer::normal_logpdf;
using veinfer::poisson_logpmf;

TEST_CASE("gamma density integrates to one") {
  struct Case {
    double a, b;
  };
  for (Case cs : {Case{0.7, 2214.0}, Case{1.0, 0.01917808}, Case{2.428571, 0.01917808},
                  Case{8.7, 163.0}}) {
    INFO("a=" << cs.a << " b=" << cs.b);
    // exp(-b*x) dominates far out, so push the cutoff well past the mean
    const double upper = (cs.a + 14.0 * std::sqrt(cs.a) + 20.0) / cs.b;
    auto pdf = [&](double x) { return x <= 0.0 ? 0.0 : std::exp(gamma_logpdf(x, cs.a, cs.b)); };
    const double mass = veinfer::integrate(pdf, 0.0, upper, 1e-9);
    CHECK(mass > 1.0 - 1e-6);
    CHECK(mass < 1.0 + 1e-8);
  }
}

TEST_CASE("gamma density closed-form points") {
  // Exponential special case: a=1 gives b*exp(-b*x).
  CHECK(rel_close(gamma_logpdf(0.3, 1.0, 2.0), std::log(2.0) - 0.6, 1e-14));
  CHECK_THROWS_AS(gamma_logpdf(0.0, 1.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(gamma_logpdf(-1.0, 1.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(gamma_logpdf(1.0, 0.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(gamma_logpdf(1.0, 1.0, -2.0), std::domain_error);
}

TEST_CASE("normal density integrates to one and peaks correctly") {
  const double mean = 3.2, var = 1.7;
  auto pdf = [&](double x) { return std::exp(normal_logpdf(x, mean, var)); };
  const double sd = std::sqrt(var);
  CHECK(rel_close(veinfer::integrate(pdf, mean - 12.0 * sd, mean + 12.0 * sd, 1e-12),
                  1.0, 1e-9));
  CHECK(rel_close(normal_logpdf(mean, mean, var),
                  -0.5 * std::log(2.0 * 3.14159265358979323846 * var), 1e-14));
  CHECK_THROWS_AS(normal_logpdf(0.0, 0.0, 0.0), std::domain_error);
  CHECK_THROWS_AS(normal_logpdf(0.0, 0.0, -1.0), std::domain_error);
}

TEST_CASE("poisson pmf sums to one and matches reference values") {
  for (double mean : {3.7, 170.0}) {
    double total = 0.0;
    const long long kmax = static_cast<long long>(mean + 25.0 * std::sqrt(mean) + 25.0);
    for (long long k = 0; k <= kmax; ++k) total += std::exp(poisson_logpmf(k, mean));
    CHECK(rel_close(total, 1.0, 1e-8));
  }
  CHECK(poisson_logpmf(0, 4.2) == -4.2);
  CHECK(rel_close(poisson_logpmf(170, 170.0), -3.48732794724284718524, 1e-13));
  CHECK_THROWS_AS(poisson_logpmf(-1, 1.0), std::domain_error);
  CHECK_THROWS_AS(poisson_logpmf(0, 0.0), std::domain_error);
}

TEST_CASE("binomial pmf sums to one and matches a direct factorial oracle") {
  const long long n = 170;
  const double p = 0.047456;
  double total = 0.0;
  for (long long k = 0; k <= n; ++k) total += std::exp(binomial_logpmf(k, n, p));
  CHECK(rel_close(total, 1.0, 1e-12));

  CHECK(rel_close(binomial_logpmf(8, 170, 0.047456), -1.94529114151843942663, 1e-12));

  // Independent recomputation of the same mass from raw log-factorial sums.
  auto log_fact = [](long long m) {
    double s = 0.0;
    for (long long i = 2; i <= m; ++i) s += std::log(static_cast<double>(i));
    return s;
  };
  const double direct = log_fact(n) - log_fact(8) - log_fact(n - 8) +
                        8.0 * std::log(p) + 162.0 * std::log1p(-p);
  CHECK(rel_close(binomial_logpmf(8, n, p), direct, 1e-12));
}

TEST_CASE("binomial pmf boundary probabilities never produce NaN") {
  CHECK(binomial_logpmf(0, 10, 0.0) == 0.0);
  CHECK(std::isinf(binomial_logpmf(1, 10, 0.0)));
  CHECK(binomial_logpmf(10, 10, 1.0) == 0.0);
  CHECK(std::isinf(binomial_logpmf(9, 10, 1.0)));
  CHECK(std::isfinite(binomial_logpmf(0, 0, 0.5)));
  CHECK_THROWS_AS(binomial_logpmf(5, 4, 0.5), std::domain_error);
  CHECK_THROWS_AS(binomial_logpmf(-1, 4, 0.5), std::domain_error);
  CHECK_THROWS_AS(binomial_logpmf(1, 4, 1.5), std::domain_error);
}
