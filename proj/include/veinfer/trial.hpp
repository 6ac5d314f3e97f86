#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace veinfer {

// Vaccine efficacy as a fraction: VE = 1 - lambda_v/lambda_c. Values below
// zero are legal (a harmful vaccine); only ve > 1 is impossible. Percentages
// appear at presentation boundaries only.
class Efficacy {
 public:
  explicit Efficacy(double ve) : ve_(ve) {
    if (std::isnan(ve) || ve > 1.0)
      throw std::domain_error("Efficacy: ve must satisfy ve <= 1");
  }
  double value() const { return ve_; }
  double percent() const { return 100.0 * ve_; }

 private:
  double ve_;
};

class RatePair {
 public:
  RatePair(double lambda_v, double lambda_c)
      : lambda_v_(lambda_v), lambda_c_(lambda_c) {
    if (!(lambda_v >= 0.0) || !std::isfinite(lambda_v))
      throw std::domain_error("RatePair: lambda_v must be finite and nonnegative");
    if (!(lambda_c > 0.0) || !std::isfinite(lambda_c))
      throw std::domain_error("RatePair: lambda_c must be finite and positive");
  }
  double lambda_v() const { return lambda_v_; }
  double lambda_c() const { return lambda_c_; }

 private:
  double lambda_v_, lambda_c_;
};

// Observed two-arm trial summary: cohort sizes, person-years of surveillance,
// case counts, enrollment duration. Invariants are enforced at construction;
// instances are immutable.
class TrialData {
 public:
  TrialData(long long n_v, long long n_c, double s_v, double s_c, long long x_v,
            long long x_c, double d)
      : n_v_(n_v), n_c_(n_c), s_v_(s_v), s_c_(s_c), x_v_(x_v), x_c_(x_c), d_(d) {
    auto fail = [](const std::string& msg) { throw std::domain_error("TrialData: " + msg); };
    if (n_v < 1) fail("n_v must be at least 1");
    if (n_c < 1) fail("n_c must be at least 1");
    if (!(s_v > 0.0) || !std::isfinite(s_v)) fail("s_v must be finite and positive");
    if (!(s_c > 0.0) || !std::isfinite(s_c)) fail("s_c must be finite and positive");
    if (x_v < 0) fail("x_v must be nonnegative");
    if (x_c < 0) fail("x_c must be nonnegative");
    if (!(d > 0.0) || !std::isfinite(d)) fail("d must be finite and positive");
    if (x_v > n_v) fail("x_v cannot exceed n_v");
    if (x_c > n_c) fail("x_c cannot exceed n_c");
    // no participant can contribute more than d person-years
    if (s_v > static_cast<double>(n_v) * d) fail("s_v cannot exceed n_v*d");
    if (s_c > static_cast<double>(n_c) * d) fail("s_c cannot exceed n_c*d");
  }

  long long n_v() const { return n_v_; }
  long long n_c() const { return n_c_; }
  double s_v() const { return s_v_; }
  double s_c() const { return s_c_; }
  long long x_v() const { return x_v_; }
  long long x_c() const { return x_c_; }
  double d() const { return d_; }

 private:
  long long n_v_, n_c_;
  double s_v_, s_c_;
  long long x_v_, x_c_;
  double d_;
};

inline Efficacy ve_from_rates(const RatePair& rates) {
  return Efficacy(1.0 - rates.lambda_v() / rates.lambda_c());
}

namespace detail {
inline void check_surveillance_pair(double s_v, double s_c, const char* who) {
  if (!(s_v > 0.0) || !(s_c > 0.0))
    throw std::domain_error(std::string(who) + ": s_v and s_c must be positive");
}
}  // namespace detail

// theta = s_v(1-ve) / (s_v(1-ve) + s_c): the probability that a case falls in
// the vaccine arm given the totals. Strictly decreasing in ve.
inline double theta_from_ve(const Efficacy& ve, double s_v, double s_c) {
  detail::check_surveillance_pair(s_v, s_c, "theta_from_ve");
  const double irr = 1.0 - ve.value();
  return s_v * irr / (s_v * irr + s_c);
}

inline Efficacy ve_from_theta(double theta, double s_v, double s_c) {
  detail::check_surveillance_pair(s_v, s_c, "ve_from_theta");
  if (!(theta >= 0.0) || theta > 1.0)
    throw std::domain_error("ve_from_theta: theta must lie in [0,1)");
  if (theta == 1.0)
    throw std::domain_error("ve_from_theta: theta = 1 (VE diverges)");
  return Efficacy(1.0 - (s_c / s_v) * theta / (1.0 - theta));
}

}  // namespace veinfer
