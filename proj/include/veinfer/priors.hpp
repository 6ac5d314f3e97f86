#pragma once

#include <cmath>
#include <stdexcept>

#include "veinfer/trial.hpp"

namespace veinfer {

// Independent Gamma(a_v, b_v) and Gamma(a_c, b_c) priors on the two
// infection rates; shape/RATE parameterization.
class GammaPriorPair {
 public:
  GammaPriorPair(double a_v, double b_v, double a_c, double b_c)
      : a_v_(a_v), b_v_(b_v), a_c_(a_c), b_c_(b_c) {
    auto check = [](double v, const char* name) {
      if (!(v > 0.0) || !std::isfinite(v))
        throw std::domain_error(std::string("GammaPriorPair: ") + name +
                                " must be finite and positive");
    };
    check(a_v, "a_v");
    check(b_v, "b_v");
    check(a_c, "a_c");
    check(b_c, "b_c");
  }
  double a_v() const { return a_v_; }
  double b_v() const { return b_v_; }
  double a_c() const { return a_c_; }
  double b_c() const { return b_c_; }

 private:
  double a_v_, b_v_, a_c_, b_c_;
};

// Hyperparameters from an anticipated efficacy and control-arm rate:
// a_v = 1, a_c = (2 - ve)/(1 - ve), b_v = b_c = 1/lambda_c_hat.
// By construction prior_mean_ve(elicit_priors(ve, r)) == ve.
inline GammaPriorPair elicit_priors(const Efficacy& ve_hat, double lambda_c_hat) {
  const double ve = ve_hat.value();
  if (!(ve >= 0.0 && ve < 1.0))
    throw std::domain_error("elicit_priors: ve_hat must lie in [0,1)");
  if (!(lambda_c_hat > 0.0) || !std::isfinite(lambda_c_hat))
    throw std::domain_error("elicit_priors: lambda_c_hat must be finite and positive");
  const double b = 1.0 / lambda_c_hat;
  return GammaPriorPair(1.0, b, (2.0 - ve) / (1.0 - ve), b);
}

// E[VE] = 1 - E[lambda_v] E[1/lambda_c] = 1 - (a_v/b_v) * b_c/(a_c - 1);
// requires a_c > 1 for E[1/lambda_c] to exist.
inline Efficacy prior_mean_ve(const GammaPriorPair& priors) {
  if (!(priors.a_c() > 1.0))
    throw std::domain_error("prior_mean_ve: prior mean of VE does not exist (a_c <= 1)");
  return Efficacy(1.0 -
                  (priors.a_v() / priors.b_v()) * priors.b_c() / (priors.a_c() - 1.0));
}

}  // namespace veinfer
