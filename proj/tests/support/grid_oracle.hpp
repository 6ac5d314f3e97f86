#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "veinfer/errors.hpp"
#include "veinfer/likelihood.hpp"
#include "veinfer/priors.hpp"
#include "veinfer/trial.hpp"

// Deterministic posterior summaries from dense 2-D quadrature over
// (log lambda_v, log lambda_c). Shares no code with the sampler: the grid
// is recentred twice on the weighted mean +/- 10 weighted standard
// deviations before the final fine pass, so it stays accurate even when
// the posterior sits far from the crude starting window.
namespace test_oracle {

struct GridSummary {
  double mean_ve = 0.0;
  double median_ve = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
};

namespace detail {

struct Axis {
  double center;
  double half_width;
};

inline std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (n - 1);
  }
  return out;
}

inline double weighted_quantile(std::vector<std::pair<double, double>>& value_weight,
                                double total, double q) {
  double target = q * total;
  double cum = 0.0;
  for (std::size_t i = 0; i < value_weight.size(); ++i) {
    double next = cum + value_weight[i].second;
    if (next >= target) {
      if (i == 0 || value_weight[i].second <= 0.0) return value_weight[i].first;
      double frac = (target - cum) / value_weight[i].second;
      double prev = value_weight[i - 1].first;
      return prev + frac * (value_weight[i].first - prev);
    }
    cum = next;
  }
  return value_weight.back().first;
}

}  // namespace detail

template <class LogTarget>
GridSummary grid_posterior_ve(LogTarget&& log_target, double init_lambda_v,
                              double init_lambda_c, double level,
                              int final_points = 401) {
  detail::Axis av{std::log(init_lambda_v), 6.0};
  detail::Axis ac{std::log(init_lambda_c), 6.0};

  const int stages = 4;
  GridSummary summary;
  for (int stage = 0; stage < stages; ++stage) {
    const bool last = stage == stages - 1;
    const int n = last ? final_points : 161;
    auto u0 = detail::linspace(av.center - av.half_width, av.center + av.half_width, n);
    auto u1 = detail::linspace(ac.center - ac.half_width, ac.center + ac.half_width, n);

    std::vector<double> logw(static_cast<std::size_t>(n) * n,
                             -std::numeric_limits<double>::infinity());
    double max_logw = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        double lw;
        try {
          lw = log_target(std::exp(u0[static_cast<std::size_t>(i)]),
                          std::exp(u1[static_cast<std::size_t>(j)])) +
               u0[static_cast<std::size_t>(i)] + u1[static_cast<std::size_t>(j)];
        } catch (const veinfer::numerical_error&) {
          continue;
        }
        if (!std::isfinite(lw)) continue;
        logw[static_cast<std::size_t>(i) * n + j] = lw;
        max_logw = std::max(max_logw, lw);
      }
    }
    if (!std::isfinite(max_logw)) {
      throw std::runtime_error("grid_posterior_ve: no finite density on grid");
    }

    double total = 0.0;
    double m0 = 0.0, m1 = 0.0, q0 = 0.0, q1 = 0.0;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        double w = std::exp(logw[static_cast<std::size_t>(i) * n + j] - max_logw);
        if (w <= 0.0) continue;
        total += w;
        m0 += w * u0[static_cast<std::size_t>(i)];
        m1 += w * u1[static_cast<std::size_t>(j)];
        q0 += w * u0[static_cast<std::size_t>(i)] * u0[static_cast<std::size_t>(i)];
        q1 += w * u1[static_cast<std::size_t>(j)] * u1[static_cast<std::size_t>(j)];
      }
    }
    m0 /= total;
    m1 /= total;
    double sd0 = std::sqrt(std::max(0.0, q0 / total - m0 * m0));
    double sd1 = std::sqrt(std::max(0.0, q1 / total - m1 * m1));

    if (!last) {
      av = {m0, std::max(10.0 * sd0, 1e-3)};
      ac = {m1, std::max(10.0 * sd1, 1e-3)};
      continue;
    }

    std::vector<std::pair<double, double>> ve_weight;
    ve_weight.reserve(static_cast<std::size_t>(n) * n);
    double mean_ve = 0.0;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        double w = std::exp(logw[static_cast<std::size_t>(i) * n + j] - max_logw);
        if (w <= 0.0) continue;
        double ve = 1.0 - std::exp(u0[static_cast<std::size_t>(i)] -
                                   u1[static_cast<std::size_t>(j)]);
        mean_ve += w * ve;
        ve_weight.emplace_back(ve, w);
      }
    }
    std::sort(ve_weight.begin(), ve_weight.end());
    double tail = (1.0 - level) / 2.0;
    summary.mean_ve = mean_ve / total;
    summary.median_ve = detail::weighted_quantile(ve_weight, total, 0.5);
    summary.ci_lo = detail::weighted_quantile(ve_weight, total, tail);
    summary.ci_hi = detail::weighted_quantile(ve_weight, total, 1.0 - tail);
  }
  return summary;
}

inline GridSummary grid_posterior_ve(const veinfer::TrialData& data,
                                     const veinfer::GammaPriorPair& priors,
                                     const veinfer::LikelihoodConfig& config,
                                     double level, int final_points = 401) {
  auto target = [&](double lv, double lc) {
    return veinfer::log_posterior(lv, lc, data, priors, config);
  };
  double init_v = (data.x_v() + 0.5) / data.s_v();
  double init_c = (data.x_c() + 0.5) / data.s_c();
  return grid_posterior_ve(target, init_v, init_c, level, final_points);
}

}  // namespace test_oracle
