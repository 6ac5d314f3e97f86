#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <future>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "veinfer/errors.hpp"
#include "veinfer/likelihood.hpp"
#include "veinfer/rng.hpp"
#include "veinfer/trial.hpp"

namespace veinfer {

struct McmcConfig {
  int chains = 4;
  long long iterations = 50000;  // per chain, including burn-in
  long long burn_in = 10000;
  std::uint64_t seed = 42;
  double target_acceptance = 0.35;  // 2-D random-walk optimum is near 0.35
  double initial_step = 0.5;        // proposal sd on the log-rate scale

  void validate() const {
    if (chains < 2) throw std::domain_error("McmcConfig: chains must be at least 2");
    if (burn_in < 0) throw std::domain_error("McmcConfig: burn_in must be nonnegative");
    if (iterations <= burn_in)
      throw std::domain_error("McmcConfig: iterations must exceed burn_in");
    if (!(target_acceptance > 0.1 && target_acceptance < 0.6))
      throw std::domain_error("McmcConfig: target_acceptance must lie in (0.1, 0.6)");
    if (!(initial_step > 0.0))
      throw std::domain_error("McmcConfig: initial_step must be positive");
  }
};

struct ChainDraw {
  long long iteration;  // global iteration index within the chain
  double lambda_v;
  double lambda_c;
  double ve;  // 1 - lambda_v/lambda_c, recorded per draw
  double log_posterior;
};

struct SingleChain {
  int chain_id;
  double acceptance_rate;  // over post-burn-in iterations
  std::vector<ChainDraw> draws;
};

struct PosteriorChain {
  std::vector<SingleChain> chains;

  long long total_draws() const {
    long long n = 0;
    for (const auto& c : chains) n += static_cast<long long>(c.draws.size());
    return n;
  }
};

namespace detail {

// Running mean/variance (Welford) for one coordinate.
struct RunningMoments {
  long long n = 0;
  double mean = 0.0, m2 = 0.0;
  void push(double x) {
    ++n;
    const double d = x - mean;
    mean += d / static_cast<double>(n);
    m2 += d * (x - mean);
  }
  double variance() const { return n > 1 ? m2 / static_cast<double>(n - 1) : 0.0; }
};

template <class LogTarget>
SingleChain run_chain(LogTarget&& log_target, double init_lambda_v,
                      double init_lambda_c, const McmcConfig& cfg, int chain_id) {
  constexpr double neg_inf = -std::numeric_limits<double>::infinity();
  RngStream rng(cfg.seed, stream_domain::mcmc | static_cast<std::uint64_t>(chain_id));

  double u0 = std::log(init_lambda_v), u1 = std::log(init_lambda_c);
  // target in rate space; proposals that fail numerically score -inf
  auto eval = [&](double a0, double a1, bool initial) {
    const double lv = std::exp(a0), lc = std::exp(a1);
    if (initial) return log_target(lv, lc);
    try {
      return log_target(lv, lc);
    } catch (const numerical_error&) {
      return neg_inf;
    }
  };
  double cur_raw = eval(u0, u1, true);
  if (!std::isfinite(cur_raw))
    throw numerical_error("sample_posterior: non-finite log-posterior at initial state");
  // +u0+u1 is the Jacobian of the log-rate reparameterization
  double cur = cur_raw + u0 + u1;

  RunningMoments mom0, mom1;
  double log_scale = std::log(cfg.initial_step);
  long long accepted_post = 0;

  SingleChain out{chain_id, 0.0, {}};
  out.draws.reserve(static_cast<std::size_t>(cfg.iterations - cfg.burn_in));

  for (long long t = 0; t < cfg.iterations; ++t) {
    // component variances enter the proposal only once estimated stably
    const bool scaled = mom0.n >= 100;
    const double step = std::exp(log_scale);
    const double sd0 = scaled ? step * std::sqrt(mom0.variance()) : step;
    const double sd1 = scaled ? step * std::sqrt(mom1.variance()) : step;
    const double p0 = u0 + sd0 * rng.normal();
    const double p1 = u1 + sd1 * rng.normal();
    const double prop_raw = eval(p0, p1, false);
    const double prop = prop_raw + p0 + p1;
    const double log_alpha = prop - cur;
    const bool accept = std::log(rng.uniform01()) < log_alpha;
    if (accept) {
      u0 = p0;
      u1 = p1;
      cur = prop;
      cur_raw = prop_raw;
    }
    if (t < cfg.burn_in) {
      // Robbins-Monro adaptation of the global scale, burn-in only
      const double alpha = std::exp(std::min(0.0, log_alpha));
      log_scale += (alpha - cfg.target_acceptance) /
                   std::pow(static_cast<double>(t) + 1.0, 0.7);
      mom0.push(u0);
      mom1.push(u1);
    } else {
      accepted_post += accept ? 1 : 0;
      const double lv = std::exp(u0), lc = std::exp(u1);
      out.draws.push_back({t, lv, lc, 1.0 - lv / lc, cur_raw});
    }
  }
  out.acceptance_rate = static_cast<double>(accepted_post) /
                        static_cast<double>(cfg.iterations - cfg.burn_in);
  return out;
}

}  // namespace detail

// Adaptive random-walk Metropolis on (log lambda_v, log lambda_c) for an
// arbitrary log-target over rates. Chains run concurrently; each owns the
// stream (seed, chain index), so output is deterministic regardless of
// scheduling. Exposed separately from sample_posterior so tests can run
// prior-only targets through the identical kernel.
template <class LogTarget>
PosteriorChain run_random_walk(LogTarget&& log_target, double init_lambda_v,
                               double init_lambda_c, const McmcConfig& cfg) {
  cfg.validate();
  if (!(init_lambda_v > 0.0) || !(init_lambda_c > 0.0))
    throw std::domain_error("run_random_walk: initial rates must be positive");
  std::vector<std::future<SingleChain>> futures;
  futures.reserve(static_cast<std::size_t>(cfg.chains));
  for (int c = 0; c < cfg.chains; ++c) {
    futures.push_back(std::async(std::launch::async, [&, c] {
      return detail::run_chain(log_target, init_lambda_v, init_lambda_c, cfg, c);
    }));
  }
  PosteriorChain result;
  result.chains.reserve(futures.size());
  for (auto& f : futures) result.chains.push_back(f.get());
  return result;
}

inline PosteriorChain sample_posterior(const TrialData& data,
                                       const GammaPriorPair& priors,
                                       const McmcConfig& cfg = {},
                                       const LikelihoodConfig& lik = {}) {
  // continuity-corrected crude rates keep the initial log-posterior finite
  // even when a cohort has zero cases
  const double init_v = (static_cast<double>(data.x_v()) + 0.5) / data.s_v();
  const double init_c = (static_cast<double>(data.x_c()) + 0.5) / data.s_c();
  auto target = [&data, &priors, &lik](double lv, double lc) {
    return log_posterior(lv, lc, data, priors, lik);
  };
  return run_random_walk(target, init_v, init_c, cfg);
}

// --- diagnostics -----------------------------------------------------------

namespace detail {

inline double quantile_sorted(const std::vector<double>& sorted, double p) {
  const double h = p * static_cast<double>(sorted.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(h);
  if (lo + 1 >= sorted.size()) return sorted.back();
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

// Geyer's initial monotone sequence estimator of the autocorrelation time.
// Returns the effective sample size of one chain; 0 for degenerate chains.
inline double ess_initial_monotone(const std::vector<double>& x) {
  const std::size_t n = x.size();
  if (n < 4) return static_cast<double>(n);
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(n);
  auto autocov = [&](std::size_t k) {
    double s = 0.0;
    for (std::size_t i = 0; i + k < n; ++i) s += (x[i] - mean) * (x[i + k] - mean);
    return s / static_cast<double>(n);
  };
  const double c0 = autocov(0);
  if (!(c0 > 0.0)) return 0.0;
  double sum_pairs = 0.0;
  double prev = std::numeric_limits<double>::infinity();
  for (std::size_t m = 0; 2 * m + 1 < n; ++m) {
    double g = (autocov(2 * m) + autocov(2 * m + 1)) / c0;
    if (g <= 0.0) break;
    g = std::min(g, prev);  // enforce monotone decrease
    sum_pairs += g;
    prev = g;
  }
  const double tau = std::max(1.0, 2.0 * sum_pairs - 1.0);
  return static_cast<double>(n) / tau;
}

// Split-chain potential scale reduction. NaN signals zero within-variance.
inline double split_r_hat(const std::vector<std::vector<double>>& chains) {
  std::vector<std::pair<double, double>> seq;  // (mean, variance) per half
  std::size_t m = std::numeric_limits<std::size_t>::max();
  for (const auto& c : chains) m = std::min(m, c.size() / 2);
  if (m < 2) return std::numeric_limits<double>::quiet_NaN();
  for (const auto& c : chains) {
    auto stats = [&](std::size_t begin) {
      double mean = 0.0;
      for (std::size_t i = 0; i < m; ++i) mean += c[begin + i];
      mean /= static_cast<double>(m);
      double var = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        const double d = c[begin + i] - mean;
        var += d * d;
      }
      return std::make_pair(mean, var / static_cast<double>(m - 1));
    };
    seq.push_back(stats(0));
    seq.push_back(stats(c.size() - m));
  }
  const double k = static_cast<double>(seq.size());
  double grand = 0.0, w = 0.0;
  for (const auto& s : seq) {
    grand += s.first;
    w += s.second;
  }
  grand /= k;
  w /= k;
  double b = 0.0;
  for (const auto& s : seq) b += (s.first - grand) * (s.first - grand);
  b *= static_cast<double>(m) / (k - 1.0);
  if (!(w > 0.0)) return std::numeric_limits<double>::quiet_NaN();
  const double var_plus = (static_cast<double>(m) - 1.0) / static_cast<double>(m) * w +
                          b / static_cast<double>(m);
  return std::sqrt(var_plus / w);
}

}  // namespace detail

struct PosteriorSummary {
  Efficacy mean_ve;
  Efficacy median_ve;
  double level;
  Efficacy ci_lo;
  Efficacy ci_hi;
  std::map<double, double> prob_ve_above;  // threshold -> posterior probability
  double ess;
  double r_hat;
  std::vector<std::string> warnings;
};

inline PosteriorSummary summarize_chain(const PosteriorChain& chain, double level,
                                        const std::vector<Efficacy>& thresholds) {
  if (chain.chains.size() < 2)
    throw std::domain_error("summarize_chain: r_hat needs at least 2 chains");
  if (!(level > 0.0 && level < 1.0))
    throw std::domain_error("summarize_chain: level must lie in (0,1)");
  const long long total = chain.total_draws();
  if (total < 1000)
    throw std::domain_error("summarize_chain: need at least 1000 retained draws");

  std::vector<std::vector<double>> per_chain;
  per_chain.reserve(chain.chains.size());
  std::vector<double> pooled;
  pooled.reserve(static_cast<std::size_t>(total));
  for (const auto& c : chain.chains) {
    std::vector<double> ve;
    ve.reserve(c.draws.size());
    for (const auto& d : c.draws) ve.push_back(d.ve);
    pooled.insert(pooled.end(), ve.begin(), ve.end());
    per_chain.push_back(std::move(ve));
  }

  double mean = 0.0;
  for (double v : pooled) mean += v;
  mean /= static_cast<double>(pooled.size());

  std::vector<double> sorted = pooled;
  std::sort(sorted.begin(), sorted.end());
  const double tail = 0.5 * (1.0 - level);
  const double median = detail::quantile_sorted(sorted, 0.5);
  const double lo = detail::quantile_sorted(sorted, tail);
  const double hi = detail::quantile_sorted(sorted, 1.0 - tail);

  PosteriorSummary s{Efficacy(mean), Efficacy(median), level,
                     Efficacy(lo),   Efficacy(hi),     {},
                     0.0,            1.0,              {}};

  for (const auto& t : thresholds) {
    const double thr = t.value();
    const auto above = std::count_if(pooled.begin(), pooled.end(),
                                     [&](double v) { return v > thr; });
    s.prob_ve_above[thr] =
        static_cast<double>(above) / static_cast<double>(pooled.size());
  }

  double ess = 0.0;
  for (const auto& c : per_chain) ess += detail::ess_initial_monotone(c);
  s.ess = std::min(ess, static_cast<double>(total));

  const double r = detail::split_r_hat(per_chain);
  if (std::isnan(r)) {
    s.r_hat = 1.0;
    s.warnings.push_back("r_hat undefined for zero-variance draws; reported as 1");
  } else {
    s.r_hat = r;
  }

  for (const auto& c : chain.chains) {
    if (c.acceptance_rate < 0.05 || c.acceptance_rate > 0.95)
      s.warnings.push_back("chain " + std::to_string(c.chain_id) +
                           " acceptance rate " + std::to_string(c.acceptance_rate) +
                           " outside [0.05, 0.95]");
  }
  return s;
}

}  // namespace veinfer
