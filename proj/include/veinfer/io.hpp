#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "veinfer/analysis.hpp"

namespace veinfer {

using json = nlohmann::json;

namespace detail {

inline double get_number(const json& j, const std::string& path) {
  if (!j.is_number())
    throw std::domain_error("request: field '" + path + "' must be a number");
  return j.get<double>();
}

inline long long get_integer(const json& j, const std::string& path) {
  if (!j.is_number_integer())
    throw std::domain_error("request: field '" + path + "' must be an integer");
  return j.get<long long>();
}

inline const json& require_field(const json& j, const std::string& key,
                                 const std::string& path) {
  auto it = j.find(key);
  if (it == j.end())
    throw std::domain_error("request: missing field '" + path + "'");
  return *it;
}

inline void reject_unknown_keys(const json& j, const std::vector<std::string>& known,
                                const std::string& path) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const auto& k : known) ok = ok || it.key() == k;
    if (!ok)
      throw std::domain_error("request: unknown field '" + path + it.key() + "'");
  }
}

}  // namespace detail

// --- enum string forms (shared by JSON and CLI flags) ------------------------

inline std::string to_string(Method m) {
  switch (m) {
    case Method::Conditional: return "conditional";
    case Method::Full: return "full";
    default: return "both";
  }
}

inline Method method_from_string(const std::string& s) {
  if (s == "conditional") return Method::Conditional;
  if (s == "full") return Method::Full;
  if (s == "both") return Method::Both;
  throw std::domain_error("method must be one of conditional|full|both, got '" + s + "'");
}

inline std::string to_string(MomentMode m) {
  return m == MomentMode::PaperCompat ? "paper" : "corrected";
}

inline MomentMode moment_mode_from_string(const std::string& s) {
  if (s == "paper") return MomentMode::PaperCompat;
  if (s == "corrected") return MomentMode::Corrected;
  throw std::domain_error("moment mode must be paper|corrected, got '" + s + "'");
}

inline std::string to_string(VarianceNSource v) {
  return v == VarianceNSource::PerCohort ? "per-cohort" : "appendix-nv";
}

inline VarianceNSource variance_n_from_string(const std::string& s) {
  if (s == "per-cohort") return VarianceNSource::PerCohort;
  if (s == "appendix-nv") return VarianceNSource::AppendixNv;
  throw std::domain_error("variance n source must be per-cohort|appendix-nv, got '" +
                          s + "'");
}

// --- TrialData ---------------------------------------------------------------

inline json trial_data_to_json(const TrialData& d) {
  return json{{"n_v", d.n_v()}, {"n_c", d.n_c()}, {"s_v", d.s_v()},
              {"s_c", d.s_c()}, {"x_v", d.x_v()}, {"x_c", d.x_c()},
              {"d", d.d()}};
}

inline TrialData trial_data_from_json(const json& j, const std::string& path = "data") {
  using detail::get_integer;
  using detail::get_number;
  using detail::require_field;
  if (!j.is_object())
    throw std::domain_error("request: field '" + path + "' must be an object");
  detail::reject_unknown_keys(j, {"n_v", "n_c", "s_v", "s_c", "x_v", "x_c", "d"},
                              path + ".");
  return TrialData(get_integer(require_field(j, "n_v", path + ".n_v"), path + ".n_v"),
                   get_integer(require_field(j, "n_c", path + ".n_c"), path + ".n_c"),
                   get_number(require_field(j, "s_v", path + ".s_v"), path + ".s_v"),
                   get_number(require_field(j, "s_c", path + ".s_c"), path + ".s_c"),
                   get_integer(require_field(j, "x_v", path + ".x_v"), path + ".x_v"),
                   get_integer(require_field(j, "x_c", path + ".x_c"), path + ".x_c"),
                   get_number(require_field(j, "d", path + ".d"), path + ".d"));
}

// --- AnalysisRequest ----------------------------------------------------------

inline json request_to_json(const AnalysisRequest& r) {
  return json{
      {"data", trial_data_to_json(r.data)},
      {"method", to_string(r.method)},
      {"conditional_prior",
       {{"a", r.conditional_prior.a()}, {"b", r.conditional_prior.b()}}},
      {"gamma_prior",
       {{"a_v", r.gamma_prior.a_v()},
        {"b_v", r.gamma_prior.b_v()},
        {"a_c", r.gamma_prior.a_c()},
        {"b_c", r.gamma_prior.b_c()}}},
      {"level", r.level},
      {"thresholds", r.thresholds},
      {"mcmc",
       {{"chains", r.mcmc.chains},
        {"iterations", r.mcmc.iterations},
        {"burn_in", r.mcmc.burn_in},
        {"seed", r.mcmc.seed},
        {"target_acceptance", r.mcmc.target_acceptance},
        {"initial_step", r.mcmc.initial_step}}},
      {"likelihood",
       {{"moment_mode", to_string(r.likelihood.moment_mode)},
        {"variance_n", to_string(r.likelihood.variance_n_source)}}}};
}

// Missing optional fields keep their defaults; unknown fields are rejected so
// typos surface as input errors rather than silently ignored settings.
inline AnalysisRequest request_from_json(const json& j) {
  using detail::get_integer;
  using detail::get_number;
  if (!j.is_object()) throw std::domain_error("request: root must be a JSON object");
  detail::reject_unknown_keys(j,
                              {"data", "method", "conditional_prior", "gamma_prior",
                               "level", "thresholds", "mcmc", "likelihood"},
                              "");
  AnalysisRequest r(trial_data_from_json(detail::require_field(j, "data", "data")));
  if (j.contains("method"))
    r.method = method_from_string(j.at("method").get<std::string>());
  if (j.contains("conditional_prior")) {
    const json& p = j.at("conditional_prior");
    detail::reject_unknown_keys(p, {"a", "b"}, "conditional_prior.");
    r.conditional_prior = BetaDistributionParams(
        get_number(detail::require_field(p, "a", "conditional_prior.a"),
                   "conditional_prior.a"),
        get_number(detail::require_field(p, "b", "conditional_prior.b"),
                   "conditional_prior.b"));
  }
  if (j.contains("gamma_prior")) {
    const json& p = j.at("gamma_prior");
    detail::reject_unknown_keys(p, {"a_v", "b_v", "a_c", "b_c"}, "gamma_prior.");
    r.gamma_prior = GammaPriorPair(
        get_number(detail::require_field(p, "a_v", "gamma_prior.a_v"), "gamma_prior.a_v"),
        get_number(detail::require_field(p, "b_v", "gamma_prior.b_v"), "gamma_prior.b_v"),
        get_number(detail::require_field(p, "a_c", "gamma_prior.a_c"), "gamma_prior.a_c"),
        get_number(detail::require_field(p, "b_c", "gamma_prior.b_c"), "gamma_prior.b_c"));
  }
  if (j.contains("level")) r.level = get_number(j.at("level"), "level");
  if (j.contains("thresholds")) {
    const json& t = j.at("thresholds");
    if (!t.is_array()) throw std::domain_error("request: field 'thresholds' must be an array");
    r.thresholds.clear();
    for (std::size_t i = 0; i < t.size(); ++i)
      r.thresholds.push_back(
          get_number(t[i], "thresholds[" + std::to_string(i) + "]"));
  }
  if (j.contains("mcmc")) {
    const json& m = j.at("mcmc");
    detail::reject_unknown_keys(m,
                                {"chains", "iterations", "burn_in", "seed",
                                 "target_acceptance", "initial_step"},
                                "mcmc.");
    if (m.contains("chains"))
      r.mcmc.chains = static_cast<int>(get_integer(m.at("chains"), "mcmc.chains"));
    if (m.contains("iterations"))
      r.mcmc.iterations = get_integer(m.at("iterations"), "mcmc.iterations");
    if (m.contains("burn_in"))
      r.mcmc.burn_in = get_integer(m.at("burn_in"), "mcmc.burn_in");
    if (m.contains("seed")) {
      if (!m.at("seed").is_number_integer() && !m.at("seed").is_number_unsigned())
        throw std::domain_error("request: field 'mcmc.seed' must be an integer");
      r.mcmc.seed = m.at("seed").get<std::uint64_t>();
    }
    if (m.contains("target_acceptance"))
      r.mcmc.target_acceptance =
          get_number(m.at("target_acceptance"), "mcmc.target_acceptance");
    if (m.contains("initial_step"))
      r.mcmc.initial_step = get_number(m.at("initial_step"), "mcmc.initial_step");
  }
  if (j.contains("likelihood")) {
    const json& l = j.at("likelihood");
    detail::reject_unknown_keys(l, {"moment_mode", "variance_n"}, "likelihood.");
    if (l.contains("moment_mode"))
      r.likelihood.moment_mode =
          moment_mode_from_string(l.at("moment_mode").get<std::string>());
    if (l.contains("variance_n"))
      r.likelihood.variance_n_source =
          variance_n_from_string(l.at("variance_n").get<std::string>());
  }
  return r;
}

// --- AnalysisReport -----------------------------------------------------------

namespace detail {
// Map keys must be strings; use the number's shortest round-trip form.
inline std::string number_key(double x) { return json(x).dump(); }
}  // namespace detail

inline json report_to_json(const AnalysisReport& rep) {
  json results = json::object();
  if (rep.conditional) {
    const ConditionalSummary& c = *rep.conditional;
    json prob = json::object();
    for (const auto& [t, p] : c.prob_ve_above) prob[detail::number_key(t)] = p;
    results["conditional"] = {
        {"posterior", {{"a", c.posterior.a()}, {"b", c.posterior.b()}}},
        {"mean_ve", c.mean_ve.value()},
        {"median_ve", c.median_ve.value()},
        {"ci", {{"level", c.level}, {"lo", c.ci_lo.value()}, {"hi", c.ci_hi.value()}}},
        {"prob_ve_above", prob},
        {"irr_point_ve", c.irr_point_ve.value()}};
  }
  if (rep.full) {
    const PosteriorSummary& f = *rep.full;
    json prob = json::object();
    for (const auto& [t, p] : f.prob_ve_above) prob[detail::number_key(t)] = p;
    json acc = json::array();
    if (rep.chain)
      for (const auto& c : rep.chain->chains) acc.push_back(c.acceptance_rate);
    results["full"] = {
        {"mean_ve", f.mean_ve.value()},
        {"median_ve", f.median_ve.value()},
        {"ci", {{"level", f.level}, {"lo", f.ci_lo.value()}, {"hi", f.ci_hi.value()}}},
        {"prob_ve_above", prob},
        {"ess", f.ess},
        {"r_hat", f.r_hat},
        {"acceptance_rates", acc},
        {"warnings", f.warnings}};
  }
  return json{{"request", request_to_json(rep.request)},
              {"results", results},
              {"provenance",
               {{"seed", rep.provenance.seed},
                {"version", rep.provenance.version},
                {"moment_mode", to_string(rep.provenance.moment_mode)},
                {"variance_n", to_string(rep.provenance.variance_n_source)}}},
              {"duration_seconds", rep.duration_seconds}};
}

// --- chain CSV ----------------------------------------------------------------

inline std::string chain_csv(const PosteriorChain& chain) {
  std::string out = "chain,iter,lambda_v,lambda_c,ve,log_post\n";
  char buf[160];
  for (const auto& c : chain.chains) {
    for (const auto& d : c.draws) {
      std::snprintf(buf, sizeof(buf), "%d,%lld,%.17g,%.17g,%.17g,%.17g\n", c.chain_id,
                    d.iteration, d.lambda_v, d.lambda_c, d.ve, d.log_posterior);
      out += buf;
    }
  }
  return out;
}

// --- files ----------------------------------------------------------------------

// Write-temp-then-rename so readers never observe a partial file.
inline void atomic_write_file(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open '" + tmp + "' for writing");
    f << content;
    if (!f.flush()) throw std::runtime_error("write to '" + tmp + "' failed");
  }
  std::filesystem::rename(tmp, path);
}

inline std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + path + "' for reading");
  return std::string(std::istreambuf_iterator<char>(f),
                     std::istreambuf_iterator<char>());
}

}  // namespace veinfer
