// veinfer: two-arm vaccine-efficacy estimation from the command line.
//
// Exit codes: 0 success, 1 acceptance/validation failure (reproduce,
// validate-moments), 2 input error, 3 numerical error.

#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "veinfer/veinfer.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_tolerance = 1;
constexpr int exit_input = 2;
constexpr int exit_numerical = 3;

std::optional<std::uint64_t> env_seed() {
  const char* s = std::getenv("VE_INFER_SEED");
  if (s == nullptr || *s == '\0') return std::nullopt;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(s, &end, 10);
  if (end == nullptr || *end != '\0')
    throw std::domain_error("VE_INFER_SEED must be a nonnegative integer, got '" +
                            std::string(s) + "'");
  return static_cast<std::uint64_t>(v);
}

struct AnalyzeFlags {
  std::string input, output, chain_csv_path;
  std::string method, moment_mode, variance_n;
  std::optional<double> level;
  std::optional<std::uint64_t> seed;
  std::optional<int> chains;
  std::optional<long long> iterations, burn_in;
};

int cmd_analyze(const AnalyzeFlags& f) {
  veinfer::json j;
  try {
    j = veinfer::json::parse(veinfer::read_file(f.input));
  } catch (const veinfer::json::parse_error& e) {
    std::cerr << "error: request file is not valid JSON: " << e.what() << "\n";
    return exit_input;
  }
  veinfer::AnalysisRequest req = veinfer::request_from_json(j);

  // precedence: flag > request field > VE_INFER_SEED > built-in default
  if (f.seed)
    req.mcmc.seed = *f.seed;
  else if (!(j.contains("mcmc") && j.at("mcmc").contains("seed"))) {
    if (const auto es = env_seed()) req.mcmc.seed = *es;
  }
  if (!f.method.empty()) req.method = veinfer::method_from_string(f.method);
  if (!f.moment_mode.empty())
    req.likelihood.moment_mode = veinfer::moment_mode_from_string(f.moment_mode);
  if (!f.variance_n.empty())
    req.likelihood.variance_n_source = veinfer::variance_n_from_string(f.variance_n);
  if (f.level) req.level = *f.level;
  if (f.chains) req.mcmc.chains = *f.chains;
  if (f.iterations) req.mcmc.iterations = *f.iterations;
  if (f.burn_in) req.mcmc.burn_in = *f.burn_in;

  const veinfer::AnalysisReport rep = veinfer::run_analysis(req);
  veinfer::atomic_write_file(f.output, veinfer::report_to_json(rep).dump(2) + "\n");
  if (!f.chain_csv_path.empty()) {
    if (!rep.chain)
      throw std::domain_error("--chain-csv requires method full or both");
    veinfer::atomic_write_file(f.chain_csv_path, veinfer::chain_csv(*rep.chain));
  }
  std::cout << "report written to " << f.output << "\n";
  return exit_ok;
}

int cmd_elicit(double ve_hat, double lambda_c_hat) {
  const veinfer::GammaPriorPair p =
      veinfer::elicit_priors(veinfer::Efficacy(ve_hat), lambda_c_hat);
  const veinfer::json out{{"a_v", p.a_v()},
                          {"b_v", p.b_v()},
                          {"a_c", p.a_c()},
                          {"b_c", p.b_c()},
                          {"prior_mean_ve", veinfer::prior_mean_ve(p).value()}};
  std::cout << out.dump(2) << "\n";
  return exit_ok;
}

int cmd_simulate(long long n_v, long long n_c, double lambda_v, double lambda_c,
                 double duration, std::optional<std::uint64_t> seed,
                 const std::string& output) {
  std::uint64_t s = 42;
  if (seed)
    s = *seed;
  else if (const auto es = env_seed())
    s = *es;
  const veinfer::TrialData data = veinfer::simulate_trial(
      n_v, n_c, veinfer::RatePair(lambda_v, lambda_c), duration, s);
  const std::string body = veinfer::trial_data_to_json(data).dump(2) + "\n";
  if (output.empty())
    std::cout << body;
  else
    veinfer::atomic_write_file(output, body);
  return exit_ok;
}

int cmd_validate_moments(int points, double ld_min, double ld_max,
                         long long replicates, double duration,
                         std::optional<std::uint64_t> seed_flag,
                         const std::string& output) {
  if (points < 1) throw std::domain_error("--points must be at least 1");
  if (!(ld_min > 0.0) || !(ld_max >= ld_min))
    throw std::domain_error("need 0 < --ld-min <= --ld-max");
  std::uint64_t seed = 42;
  if (seed_flag)
    seed = *seed_flag;
  else if (const auto es = env_seed())
    seed = *es;

  std::string csv =
      "lambda,d,lambda_d,mean_closed,mean_quadrature,mc_mean,mc_se_mean,"
      "corrected_var,paper_var,mc_var,mc_se_var,corrected_pass,paper_pass\n";
  bool all_corrected_pass = true;
  char buf[400];
  for (int i = 0; i < points; ++i) {
    const double t = points == 1 ? 0.0 : static_cast<double>(i) / (points - 1);
    const double ld = ld_min * std::pow(ld_max / ld_min, t);
    const double lambda = ld / duration;
    const double mean_closed = veinfer::surveillance_mean(lambda, duration);
    const double mean_quad = veinfer::quadrature_moment_oracle(lambda, duration, 1);
    const double var_corr =
        veinfer::surveillance_variance(lambda, duration, veinfer::MomentMode::Corrected);
    const double var_paper = veinfer::surveillance_variance(
        lambda, duration, veinfer::MomentMode::PaperCompat);
    const veinfer::MomentEstimate mc = veinfer::mc_moments(
        replicates, lambda, duration, seed + static_cast<std::uint64_t>(i));
    const bool corr_pass = std::fabs(var_corr - mc.variance) <= 3.0 * mc.se_var;
    const bool paper_pass = std::fabs(var_paper - mc.variance) <= 3.0 * mc.se_var;
    all_corrected_pass = all_corrected_pass && corr_pass;
    std::snprintf(buf, sizeof(buf),
                  "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,"
                  "%s,%s\n",
                  lambda, duration, ld, mean_closed, mean_quad, mc.mean, mc.se_mean,
                  var_corr, var_paper, mc.variance, mc.se_var,
                  corr_pass ? "pass" : "fail", paper_pass ? "pass" : "fail");
    csv += buf;
  }
  if (output.empty())
    std::cout << csv;
  else
    veinfer::atomic_write_file(output, csv);
  if (!all_corrected_pass) {
    std::cerr << "error: corrected variance failed the 3-s.e. Monte Carlo check\n";
    return exit_tolerance;
  }
  return exit_ok;
}

int cmd_reproduce(std::optional<std::uint64_t> seed_flag, const std::string& output) {
  std::uint64_t seed = veinfer::McmcConfig{}.seed;
  if (seed_flag)
    seed = *seed_flag;
  else if (const auto es = env_seed())
    seed = *es;
  const veinfer::ReproduceResult r = veinfer::run_reproduce(seed);

  std::printf("built-in dataset: %s (seed %" PRIu64 ")\n",
              veinfer::builtin_dataset_name, seed);
  std::printf("%-44s %9s %9s %6s %s\n", "quantity", "reference", "actual", "tol",
              "status");
  for (const auto& row : r.rows)
    std::printf("%-44s %9.1f %9.1f %6.1f %s\n", row.quantity.c_str(), row.expected,
                row.actual, row.tolerance, row.pass ? "ok" : "FAIL");
  if (!output.empty()) {
    veinfer::json out = veinfer::json::array(
        {veinfer::report_to_json(r.matching_report),
         veinfer::report_to_json(r.default_report)});
    veinfer::atomic_write_file(output, out.dump(2) + "\n");
  }
  if (!r.all_pass) {
    std::cerr << "error: reproduction outside tolerance\n";
    return exit_tolerance;
  }
  return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"vaccine-efficacy estimation: conditional Beta-binomial and full "
               "Bayesian rate model"};
  app.set_version_flag("--version", veinfer::version);
  app.require_subcommand(1);

  AnalyzeFlags af;
  auto* analyze = app.add_subcommand("analyze", "run an analysis request file");
  analyze->add_option("--input", af.input, "request JSON path")->required();
  analyze->add_option("--output", af.output, "report JSON path")->required();
  analyze->add_option("--chain-csv", af.chain_csv_path, "write retained draws as CSV");
  analyze->add_option("--method", af.method, "conditional|full|both");
  analyze->add_option("--level", af.level, "credible level in (0,1)");
  analyze->add_option("--seed", af.seed, "RNG seed");
  analyze->add_option("--chains", af.chains, "MCMC chains");
  analyze->add_option("--iterations", af.iterations, "iterations per chain");
  analyze->add_option("--burn-in", af.burn_in, "burn-in iterations");
  analyze->add_option("--moment-mode", af.moment_mode, "paper|corrected");
  analyze->add_option("--variance-n", af.variance_n, "per-cohort|appendix-nv");

  double ve_hat = 0.0, lambda_c_hat = 0.0;
  auto* elicit = app.add_subcommand("elicit", "gamma priors from anticipated VE");
  elicit->add_option("--ve-hat", ve_hat, "anticipated VE fraction in [0,1)")->required();
  elicit->add_option("--lambda-c-hat", lambda_c_hat, "anticipated control rate")
      ->required();

  long long sim_nv = 0, sim_nc = 0;
  double sim_lv = 0.0, sim_lc = 0.0, sim_d = 0.0;
  std::optional<std::uint64_t> sim_seed;
  std::string sim_out;
  auto* simulate = app.add_subcommand("simulate", "simulate a two-arm trial");
  simulate->add_option("--n-v", sim_nv, "vaccine cohort size")->required();
  simulate->add_option("--n-c", sim_nc, "control cohort size")->required();
  simulate->add_option("--lambda-v", sim_lv, "vaccine infection rate")->required();
  simulate->add_option("--lambda-c", sim_lc, "control infection rate")->required();
  simulate->add_option("--duration", sim_d, "enrollment duration, years")->required();
  simulate->add_option("--seed", sim_seed, "RNG seed");
  simulate->add_option("--output", sim_out, "TrialData JSON path (default stdout)");

  int vm_points = 50;
  double vm_ld_min = 1e-4, vm_ld_max = 50.0, vm_d = 0.29;
  long long vm_reps = 1000000;
  std::optional<std::uint64_t> vm_seed;
  std::string vm_out;
  auto* validate = app.add_subcommand(
      "validate-moments", "check closed-form moments against oracles on a grid");
  validate->add_option("--points", vm_points, "grid size (log-spaced in lambda*d)");
  validate->add_option("--ld-min", vm_ld_min, "smallest lambda*d");
  validate->add_option("--ld-max", vm_ld_max, "largest lambda*d");
  validate->add_option("--replicates", vm_reps, "Monte Carlo replicates per point");
  validate->add_option("--d", vm_d, "enrollment duration, years");
  validate->add_option("--seed", vm_seed, "RNG seed");
  validate->add_option("--output", vm_out, "CSV path (default stdout)");

  std::optional<std::uint64_t> rep_seed;
  std::string rep_out;
  auto* reproduce = app.add_subcommand(
      "reproduce", "rerun the built-in dataset and compare to its reference results");
  reproduce->add_option("--seed", rep_seed, "RNG seed");
  reproduce->add_option("--output", rep_out, "write both reports as a JSON array");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_input;
  }

  try {
    if (*analyze) return cmd_analyze(af);
    if (*elicit) return cmd_elicit(ve_hat, lambda_c_hat);
    if (*simulate)
      return cmd_simulate(sim_nv, sim_nc, sim_lv, sim_lc, sim_d, sim_seed, sim_out);
    if (*validate)
      return cmd_validate_moments(vm_points, vm_ld_min, vm_ld_max, vm_reps, vm_d,
                                  vm_seed, vm_out);
    if (*reproduce) return cmd_reproduce(rep_seed, rep_out);
  } catch (const veinfer::numerical_error& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return exit_numerical;
  } catch (const std::domain_error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return exit_input;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return exit_input;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_input;
  }
  return exit_input;
}
