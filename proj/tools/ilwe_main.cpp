// Command-line front door for the integer-LWE workbench. Talks to the
// library exclusively through the C API in ilwe.h.
//
// Exit codes: 0 on success, 1 on usage/configuration errors, 2 when a
// computation fails (singular system, degenerate SVD, tune failure,
// exhausted rejection loop).

#include <cinttypes>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ilwe.h"

namespace {

int exit_code_for(ilwe_status status) {
  switch (status) {
    case ILWE_OK:
      return 0;
    case ILWE_ERR_INVALID_ARGUMENT:
    case ILWE_ERR_PARSE:
    case ILWE_ERR_IO:
      return 1;
    default:
      return 2;
  }
}

int report_failure(ilwe_status status) {
  std::fprintf(stderr, "error: %s: %s\n", ilwe_status_name(status), ilwe_last_error());
  return exit_code_for(status);
}

struct SimFlags {
  ilwe_sim_params params{};
  std::string y_dist = "uniform";
  std::string secret_mode = "fixed_weight";
  std::string resample = "both";

  bool resolve() {
    if (y_dist == "uniform")
      params.y_dist = ILWE_Y_UNIFORM;
    else if (y_dist == "uniform_shifted")
      params.y_dist = ILWE_Y_UNIFORM_SHIFTED;
    else if (y_dist == "subgaussian")
      params.y_dist = ILWE_Y_SUBGAUSSIAN;
    else
      return false;
    params.secret_mode = secret_mode == "uniform_box" ? ILWE_SECRET_UNIFORM_BOX : ILWE_SECRET_FIXED_WEIGHT;
    params.resample = resample == "c_only" ? ILWE_RESAMPLE_C_ONLY : ILWE_RESAMPLE_BOTH;
    return true;
  }
};

void print_secret_line(const std::vector<int64_t>& values) {
  for (std::size_t i = 0; i < values.size(); ++i)
    std::printf("%s%" PRId64, i ? " " : "", values[i]);
  std::printf("\n");
}

int attack_one(const ilwe_instance* inst, const ilwe_samples* samples, int32_t method, const char* label,
               bool print_label, const std::vector<int64_t>& secret) {
  ilwe_recovery* rec = nullptr;
  const ilwe_status status =
      inst ? ilwe_attack_instance(inst, method, &rec) : ilwe_attack_samples(samples, method, &rec);
  if (status != ILWE_OK) return report_failure(status);

  std::vector<int64_t> s_tilde(ilwe_recovery_dim(rec));
  ilwe_recovery_secret(rec, s_tilde.data());
  ilwe_recovery_free(rec);

  if (print_label) std::printf("%s: ", label);
  print_secret_line(s_tilde);
  if (!secret.empty()) {
    if (secret.size() != s_tilde.size()) {
      std::fprintf(stderr, "error: InvalidArgument: secret has %zu entries, recovery has %zu\n", secret.size(),
                   s_tilde.size());
      return 1;
    }
    ilwe_eval eval{};
    if (const ilwe_status es = ilwe_evaluate(s_tilde.data(), secret.data(), secret.size(), &eval))
      return report_failure(es);
    if (print_label) std::printf("%s: ", label);
    std::printf("l1=%" PRId64 " linf=%" PRId64 " weight_diff=%" PRId64 "%s\n", eval.l1, eval.linf,
                eval.weight_diff, eval.discarded ? " (discarded: all-zero recovery)" : "");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"integer-LWE key-recovery workbench"};
  app.require_subcommand(1);

  // --- experiment -------------------------------------------------------
  auto* exp = app.add_subcommand("experiment", "run a parameter-row experiment from a config file");
  std::string config_path, report_path = "report.csv", format = "csv";
  std::uint64_t exp_seed = 0;
  exp->add_option("--config", config_path, "experiment config file")->required();
  exp->add_option("--out", report_path, "report output path (default report.csv)");
  exp->add_option("--format", format, "csv or table")->check(CLI::IsMember({"csv", "table"}));
  auto* exp_seed_opt = exp->add_option("--seed", exp_seed, "override the config seed");

  // --- attack -----------------------------------------------------------
  auto* atk = app.add_subcommand("attack", "recover a secret from an instance or sample file");
  std::string instance_path, samples_path, secret_path, method = "lsm";
  int32_t atk_n = 0, atk_k = 0;
  std::uint64_t atk_seed = 0;
  auto* inst_opt = atk->add_option("--instance", instance_path, "instance file (direct attack)");
  auto* samp_opt = atk->add_option("--samples", samples_path, "sample batch file (streaming attack)");
  atk->add_option("--n", atk_n, "ring degree of the sample file");
  atk->add_option("--k", atk_k, "module rank of the sample file");
  atk->add_option("--method", method, "lsm, svd or both")->check(CLI::IsMember({"lsm", "svd", "both"}));
  atk->add_option("--secret", secret_path, "true secret file; prints distances when given");
  atk->add_option("--seed", atk_seed, "accepted for uniformity; attacks are deterministic");
  inst_opt->excludes(samp_opt);

  // --- simulate ---------------------------------------------------------
  auto* sim = app.add_subcommand("simulate", "generate accepted samples from the rejection loop");
  SimFlags flags;
  flags.params.k = 1;
  flags.params.eta = 1;
  flags.params.alpha = 1;
  std::uint64_t sim_m = 0, sim_seed = 0;
  std::string samples_out, secret_out;
  sim->add_option("--n", flags.params.n, "ring degree")->required();
  sim->add_option("--k", flags.params.k, "module rank (default 1)");
  sim->add_option("--rho", flags.params.rho, "Hamming weight of c")->required();
  sim->add_option("--gamma", flags.params.gamma, "mask bound")->required();
  sim->add_option("--beta", flags.params.beta, "rejection offset (default 0)");
  sim->add_option("--eta", flags.params.eta, "secret coefficient bound (default 1)");
  sim->add_option("--alpha", flags.params.alpha, "subgaussian mask coefficient bound");
  sim->add_option("--y-dist", flags.y_dist, "uniform, uniform_shifted or subgaussian")
      ->check(CLI::IsMember({"uniform", "uniform_shifted", "subgaussian"}));
  sim->add_option("--secret-mode", flags.secret_mode, "fixed_weight or uniform_box")
      ->check(CLI::IsMember({"fixed_weight", "uniform_box"}));
  sim->add_option("--resample", flags.resample, "both or c_only")->check(CLI::IsMember({"both", "c_only"}));
  sim->add_option("--m", sim_m, "number of accepted samples")->required();
  sim->add_option("--out", samples_out, "sample batch output path")->required();
  sim->add_option("--secret-out", secret_out, "secret output path")->required();
  sim->add_option("--seed", sim_seed, "master seed (default 0)");

  // --- bound ------------------------------------------------------------
  auto* bnd = app.add_subcommand("bound", "evaluate the least-squares sample-complexity bound");
  double tau_a = 0.0, sigma_a = 0.0, tau_e = 0.0, eta_conf = 1.0;
  int32_t bound_k = 1;
  std::string log_base = "e";
  std::uint64_t bnd_seed = 0;
  bnd->add_option("--tau-a", tau_a, "subgaussian parameter of the design distribution")->required();
  bnd->add_option("--sigma-a", sigma_a, "standard deviation of the design distribution")->required();
  bnd->add_option("--tau-e", tau_e, "subgaussian parameter of the noise")->required();
  bnd->add_option("--k", bound_k, "secret dimension")->required();
  bnd->add_option("--eta-conf", eta_conf, "confidence parameter (>= 1, default 1)");
  bnd->add_option("--log-base", log_base, "e, 2 or 10 (default e)")->check(CLI::IsMember({"e", "2", "10"}));
  bnd->add_option("--seed", bnd_seed, "accepted for uniformity; the bound is deterministic");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (app.got_subcommand(exp)) {
    const ilwe_status status = ilwe_experiment_run(
        config_path.c_str(), report_path.c_str(), format == "table" ? ILWE_FORMAT_TABLE : ILWE_FORMAT_CSV,
        exp_seed_opt->count() > 0 ? 1 : 0, exp_seed,
        [](const char* line, void*) { std::printf("%s\n", line); }, nullptr);
    if (status != ILWE_OK) return report_failure(status);
    std::printf("report written to %s\n", report_path.c_str());
    return 0;
  }

  if (app.got_subcommand(atk)) {
    if (inst_opt->count() == 0 && samp_opt->count() == 0) {
      std::fprintf(stderr, "error: InvalidArgument: need --instance or --samples\n");
      return 1;
    }
    std::vector<int64_t> secret;
    if (!secret_path.empty()) {
      int64_t* buf = nullptr;
      size_t len = 0;
      if (const ilwe_status s = ilwe_secret_load(secret_path.c_str(), &buf, &len)) return report_failure(s);
      secret.assign(buf, buf + len);
      ilwe_free(buf);
    }

    ilwe_instance* inst = nullptr;
    ilwe_samples* samples = nullptr;
    if (inst_opt->count() > 0) {
      if (const ilwe_status s = ilwe_instance_load(instance_path.c_str(), &inst)) return report_failure(s);
    } else {
      if (atk_n < 1 || atk_k < 1) {
        std::fprintf(stderr, "error: InvalidArgument: --samples needs --n and --k\n");
        return 1;
      }
      if (const ilwe_status s = ilwe_samples_load(samples_path.c_str(), atk_n, atk_k, &samples))
        return report_failure(s);
    }

    int code = 0;
    const bool both = method == "both";
    if (method == "lsm" || both)
      code = attack_one(inst, samples, ILWE_METHOD_LSM, "lsm", both, secret);
    if (code == 0 && (method == "svd" || both))
      code = attack_one(inst, samples, ILWE_METHOD_SVD, "svd", both, secret);
    ilwe_instance_free(inst);
    ilwe_samples_free(samples);
    return code;
  }

  if (app.got_subcommand(sim)) {
    if (!flags.resolve()) {
      std::fprintf(stderr, "error: InvalidArgument: unknown y distribution\n");
      return 1;
    }
    ilwe_samples* samples = nullptr;
    int64_t* secret = nullptr;
    double rejection = 0.0;
    const ilwe_status status = ilwe_simulate(&flags.params, sim_m, sim_seed, &samples, &secret, &rejection);
    if (status != ILWE_OK) return report_failure(status);
    const size_t secret_len = static_cast<size_t>(flags.params.n) * static_cast<size_t>(flags.params.k);
    ilwe_status io = ilwe_samples_save(samples, samples_out.c_str());
    if (io == ILWE_OK) io = ilwe_secret_save(secret, secret_len, secret_out.c_str());
    ilwe_samples_free(samples);
    ilwe_free(secret);
    if (io != ILWE_OK) return report_failure(io);
    std::printf("wrote %" PRIu64 " samples to %s, secret to %s\n", sim_m, samples_out.c_str(), secret_out.c_str());
    std::printf("rejection rate: %.2f%%\n", rejection * 100.0);
    return 0;
  }

  // bound
  double sub = 0.0, noise = 0.0, required = 0.0;
  const double base = log_base == "2" ? 2.0 : log_base == "10" ? 10.0 : 0.0;
  const ilwe_status status =
      ilwe_sample_complexity(tau_a, sigma_a, tau_e, bound_k, eta_conf, base, &sub, &noise, &required);
  if (status != ILWE_OK) return report_failure(status);
  std::printf("subgaussian-design bound: %.6g\n", sub);
  std::printf("noise bound:              %.6g\n", noise);
  std::printf("required m:               %.6g (next integer %.0f)\n", required, std::ceil(required));
  return 0;
}
