#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "attacks.hpp"
#include "sampling.hpp"

// The attack-model workflow: fix a parameter row, tune beta to the target
// rejection window on a pilot, stream trials through the Gram accumulator
// over a ladder of sample counts, and report best-of-trials rows.

namespace ilwe {

struct TuneFailedError : std::runtime_error {
  explicit TuneFailedError(const std::string& what) : std::runtime_error(what) {}
};

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

enum class AttackKind { LSM, SVD };
enum class ReportFormat { Csv, PrettyTable };

struct BetaMode {
  bool autotune = true;
  std::int64_t fixed = 0;
  double target_reject = 0.5;
  double window_lo = 0.40;
  double window_hi = 0.60;
};

struct ExperimentConfig {
  RingParams ring;
  int rho = 0;
  std::int64_t eta = 1;
  std::int64_t gamma = 1;
  BetaMode beta_mode;
  YDist y_dist = YDist::UniformGamma;
  std::int64_t alpha = 1;  // subgaussian mask only
  SecretMode secret_mode = SecretMode::FixedWeight;
  ResamplePolicy resample = ResamplePolicy::ResampleBoth;
  std::vector<std::uint64_t> m_list;
  int trials = 3;
  bool run_lsm = true;
  bool run_svd = false;
  std::uint64_t seed = 0;
  bool fixed_secret = false;  // one secret for every (m, trial) of the row

  void validate() const;
  SamplerParams sampler_params(std::int64_t beta) const;
};

// Flat "key = value" text; '#' starts a comment.
ExperimentConfig parse_config(std::istream& is);
ExperimentConfig parse_config_file(const std::string& path);

struct TrialResult {
  std::uint64_t m = 0;
  int trial_index = 0;
  AttackKind kind = AttackKind::LSM;
  std::int64_t beta_used = 0;
  std::int64_t l1_distance = 0;
  double rejection_rate = 0.0;
  bool discarded = false;
  bool failed = false;  // attack or generation error; recorded, not fatal
  std::string error;
};

struct CellResult {
  std::uint64_t m = 0;
  bool available = false;  // false when every trial discarded or failed
  std::int64_t l1_best = 0;
  double rejection_rate = 0.0;  // realized rate of the best trial
  int discarded_trials = 0;     // discarded or failed
};

struct ExperimentRow {
  AttackKind kind = AttackKind::LSM;
  int n = 0, k = 0, rho = 0;
  std::int64_t eta = 0;
  std::int64_t gamma_minus_beta = 0;
  std::optional<std::int64_t> alpha;  // engaged only for the subgaussian mask
  std::int64_t beta_used = 0;
  std::vector<CellResult> cells;        // one per m in m_list order
  std::vector<TrialResult> trial_log;   // every trial, in (m, trial) order
  double baseline_guess_l1 = 0.0;       // mean l1 of a random same-mode guess
};

struct TuneResult {
  std::int64_t beta = 0;
  double pilot_rate = 0.0;  // rejection estimate at the returned beta
};

// Fixed mode passes beta through. AutoTune draws one pilot batch of
// unconditioned candidates and bisects the bound gamma - beta over
// [1, gamma + rho*eta + 1] to put the pilot rejection estimate inside the
// window; beta may come out negative.
TuneResult tune_beta(const ExperimentConfig& config);

// One trial: fresh secret (unless the row pins one), m accepted samples
// streamed through the accumulator, every configured attack solved and
// scored against the true secret.
std::vector<TrialResult> run_trial(const ExperimentConfig& config, std::uint64_t m, std::int64_t beta,
                                   std::size_t m_index, int trial_index);

using ProgressFn = std::function<void(const std::string&)>;

std::vector<ExperimentRow> run_experiment(const ExperimentConfig& config, const ProgressFn& progress = {});

// CSV columns: n, rho, gamma_minus_beta, alpha (empty when uniform), k, eta,
// m, l1_best, rejection_rate (raw fraction), attack, discarded_trials.
// The pretty table adds the random-guess baseline and prints rates as
// two-decimal percentages.
std::string emit_report(std::span<const ExperimentRow> rows, ReportFormat format);

}  // namespace ilwe
