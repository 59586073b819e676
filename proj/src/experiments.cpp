#include "experiments.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

namespace ilwe {

namespace {

constexpr std::size_t kPilotSamples = 2000;
constexpr std::size_t kBaselineGuesses = 100;

// Every random draw in an experiment is reachable as a pure function of
// (seed, purpose-tag path, item index).
std::uint64_t trial_key(const ExperimentConfig& config, std::size_t m_index, int trial_index) {
  std::uint64_t key = derive_stream(config.seed, kStreamTrial);
  key = derive_stream(key, 0);  // parameter-row slot
  key = derive_stream(key, m_index);
  return derive_stream(key, static_cast<std::uint64_t>(trial_index));
}

PolyVec trial_secret(const ExperimentConfig& config, const SamplerParams& params, std::uint64_t tkey) {
  const std::uint64_t key =
      config.fixed_secret ? derive_stream(config.seed, kStreamSecret) : derive_stream(tkey, kStreamSecret);
  StreamRng rng(key, 0);
  return sample_secret(params, config.secret_mode, rng);
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);  // shortest round-trip form
  return std::string(buf, res.ptr);
}

}  // namespace

void ExperimentConfig::validate() const {
  ring.validate();
  if (rho < 0 || rho > ring.n) throw ConfigError("config: need 0 <= rho <= n");
  if (eta < 0) throw ConfigError("config: need eta >= 0");
  if (gamma < 0) throw ConfigError("config: need gamma >= 0");
  if (!beta_mode.autotune && gamma - beta_mode.fixed < 1)
    throw ConfigError("config: fixed beta leaves gamma - beta < 1, everything would be rejected");
  if (beta_mode.autotune) {
    if (!(0.0 < beta_mode.window_lo && beta_mode.window_lo < beta_mode.target_reject &&
          beta_mode.target_reject < beta_mode.window_hi && beta_mode.window_hi < 1.0))
      throw ConfigError("config: need 0 < window_lo < target_reject < window_hi < 1");
  }
  if (y_dist == YDist::SubgaussianRotation && alpha < 1) throw ConfigError("config: subgaussian mask needs alpha >= 1");
  if (m_list.empty()) throw ConfigError("config: m_list must be nonempty");
  for (std::size_t i = 0; i + 1 < m_list.size(); ++i)
    if (m_list[i] >= m_list[i + 1]) throw ConfigError("config: m_list must be strictly increasing");
  if (m_list.front() == 0) throw ConfigError("config: sample counts must be positive");
  if (trials < 1) throw ConfigError("config: need trials >= 1");
  if (!run_lsm && !run_svd) throw ConfigError("config: no attack selected");
  if (secret_mode == SecretMode::FixedWeight && rho > 0 && eta < 1)
    throw ConfigError("config: fixed-weight secret needs eta >= 1");
}

SamplerParams ExperimentConfig::sampler_params(std::int64_t beta) const {
  SamplerParams p;
  p.n = ring.n;
  p.k = ring.k;
  p.rho = rho;
  p.gamma = gamma;
  p.beta = beta;
  p.eta = eta;
  p.y_dist = y_dist;
  p.alpha = alpha;
  p.resample = resample;
  return p;
}

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::int64_t parse_int(const std::string& v, const std::string& key) {
  std::int64_t out = 0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc{} || res.ptr != v.data() + v.size())
    throw ConfigError("config: bad integer for \"" + key + "\": " + v);
  return out;
}

double parse_real(const std::string& v, const std::string& key) {
  try {
    std::size_t used = 0;
    const double out = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return out;
  } catch (const std::exception&) {
    throw ConfigError("config: bad number for \"" + key + "\": " + v);
  }
}

bool parse_bool(const std::string& v, const std::string& key) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError("config: bad boolean for \"" + key + "\": " + v);
}

}  // namespace

ExperimentConfig parse_config(std::istream& is) {
  ExperimentConfig config;
  bool saw_n = false, saw_k = false, saw_rho = false, saw_eta = false, saw_gamma = false, saw_beta = false,
       saw_y = false, saw_m = false;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config: line " + std::to_string(line_no) + ": expected \"key = value\"");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (value.empty()) throw ConfigError("config: line " + std::to_string(line_no) + ": empty value for " + key);

    if (key == "n") {
      config.ring.n = static_cast<int>(parse_int(value, key));
      saw_n = true;
    } else if (key == "k") {
      config.ring.k = static_cast<int>(parse_int(value, key));
      saw_k = true;
    } else if (key == "rho") {
      config.rho = static_cast<int>(parse_int(value, key));
      saw_rho = true;
    } else if (key == "eta") {
      config.eta = parse_int(value, key);
      saw_eta = true;
    } else if (key == "gamma") {
      config.gamma = parse_int(value, key);
      saw_gamma = true;
    } else if (key == "beta") {
      if (value == "auto") {
        config.beta_mode.autotune = true;
      } else {
        config.beta_mode.autotune = false;
        config.beta_mode.fixed = parse_int(value, key);
      }
      saw_beta = true;
    } else if (key == "y_dist") {
      std::istringstream ss(value);
      std::string name;
      ss >> name;
      if (name == "uniform") {
        config.y_dist = YDist::UniformGamma;
      } else if (name == "uniform_shifted") {
        config.y_dist = YDist::UniformGammaShifted;
      } else if (name == "subgaussian") {
        config.y_dist = YDist::SubgaussianRotation;
        std::string arg;
        if (!(ss >> arg) || arg.rfind("alpha=", 0) != 0)
          throw ConfigError("config: y_dist subgaussian needs \"alpha=<int>\"");
        config.alpha = parse_int(arg.substr(6), "alpha");
      } else {
        throw ConfigError("config: unknown y_dist \"" + name + "\"");
      }
      std::string extra;
      if (ss >> extra) throw ConfigError("config: trailing tokens after y_dist");
      saw_y = true;
    } else if (key == "secret_mode") {
      if (value == "fixed_weight")
        config.secret_mode = SecretMode::FixedWeight;
      else if (value == "uniform_box")
        config.secret_mode = SecretMode::UniformBox;
      else
        throw ConfigError("config: unknown secret_mode \"" + value + "\"");
    } else if (key == "resample") {
      if (value == "both")
        config.resample = ResamplePolicy::ResampleBoth;
      else if (value == "c_only")
        config.resample = ResamplePolicy::ResampleCOnly;
      else
        throw ConfigError("config: unknown resample policy \"" + value + "\"");
    } else if (key == "m_list") {
      config.m_list.clear();
      std::istringstream ss(value);
      std::string item;
      while (std::getline(ss, item, ',')) {
        item = trim(item);
        const std::int64_t m = parse_int(item, key);
        if (m < 1) throw ConfigError("config: m_list entries must be positive");
        config.m_list.push_back(static_cast<std::uint64_t>(m));
      }
      saw_m = true;
    } else if (key == "trials") {
      config.trials = static_cast<int>(parse_int(value, key));
    } else if (key == "attack") {
      if (value == "lsm") {
        config.run_lsm = true;
        config.run_svd = false;
      } else if (value == "svd") {
        config.run_lsm = false;
        config.run_svd = true;
      } else if (value == "both") {
        config.run_lsm = config.run_svd = true;
      } else {
        throw ConfigError("config: unknown attack \"" + value + "\"");
      }
    } else if (key == "seed") {
      config.seed = static_cast<std::uint64_t>(parse_int(value, key));
    } else if (key == "fixed_secret") {
      config.fixed_secret = parse_bool(value, key);
    } else if (key == "target_reject") {
      config.beta_mode.target_reject = parse_real(value, key);
    } else if (key == "reject_window") {
      const auto comma = value.find(',');
      if (comma == std::string::npos) throw ConfigError("config: reject_window needs \"lo,hi\"");
      config.beta_mode.window_lo = parse_real(trim(value.substr(0, comma)), key);
      config.beta_mode.window_hi = parse_real(trim(value.substr(comma + 1)), key);
    } else {
      throw ConfigError("config: line " + std::to_string(line_no) + ": unknown key \"" + key + "\"");
    }
  }
  if (!saw_n || !saw_k || !saw_rho || !saw_eta || !saw_gamma || !saw_beta || !saw_y || !saw_m)
    throw ConfigError("config: required keys are n, k, rho, eta, gamma, beta, y_dist, m_list");
  config.validate();
  return config;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("config: cannot open " + path);
  return parse_config(is);
}

TuneResult tune_beta(const ExperimentConfig& config) {
  config.validate();
  if (!config.beta_mode.autotune) return {config.beta_mode.fixed, std::numeric_limits<double>::quiet_NaN()};

  // Unconditioned candidates: max norm of z = y + c s per draw. The
  // rejection estimate for any bound B is then just a quantile lookup,
  // exact for the resample-both policy.
  const std::int64_t max_bound = config.gamma + static_cast<std::int64_t>(config.rho) * config.eta + 1;
  SamplerParams params = config.sampler_params(config.gamma - max_bound);
  const std::uint64_t pilot_key = derive_stream(config.seed, kStreamPilot);
  StreamRng secret_rng(derive_stream(pilot_key, kStreamSecret), 0);
  const PolyVec s = sample_secret(params, config.secret_mode, secret_rng);

  std::vector<std::int64_t> maxima(kPilotSamples);
  for (std::size_t i = 0; i < kPilotSamples; ++i) {
    StreamRng rng(derive_stream(pilot_key, kStreamSamples), i);
    const PolyVec y = sample_y(params, rng);
    const Poly c = sample_in_ball(params.n, params.rho, rng);
    maxima[i] = norm_inf(add_vec(y, scalar_mul_vec(c, s)));
  }
  std::sort(maxima.begin(), maxima.end());
  const auto rejection_at = [&](std::int64_t bound) {
    // fraction with ||z||_inf >= bound
    const auto it = std::lower_bound(maxima.begin(), maxima.end(), bound);
    return static_cast<double>(maxima.end() - it) / static_cast<double>(maxima.size());
  };

  const double target = config.beta_mode.target_reject;
  std::int64_t lo = 1, hi = max_bound;
  std::int64_t best;
  if (rejection_at(lo) <= target) {
    best = lo;
  } else {
    while (hi - lo > 1) {
      const std::int64_t mid = lo + (hi - lo) / 2;
      if (rejection_at(mid) > target)
        lo = mid;
      else
        hi = mid;
    }
    // Monotonicity makes these two the closest bracket around the target.
    best = std::fabs(rejection_at(lo) - target) < std::fabs(rejection_at(hi) - target) ? lo : hi;
  }
  const double rate = rejection_at(best);
  if (rate < config.beta_mode.window_lo || rate > config.beta_mode.window_hi) {
    std::ostringstream msg;
    msg << "tune_beta: no bound in [1, " << max_bound << "] reaches rejection window [" << config.beta_mode.window_lo
        << ", " << config.beta_mode.window_hi << "]; closest achieved rate " << rate << " at gamma-beta = " << best;
    throw TuneFailedError(msg.str());
  }
  return {config.gamma - best, rate};
}

std::vector<TrialResult> run_trial(const ExperimentConfig& config, std::uint64_t m, std::int64_t beta,
                                   std::size_t m_index, int trial_index) {
  const SamplerParams params = config.sampler_params(beta);
  params.validate();
  const std::uint64_t tkey = trial_key(config, m_index, trial_index);
  const PolyVec s = trial_secret(config, params, tkey);
  const std::vector<Coeff> s_true = coeff_flatten(s);

  std::vector<AttackKind> kinds;
  if (config.run_lsm) kinds.push_back(AttackKind::LSM);
  if (config.run_svd) kinds.push_back(AttackKind::SVD);

  std::vector<TrialResult> results;
  TrialResult base;
  base.m = m;
  base.trial_index = trial_index;
  base.beta_used = beta;

  GramAccumulator acc(config.ring);
  std::uint64_t total_candidates = 0;
  const std::uint64_t sample_key = derive_stream(tkey, kStreamSamples);
  try {
    for (std::uint64_t i = 0; i < m; ++i) {
      StreamRng rng(sample_key, i);
      SignatureSample sample = gen_signature_sample(s, params, rng);
      total_candidates += sample.attempts;
      acc.absorb(sample.z, sample.c);
    }
  } catch (const std::exception& e) {
    base.failed = true;
    base.error = e.what();
    for (AttackKind kind : kinds) {
      TrialResult r = base;
      r.kind = kind;
      results.push_back(std::move(r));
    }
    return results;
  }
  base.rejection_rate = 1.0 - static_cast<double>(m) / static_cast<double>(total_candidates);

  for (AttackKind kind : kinds) {
    TrialResult r = base;
    r.kind = kind;
    try {
      const RecoveredSecret rec = kind == AttackKind::LSM ? lsm_streaming(acc) : svd_streaming(acc);
      const AttackReport report = evaluate(rec.s_tilde, s_true, m);
      r.l1_distance = report.l1_distance;
      r.discarded = report.discarded;
    } catch (const std::exception& e) {
      r.failed = true;
      r.error = e.what();
    }
    results.push_back(std::move(r));
  }
  return results;
}

namespace {

double baseline_guess_l1(const ExperimentConfig& config) {
  const SamplerParams params = config.sampler_params(0);
  StreamRng secret_rng(derive_stream(derive_stream(config.seed, kStreamBaseline), kStreamSecret), 0);
  const std::vector<Coeff> s_true = coeff_flatten(sample_secret(params, config.secret_mode, secret_rng));
  double sum = 0.0;
  for (std::size_t g = 0; g < kBaselineGuesses; ++g) {
    StreamRng rng(derive_stream(config.seed, kStreamBaseline), g + 1);
    const std::vector<Coeff> guess = coeff_flatten(sample_secret(params, config.secret_mode, rng));
    sum += static_cast<double>(evaluate(guess, s_true).l1_distance);
  }
  return sum / static_cast<double>(kBaselineGuesses);
}

std::string kind_name(AttackKind kind) { return kind == AttackKind::LSM ? "lsm" : "svd"; }

}  // namespace

std::vector<ExperimentRow> run_experiment(const ExperimentConfig& config, const ProgressFn& progress) {
  config.validate();
  const TuneResult tuned = tune_beta(config);
  const std::int64_t beta = tuned.beta;

  std::vector<AttackKind> kinds;
  if (config.run_lsm) kinds.push_back(AttackKind::LSM);
  if (config.run_svd) kinds.push_back(AttackKind::SVD);

  std::vector<ExperimentRow> rows;
  for (AttackKind kind : kinds) {
    ExperimentRow row;
    row.kind = kind;
    row.n = config.ring.n;
    row.k = config.ring.k;
    row.rho = config.rho;
    row.eta = config.eta;
    row.gamma_minus_beta = config.gamma - beta;
    if (config.y_dist == YDist::SubgaussianRotation) row.alpha = config.alpha;
    row.beta_used = beta;
    row.baseline_guess_l1 = baseline_guess_l1(config);
    rows.push_back(std::move(row));
  }

  for (std::size_t mi = 0; mi < config.m_list.size(); ++mi) {
    const std::uint64_t m = config.m_list[mi];
    std::vector<std::vector<TrialResult>> per_trial(static_cast<std::size_t>(config.trials));
    for (int t = 0; t < config.trials; ++t) per_trial[static_cast<std::size_t>(t)] = run_trial(config, m, beta, mi, t);

    for (ExperimentRow& row : rows) {
      CellResult cell;
      cell.m = m;
      for (int t = 0; t < config.trials; ++t) {
        const auto& batch = per_trial[static_cast<std::size_t>(t)];
        const auto it = std::find_if(batch.begin(), batch.end(),
                                     [&](const TrialResult& r) { return r.kind == row.kind; });
        if (it == batch.end()) continue;
        row.trial_log.push_back(*it);
        if (it->failed || it->discarded) {
          ++cell.discarded_trials;
          continue;
        }
        if (!cell.available || it->l1_distance < cell.l1_best) {
          cell.available = true;
          cell.l1_best = it->l1_distance;
          cell.rejection_rate = it->rejection_rate;
        }
      }
      row.cells.push_back(cell);
      if (progress) {
        std::ostringstream line;
        line << kind_name(row.kind) << " n=" << row.n << " k=" << row.k << " rho=" << row.rho
             << " gamma-beta=" << row.gamma_minus_beta << " m=" << m << ": ";
        if (cell.available) {
          char rate[32];
          std::snprintf(rate, sizeof rate, "%.2f%%", cell.rejection_rate * 100.0);
          line << "l1_best=" << cell.l1_best << " rejection=" << rate;
        } else {
          line << "unavailable (all trials discarded or failed)";
        }
        progress(line.str());
      }
    }
  }
  return rows;
}

std::string emit_report(std::span<const ExperimentRow> rows, ReportFormat format) {
  std::ostringstream os;
  if (format == ReportFormat::Csv) {
    os << "n,rho,gamma_minus_beta,alpha,k,eta,m,l1_best,rejection_rate,attack,discarded_trials\n";
    for (const ExperimentRow& row : rows)
      for (const CellResult& cell : row.cells) {
        os << row.n << ',' << row.rho << ',' << row.gamma_minus_beta << ',';
        if (row.alpha) os << *row.alpha;
        os << ',' << row.k << ',' << row.eta << ',' << cell.m << ',';
        if (cell.available) os << cell.l1_best;
        os << ',';
        if (cell.available) os << format_double(cell.rejection_rate);
        os << ',' << kind_name(row.kind) << ',' << cell.discarded_trials << '\n';
      }
    return os.str();
  }

  os << std::left << std::setw(5) << "n" << std::setw(5) << "rho" << std::setw(12) << "gamma-beta" << std::setw(7)
     << "alpha" << std::setw(4) << "k" << std::setw(5) << "eta" << std::setw(10) << "m" << std::setw(9) << "l1_best"
     << std::setw(11) << "rejection" << std::setw(7) << "attack" << std::setw(11) << "discarded" << "baseline\n";
  for (const ExperimentRow& row : rows)
    for (const CellResult& cell : row.cells) {
      std::ostringstream rej;
      if (cell.available)
        rej << std::fixed << std::setprecision(2) << cell.rejection_rate * 100.0 << '%';
      else
        rej << "-";
      os << std::left << std::setw(5) << row.n << std::setw(5) << row.rho << std::setw(12) << row.gamma_minus_beta
         << std::setw(7) << (row.alpha ? std::to_string(*row.alpha) : "-") << std::setw(4) << row.k << std::setw(5)
         << row.eta << std::setw(10) << cell.m << std::setw(9)
         << (cell.available ? std::to_string(cell.l1_best) : "n/a") << std::setw(11) << rej.str() << std::setw(7)
         << kind_name(row.kind) << std::setw(11) << cell.discarded_trials << std::fixed << std::setprecision(1)
         << row.baseline_guess_l1 << '\n';
    }
  return os.str();
}

}  // namespace ilwe
