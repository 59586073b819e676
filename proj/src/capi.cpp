#include "ilwe.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>

#include "attacks.hpp"
#include "experiments.hpp"
#include "matform.hpp"
#include "numerics.hpp"
#include "ring.hpp"
#include "sampling.hpp"

struct ilwe_instance {
  ilwe::IlweInstance value;
};
struct ilwe_samples {
  ilwe::SampleBatch value;
};
struct ilwe_gram {
  ilwe::GramAccumulator value;
  explicit ilwe_gram(ilwe::GramAccumulator g) : value(std::move(g)) {}
};
struct ilwe_recovery {
  ilwe::RecoveredSecret value;
};

namespace {

thread_local std::string g_last_error;

ilwe_status fail(ilwe_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

// Exceptions carry the failure taxonomy; translate them at the boundary.
template <typename Fn>
ilwe_status guarded(Fn&& fn) {
  try {
    fn();
    return ILWE_OK;
  } catch (const ilwe::ConfigError& e) {
    return fail(ILWE_ERR_PARSE, e.what());
  } catch (const ilwe::TuneFailedError& e) {
    return fail(ILWE_ERR_TUNE_FAILED, e.what());
  } catch (const ilwe::AttemptBudgetExceededError& e) {
    return fail(ILWE_ERR_ATTEMPT_BUDGET, e.what());
  } catch (const ilwe::SingularOrIndefiniteError& e) {
    return fail(ILWE_ERR_SINGULAR, e.what());
  } catch (const ilwe::DegenerateLastComponentError& e) {
    return fail(ILWE_ERR_DEGENERATE, e.what());
  } catch (const ilwe::NoConvergenceError& e) {
    return fail(ILWE_ERR_NO_CONVERGENCE, e.what());
  } catch (const ilwe::OverflowError& e) {
    return fail(ILWE_ERR_OVERFLOW, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(ILWE_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::out_of_range& e) {
    return fail(ILWE_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::runtime_error& e) {
    return fail(ILWE_ERR_IO, e.what());
  } catch (const std::exception& e) {
    return fail(ILWE_ERR_INTERNAL, e.what());
  }
}

ilwe_status require(bool ok, const char* message) {
  return ok ? ILWE_OK : fail(ILWE_ERR_INVALID_ARGUMENT, message);
}

ilwe::SamplerParams to_params(const ilwe_sim_params& p) {
  ilwe::SamplerParams out;
  out.n = p.n;
  out.k = p.k;
  out.rho = p.rho;
  out.gamma = p.gamma;
  out.beta = p.beta;
  out.eta = p.eta;
  out.alpha = p.alpha;
  switch (p.y_dist) {
    case ILWE_Y_UNIFORM: out.y_dist = ilwe::YDist::UniformGamma; break;
    case ILWE_Y_UNIFORM_SHIFTED: out.y_dist = ilwe::YDist::UniformGammaShifted; break;
    case ILWE_Y_SUBGAUSSIAN: out.y_dist = ilwe::YDist::SubgaussianRotation; break;
    default: throw std::invalid_argument("ilwe_sim_params: unknown y_dist");
  }
  switch (p.resample) {
    case ILWE_RESAMPLE_BOTH: out.resample = ilwe::ResamplePolicy::ResampleBoth; break;
    case ILWE_RESAMPLE_C_ONLY: out.resample = ilwe::ResamplePolicy::ResampleCOnly; break;
    default: throw std::invalid_argument("ilwe_sim_params: unknown resample policy");
  }
  return out;
}

ilwe::SecretMode to_secret_mode(int32_t mode) {
  switch (mode) {
    case ILWE_SECRET_FIXED_WEIGHT: return ilwe::SecretMode::FixedWeight;
    case ILWE_SECRET_UNIFORM_BOX: return ilwe::SecretMode::UniformBox;
    default: throw std::invalid_argument("ilwe_sim_params: unknown secret_mode");
  }
}

ilwe::RecoveredSecret run_attack_on_gram(const ilwe::GramAccumulator& acc, int32_t method) {
  switch (method) {
    case ILWE_METHOD_LSM: return ilwe::lsm_streaming(acc);
    case ILWE_METHOD_SVD: return ilwe::svd_streaming(acc);
    default: throw std::invalid_argument("unknown attack method");
  }
}

}  // namespace

extern "C" {

const char* ilwe_status_name(ilwe_status status) {
  switch (status) {
    case ILWE_OK: return "Ok";
    case ILWE_ERR_INVALID_ARGUMENT: return "InvalidArgument";
    case ILWE_ERR_PARSE: return "ParseError";
    case ILWE_ERR_IO: return "IoError";
    case ILWE_ERR_OVERFLOW: return "Overflow";
    case ILWE_ERR_SINGULAR: return "SingularOrIndefinite";
    case ILWE_ERR_DEGENERATE: return "DegenerateLastComponent";
    case ILWE_ERR_NO_CONVERGENCE: return "NoConvergence";
    case ILWE_ERR_ATTEMPT_BUDGET: return "AttemptBudgetExceeded";
    case ILWE_ERR_TUNE_FAILED: return "TuneFailed";
    case ILWE_ERR_INTERNAL: return "InternalError";
  }
  return "UnknownStatus";
}

const char* ilwe_last_error(void) { return g_last_error.c_str(); }

void ilwe_free(void* p) { std::free(p); }

ilwe_status ilwe_instance_load(const char* path, ilwe_instance** out) {
  if (const auto s = require(path && out, "ilwe_instance_load: null argument")) return s;
  return guarded([&] { *out = new ilwe_instance{ilwe::load_instance(path)}; });
}

ilwe_status ilwe_instance_save(const ilwe_instance* inst, const char* path) {
  if (const auto s = require(inst && path, "ilwe_instance_save: null argument")) return s;
  return guarded([&] { ilwe::save_instance(inst->value, path); });
}

ilwe_status ilwe_instance_synth(const int64_t* secret, size_t k, int64_t alpha_a, int64_t alpha_e, uint64_t m,
                                uint64_t seed, ilwe_instance** out) {
  if (const auto s = require(secret && out && k > 0, "ilwe_instance_synth: null or empty argument")) return s;
  return guarded([&] {
    ilwe::StreamRng rng(ilwe::derive_stream(seed, ilwe::kStreamSamples), 0);
    *out = new ilwe_instance{ilwe::gen_ilwe_synthetic(
        std::span<const std::int64_t>(secret, k), ilwe::DistSpec::uniform_box(static_cast<double>(alpha_a)),
        ilwe::DistSpec::uniform_box(static_cast<double>(alpha_e)), m, rng)};
  });
}

size_t ilwe_instance_rows(const ilwe_instance* inst) { return inst ? inst->value.rows() : 0; }
size_t ilwe_instance_cols(const ilwe_instance* inst) { return inst ? inst->value.cols() : 0; }
void ilwe_instance_free(ilwe_instance* inst) { delete inst; }

ilwe_status ilwe_samples_load(const char* path, int32_t n, int32_t k, ilwe_samples** out) {
  if (const auto s = require(path && out, "ilwe_samples_load: null argument")) return s;
  return guarded([&] { *out = new ilwe_samples{ilwe::load_samples(path, n, k)}; });
}

ilwe_status ilwe_samples_save(const ilwe_samples* samples, const char* path) {
  if (const auto s = require(samples && path, "ilwe_samples_save: null argument")) return s;
  return guarded([&] { ilwe::save_samples(samples->value, path); });
}

size_t ilwe_samples_count(const ilwe_samples* samples) { return samples ? samples->value.size() : 0; }

double ilwe_samples_rejection_rate(const ilwe_samples* samples) {
  return samples ? samples->value.rejection_rate() : 0.0;
}

void ilwe_samples_free(ilwe_samples* samples) { delete samples; }

ilwe_status ilwe_simulate(const ilwe_sim_params* params, uint64_t m, uint64_t seed, ilwe_samples** samples_out,
                          int64_t** secret_out, double* rejection_rate_out) {
  if (const auto s = require(params != nullptr, "ilwe_simulate: null params")) return s;
  return guarded([&] {
    const ilwe::SamplerParams p = to_params(*params);
    p.validate();
    ilwe::StreamRng secret_rng(ilwe::derive_stream(seed, ilwe::kStreamSecret), 0);
    const ilwe::PolyVec s = ilwe::sample_secret(p, to_secret_mode(params->secret_mode), secret_rng);
    ilwe::SampleBatch batch = ilwe::generate_batch(s, p, ilwe::derive_stream(seed, ilwe::kStreamSamples), m);
    if (rejection_rate_out) *rejection_rate_out = batch.rejection_rate();
    if (secret_out) {
      const std::vector<ilwe::Coeff> flat = ilwe::coeff_flatten(s);
      auto* buf = static_cast<int64_t*>(std::malloc(flat.size() * sizeof(int64_t)));
      if (!buf) throw std::runtime_error("ilwe_simulate: allocation failure");
      std::memcpy(buf, flat.data(), flat.size() * sizeof(int64_t));
      *secret_out = buf;
    }
    if (samples_out) *samples_out = new ilwe_samples{std::move(batch)};
  });
}

ilwe_status ilwe_secret_save(const int64_t* secret, size_t len, const char* path) {
  if (const auto s = require(secret && path && len > 0, "ilwe_secret_save: null or empty argument")) return s;
  return guarded([&] {
    std::ofstream os(path);
    if (!os) throw std::runtime_error(std::string("ilwe_secret_save: cannot open ") + path);
    for (size_t i = 0; i < len; ++i) {
      if (i) os << ' ';
      os << secret[i];
    }
    os << '\n';
    if (!os) throw std::runtime_error(std::string("ilwe_secret_save: write failed for ") + path);
  });
}

ilwe_status ilwe_secret_load(const char* path, int64_t** out, size_t* len_out) {
  if (const auto s = require(path && out && len_out, "ilwe_secret_load: null argument")) return s;
  return guarded([&] {
    std::ifstream is(path);
    if (!is) throw std::runtime_error(std::string("ilwe_secret_load: cannot open ") + path);
    std::vector<int64_t> values;
    long long v;
    while (is >> v) values.push_back(v);
    if (!is.eof()) throw std::runtime_error(std::string("ilwe_secret_load: non-integer content in ") + path);
    if (values.empty()) throw std::runtime_error(std::string("ilwe_secret_load: no values in ") + path);
    auto* buf = static_cast<int64_t*>(std::malloc(values.size() * sizeof(int64_t)));
    if (!buf) throw std::runtime_error("ilwe_secret_load: allocation failure");
    std::memcpy(buf, values.data(), values.size() * sizeof(int64_t));
    *out = buf;
    *len_out = values.size();
  });
}

ilwe_status ilwe_attack_instance(const ilwe_instance* inst, int32_t method, ilwe_recovery** out) {
  if (const auto s = require(inst && out, "ilwe_attack_instance: null argument")) return s;
  return guarded([&] {
    switch (method) {
      case ILWE_METHOD_LSM: *out = new ilwe_recovery{ilwe::lsm_direct(inst->value)}; break;
      case ILWE_METHOD_SVD: *out = new ilwe_recovery{ilwe::svd_direct(inst->value)}; break;
      default: throw std::invalid_argument("unknown attack method");
    }
  });
}

ilwe_status ilwe_attack_samples(const ilwe_samples* samples, int32_t method, ilwe_recovery** out) {
  if (const auto s = require(samples && out, "ilwe_attack_samples: null argument")) return s;
  return guarded([&] {
    const ilwe::SampleBatch& batch = samples->value;
    if (batch.size() == 0) throw std::invalid_argument("ilwe_attack_samples: empty batch");
    ilwe::GramAccumulator acc(ilwe::RingParams{batch.n, batch.k});
    for (std::size_t i = 0; i < batch.size(); ++i) acc.absorb(batch.zs[i], batch.cs[i]);
    *out = new ilwe_recovery{run_attack_on_gram(acc, method)};
  });
}

size_t ilwe_recovery_dim(const ilwe_recovery* rec) { return rec ? rec->value.s_tilde.size() : 0; }

ilwe_status ilwe_recovery_secret(const ilwe_recovery* rec, int64_t* dst) {
  if (const auto s = require(rec && dst, "ilwe_recovery_secret: null argument")) return s;
  std::memcpy(dst, rec->value.s_tilde.data(), rec->value.s_tilde.size() * sizeof(int64_t));
  return ILWE_OK;
}

ilwe_status ilwe_recovery_estimate(const ilwe_recovery* rec, double* dst) {
  if (const auto s = require(rec && dst, "ilwe_recovery_estimate: null argument")) return s;
  std::memcpy(dst, rec->value.s_hat.data(), rec->value.s_hat.size() * sizeof(double));
  return ILWE_OK;
}

void ilwe_recovery_free(ilwe_recovery* rec) { delete rec; }

ilwe_status ilwe_gram_create(int32_t n, int32_t k, ilwe_gram** out) {
  if (const auto s = require(out != nullptr, "ilwe_gram_create: null argument")) return s;
  return guarded([&] { *out = new ilwe_gram(ilwe::GramAccumulator(ilwe::RingParams{n, k})); });
}

ilwe_status ilwe_gram_absorb(ilwe_gram* gram, const ilwe_samples* samples) {
  if (const auto s = require(gram && samples, "ilwe_gram_absorb: null argument")) return s;
  return guarded([&] {
    const ilwe::SampleBatch& batch = samples->value;
    for (std::size_t i = 0; i < batch.size(); ++i) gram->value.absorb(batch.zs[i], batch.cs[i]);
  });
}

ilwe_status ilwe_gram_merge(ilwe_gram* dst, const ilwe_gram* src) {
  if (const auto s = require(dst && src, "ilwe_gram_merge: null argument")) return s;
  return guarded([&] { dst->value.merge(src->value); });
}

ilwe_status ilwe_gram_save(const ilwe_gram* gram, const char* path) {
  if (const auto s = require(gram && path, "ilwe_gram_save: null argument")) return s;
  return guarded([&] { gram->value.save(path); });
}

ilwe_status ilwe_gram_load(const char* path, ilwe_gram** out) {
  if (const auto s = require(path && out, "ilwe_gram_load: null argument")) return s;
  return guarded([&] { *out = new ilwe_gram(ilwe::GramAccumulator::load(path)); });
}

uint64_t ilwe_gram_count(const ilwe_gram* gram) { return gram ? gram->value.count() : 0; }
size_t ilwe_gram_dim(const ilwe_gram* gram) { return gram ? gram->value.dim() : 0; }

ilwe_status ilwe_gram_attack(const ilwe_gram* gram, int32_t method, ilwe_recovery** out) {
  if (const auto s = require(gram && out, "ilwe_gram_attack: null argument")) return s;
  return guarded([&] { *out = new ilwe_recovery{run_attack_on_gram(gram->value, method)}; });
}

void ilwe_gram_free(ilwe_gram* gram) { delete gram; }

ilwe_status ilwe_evaluate(const int64_t* s_tilde, const int64_t* s_true, size_t len, ilwe_eval* out) {
  if (const auto s = require(s_tilde && s_true && out && len > 0, "ilwe_evaluate: null or empty argument"))
    return s;
  return guarded([&] {
    const ilwe::AttackReport report = ilwe::evaluate(std::span<const std::int64_t>(s_tilde, len),
                                                     std::span<const std::int64_t>(s_true, len));
    out->l1 = report.l1_distance;
    out->linf = report.linf_distance;
    out->weight_diff = report.weight_diff;
    out->discarded = report.discarded ? 1 : 0;
  });
}

ilwe_status ilwe_sample_complexity(double tau_a, double sigma_a, double tau_e, int32_t k, double eta_conf,
                                   double log_base, double* bound_subgaussian, double* bound_noise,
                                   double* required) {
  return guarded([&] {
    const double sub = ilwe::sample_complexity_bound(tau_a, sigma_a, 0.0, k, eta_conf, log_base);
    const double noise = ilwe::sample_complexity_bound(0.0, sigma_a, tau_e, k, eta_conf, log_base);
    if (bound_subgaussian) *bound_subgaussian = sub;
    if (bound_noise) *bound_noise = noise;
    if (required) *required = std::max(sub, noise);
  });
}

ilwe_status ilwe_experiment_run(const char* config_path, const char* report_path, int32_t format,
                                int32_t override_seed, uint64_t seed, ilwe_progress_fn progress, void* user) {
  if (const auto s = require(config_path && report_path, "ilwe_experiment_run: null argument")) return s;
  if (const auto s = require(format == ILWE_FORMAT_CSV || format == ILWE_FORMAT_TABLE,
                             "ilwe_experiment_run: unknown report format"))
    return s;
  return guarded([&] {
    ilwe::ExperimentConfig config = ilwe::parse_config_file(config_path);
    if (override_seed) config.seed = seed;
    ilwe::ProgressFn cb;
    if (progress) cb = [&](const std::string& line) { progress(line.c_str(), user); };
    const auto rows = ilwe::run_experiment(config, cb);
    const std::string report = ilwe::emit_report(
        rows, format == ILWE_FORMAT_CSV ? ilwe::ReportFormat::Csv : ilwe::ReportFormat::PrettyTable);
    std::ofstream os(report_path);
    if (!os) throw std::runtime_error(std::string("ilwe_experiment_run: cannot open ") + report_path);
    os << report;
    if (!os) throw std::runtime_error(std::string("ilwe_experiment_run: write failed for ") + report_path);
  });
}

}  // extern "C"
