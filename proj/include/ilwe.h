#ifndef ILWE_H
#define ILWE_H

/*
 * C interface to the integer-LWE key-recovery workbench.
 *
 * Objects are opaque handles created and destroyed by the library; every
 * fallible call returns an ilwe_status, with a human-readable detail string
 * available from ilwe_last_error() on the failing thread. All randomness is
 * counter-based from the explicit seed arguments: equal inputs give
 * bit-identical outputs on every platform.
 */

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ilwe_status {
  ILWE_OK = 0,
  ILWE_ERR_INVALID_ARGUMENT = 1,
  ILWE_ERR_PARSE = 2,
  ILWE_ERR_IO = 3,
  ILWE_ERR_OVERFLOW = 4,
  ILWE_ERR_SINGULAR = 5,        /* normal-equation system singular or indefinite */
  ILWE_ERR_DEGENERATE = 6,      /* SVD ratio step has no last component */
  ILWE_ERR_NO_CONVERGENCE = 7,  /* eigensolver sweep budget exhausted */
  ILWE_ERR_ATTEMPT_BUDGET = 8,  /* rejection loop exceeded its candidate budget */
  ILWE_ERR_TUNE_FAILED = 9,     /* no beta reaches the rejection window */
  ILWE_ERR_INTERNAL = 10
} ilwe_status;

/* Stable name for a status, e.g. "SingularOrIndefinite". */
const char* ilwe_status_name(ilwe_status status);

/* Detail message for the most recent failure on the calling thread. */
const char* ilwe_last_error(void);

/* Frees buffers returned through out-pointers (secrets etc.). */
void ilwe_free(void* p);

typedef enum ilwe_y_dist {
  ILWE_Y_UNIFORM = 0,         /* coefficients uniform on [-gamma, gamma] */
  ILWE_Y_UNIFORM_SHIFTED = 1, /* coefficients uniform on [-gamma+1, gamma] */
  ILWE_Y_SUBGAUSSIAN = 2      /* signed-rotation sum with coefficient bound alpha */
} ilwe_y_dist;

typedef enum ilwe_secret_mode {
  ILWE_SECRET_FIXED_WEIGHT = 0, /* weight rho per component, nonzeros in +-{1..eta} */
  ILWE_SECRET_UNIFORM_BOX = 1   /* every coefficient uniform on [-eta, eta] */
} ilwe_secret_mode;

typedef enum ilwe_resample {
  ILWE_RESAMPLE_BOTH = 0,  /* redraw y and c after a rejection */
  ILWE_RESAMPLE_C_ONLY = 1 /* keep y, redraw only c */
} ilwe_resample;

typedef enum ilwe_method { ILWE_METHOD_LSM = 0, ILWE_METHOD_SVD = 1 } ilwe_method;

typedef enum ilwe_report_format { ILWE_FORMAT_CSV = 0, ILWE_FORMAT_TABLE = 1 } ilwe_report_format;

typedef struct ilwe_sim_params {
  int32_t n;     /* ring degree, >= 1 */
  int32_t k;     /* module rank, >= 1 */
  int32_t rho;   /* Hamming weight of c, in [0, n] */
  int64_t gamma; /* mask bound */
  int64_t beta;  /* rejection offset; acceptance needs ||z||_inf < gamma - beta */
  int64_t eta;   /* secret coefficient bound */
  int64_t alpha; /* subgaussian mask coefficient bound */
  int32_t y_dist;
  int32_t secret_mode;
  int32_t resample;
} ilwe_sim_params;

typedef struct ilwe_instance ilwe_instance; /* (A, b) over the integers */
typedef struct ilwe_samples ilwe_samples;   /* batch of accepted (z, c) records */
typedef struct ilwe_gram ilwe_gram;         /* running sum of D^T D */
typedef struct ilwe_recovery ilwe_recovery; /* recovered secret + raw estimator */

/* ---- instances ------------------------------------------------------- */

ilwe_status ilwe_instance_load(const char* path, ilwe_instance** out);
ilwe_status ilwe_instance_save(const ilwe_instance* inst, const char* path);

/* b = A s + e with A uniform on [-alpha_a, alpha_a] and e uniform on
 * [-alpha_e, alpha_e] (alpha_e = 0 gives a noiseless instance). */
ilwe_status ilwe_instance_synth(const int64_t* secret, size_t k, int64_t alpha_a, int64_t alpha_e, uint64_t m,
                                uint64_t seed, ilwe_instance** out);

size_t ilwe_instance_rows(const ilwe_instance* inst);
size_t ilwe_instance_cols(const ilwe_instance* inst);
void ilwe_instance_free(ilwe_instance* inst);

/* ---- signature samples ------------------------------------------------ */

ilwe_status ilwe_samples_load(const char* path, int32_t n, int32_t k, ilwe_samples** out);
ilwe_status ilwe_samples_save(const ilwe_samples* samples, const char* path);
size_t ilwe_samples_count(const ilwe_samples* samples);
double ilwe_samples_rejection_rate(const ilwe_samples* samples);
void ilwe_samples_free(ilwe_samples* samples);

/* Draws a secret and m accepted samples from the rejection loop. Any of the
 * out-pointers may be NULL. *secret_out has n*k entries; free with
 * ilwe_free. */
ilwe_status ilwe_simulate(const ilwe_sim_params* params, uint64_t m, uint64_t seed, ilwe_samples** samples_out,
                          int64_t** secret_out, double* rejection_rate_out);

/* Whitespace-separated integer text files for secrets. */
ilwe_status ilwe_secret_save(const int64_t* secret, size_t len, const char* path);
ilwe_status ilwe_secret_load(const char* path, int64_t** out, size_t* len_out);

/* ---- attacks ----------------------------------------------------------- */

/* Direct attacks on an explicit instance. */
ilwe_status ilwe_attack_instance(const ilwe_instance* inst, int32_t method, ilwe_recovery** out);

/* Streaming attacks: samples are folded into a Gram accumulator first. */
ilwe_status ilwe_attack_samples(const ilwe_samples* samples, int32_t method, ilwe_recovery** out);

size_t ilwe_recovery_dim(const ilwe_recovery* rec);
ilwe_status ilwe_recovery_secret(const ilwe_recovery* rec, int64_t* dst);  /* dim entries */
ilwe_status ilwe_recovery_estimate(const ilwe_recovery* rec, double* dst); /* pre-rounding */
void ilwe_recovery_free(ilwe_recovery* rec);

/* ---- Gram accumulator -------------------------------------------------- */

ilwe_status ilwe_gram_create(int32_t n, int32_t k, ilwe_gram** out);
ilwe_status ilwe_gram_absorb(ilwe_gram* gram, const ilwe_samples* samples);
ilwe_status ilwe_gram_merge(ilwe_gram* dst, const ilwe_gram* src);
ilwe_status ilwe_gram_save(const ilwe_gram* gram, const char* path);
ilwe_status ilwe_gram_load(const char* path, ilwe_gram** out);
uint64_t ilwe_gram_count(const ilwe_gram* gram);
size_t ilwe_gram_dim(const ilwe_gram* gram);
ilwe_status ilwe_gram_attack(const ilwe_gram* gram, int32_t method, ilwe_recovery** out);
void ilwe_gram_free(ilwe_gram* gram);

/* ---- scoring and bounds ------------------------------------------------ */

typedef struct ilwe_eval {
  int64_t l1;
  int64_t linf;
  int64_t weight_diff;
  int32_t discarded; /* nonzero when s_tilde is identically zero */
} ilwe_eval;

ilwe_status ilwe_evaluate(const int64_t* s_tilde, const int64_t* s_true, size_t len, ilwe_eval* out);

/* Sufficient sample count for exact least-squares recovery. log_base <= 0
 * selects the natural logarithm. */
ilwe_status ilwe_sample_complexity(double tau_a, double sigma_a, double tau_e, int32_t k, double eta_conf,
                                   double log_base, double* bound_subgaussian, double* bound_noise,
                                   double* required);

/* ---- experiments ------------------------------------------------------- */

typedef void (*ilwe_progress_fn)(const char* line, void* user);

/* Runs the experiment described by a "key = value" config file and writes
 * the report to report_path. When override_seed is nonzero, seed replaces
 * the config's seed. progress (if non-NULL) receives one summary line per
 * parameter row and sample count. */
ilwe_status ilwe_experiment_run(const char* config_path, const char* report_path, int32_t format,
                                int32_t override_seed, uint64_t seed, ilwe_progress_fn progress, void* user);

#ifdef __cplusplus
}
#endif

#endif /* ILWE_H */
