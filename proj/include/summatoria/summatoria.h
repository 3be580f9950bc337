/*
 * summatoria C API.
 *
 * Every function returns an smt_status; on failure a message describing the
 * error is available from smt_last_error() on the calling thread. Handles are
 * opaque and owned by the caller, who releases them with the matching
 * *_destroy function. Handles are immutable after creation and may be read
 * from several threads at once; a context must not be modified while another
 * thread uses it.
 */
#ifndef SUMMATORIA_H
#define SUMMATORIA_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  ifdef SMT_BUILDING_LIBRARY
#    define SMT_API __declspec(dllexport)
#  else
#    define SMT_API __declspec(dllimport)
#  endif
#else
#  define SMT_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum smt_status {
  SMT_OK = 0,
  SMT_ERR_DOMAIN = 1,
  SMT_ERR_RESOURCE = 2,
  SMT_ERR_INTEGRITY = 3,
  SMT_ERR_CORRUPTION = 4,
  SMT_ERR_IO = 5,
  SMT_ERR_INVALID_ARGUMENT = 6, /* null handle or output pointer */
  SMT_ERR_INTERNAL = 7
} smt_status;

/* Values match the kind tag of the cache file format. */
typedef enum smt_kind {
  SMT_KIND_MOBIUS = 0,
  SMT_KIND_LIOUVILLE = 1,
  SMT_KIND_PRIME_INDICATOR = 2,
  SMT_KIND_PSI_TERM = 3,
  SMT_KIND_THETA_TERM = 4
} smt_kind;

typedef struct smt_context smt_context;
typedef struct smt_table smt_table;
typedef struct smt_series smt_series;
typedef struct smt_verify_report smt_verify_report;

SMT_API const char* smt_version(void);
SMT_API const char* smt_last_error(void);
SMT_API const char* smt_status_name(smt_status status);

/* "mobius", "liouville", "prime-indicator", "psi", "theta". */
SMT_API smt_status smt_kind_from_name(const char* name, smt_kind* out);
SMT_API const char* smt_kind_name(smt_kind kind);

/* ---- context: limits, parallelism, cache directory, warnings ---- */

typedef void (*smt_warning_fn)(const char* message, void* user_data);

SMT_API smt_status smt_context_create(smt_context** out);
SMT_API void smt_context_destroy(smt_context* ctx);
SMT_API smt_status smt_context_set_threads(smt_context* ctx, unsigned threads);
SMT_API smt_status smt_context_set_max_segment(smt_context* ctx, uint64_t entries);
SMT_API smt_status smt_context_set_max_limit(smt_context* ctx, uint64_t limit);
/* NULL or "" disables caching. */
SMT_API smt_status smt_context_set_cache_dir(smt_context* ctx, const char* dir);
SMT_API smt_status smt_context_set_warning_handler(smt_context* ctx, smt_warning_fn fn,
                                                   void* user_data);

/* ---- arithmetic kernels ---- */

SMT_API smt_status smt_table_sieve(const smt_context* ctx, smt_kind kind, uint64_t lo,
                                   uint64_t hi, smt_table** out);
/* Like smt_table_sieve, but served from / stored to the context's cache
 * directory when one is set. Cache problems are reported as warnings. */
SMT_API smt_status smt_table_sieve_cached(const smt_context* ctx, smt_kind kind, uint64_t lo,
                                          uint64_t hi, smt_table** out);
SMT_API void smt_table_destroy(smt_table* table);
SMT_API smt_status smt_table_info(const smt_table* table, smt_kind* kind, uint64_t* lo,
                                  uint64_t* hi);
/* Copies f(k) for k = from .. from + count - 1. */
SMT_API smt_status smt_table_values(const smt_table* table, uint64_t from, size_t count,
                                    double* out);

typedef struct smt_prime_power {
  uint64_t prime;
  uint32_t multiplicity;
} smt_prime_power;

/* Trial division. *count receives the number of distinct primes even when it
 * exceeds cap (then SMT_ERR_RESOURCE is returned). */
SMT_API smt_status smt_factor(uint64_t n, smt_prime_power* out, size_t cap, size_t* count);
SMT_API smt_status smt_pointwise(smt_kind kind, uint64_t n, double* out);

/* ---- summatory series ---- */

typedef enum smt_ladder_mode {
  SMT_LADDER_GEOMETRIC = 0, /* ceil(2^(j/2)) */
  SMT_LADDER_RATIO = 1,     /* ceil(ratio^j) */
  SMT_LADDER_EVERY = 2,     /* every n */
  SMT_LADDER_EXPLICIT = 3
} smt_ladder_mode;

typedef struct smt_ladder {
  smt_ladder_mode mode;
  double ratio;
  const uint64_t* points;
  size_t point_count;
} smt_ladder;

typedef struct smt_value {
  int is_integer;
  int64_t integer;
  double real; /* also set when is_integer */
} smt_value;

typedef struct smt_checkpoint {
  uint64_t n;
  smt_value sum;
} smt_checkpoint;

/* Ascending checkpoint positions for limit: writes up to cap values, sets
 * *count to the full number (SMT_ERR_RESOURCE when cap is too small). */
SMT_API smt_status smt_ladder_points(const smt_ladder* ladder, uint64_t limit, uint64_t* out,
                                     size_t cap, size_t* count);

/* ladder may be NULL for the geometric default. */
SMT_API smt_status smt_series_accumulate(const smt_context* ctx, smt_kind kind, uint64_t limit,
                                         const smt_ladder* ladder, smt_series** out);
/* Synthetic series from explicit checkpoints; the last n is the limit.
 * square_sums may be NULL. */
SMT_API smt_status smt_series_from_integers(const uint64_t* n, const int64_t* sums,
                                            const int64_t* square_sums, size_t count,
                                            smt_series** out);
SMT_API smt_status smt_series_from_reals(const uint64_t* n, const double* sums, size_t count,
                                         smt_series** out);
SMT_API void smt_series_destroy(smt_series* series);
/* has_kind is 0 for synthetic series (kind is then left untouched). Any
 * output pointer may be NULL. */
SMT_API smt_status smt_series_info(const smt_series* series, int* has_kind, smt_kind* kind,
                                   uint64_t* limit, size_t* checkpoint_count, int* is_integer);
SMT_API smt_status smt_series_checkpoint(const smt_series* series, size_t index,
                                         smt_checkpoint* out);
SMT_API smt_status smt_series_value_at(const smt_context* ctx, const smt_series* series,
                                       uint64_t n, smt_value* out);

/* ---- moment statistics (integer-valued series) ---- */

typedef struct smt_moment_report {
  uint64_t n;
  int64_t sum;        /* S(n) */
  int64_t square_sum; /* Q(n) */
  double grid_ratio;  /* S(n)^2 / n^2 */
  int has_covariance_gap; /* 0 when n < 2 */
  double covariance_gap;
  int64_t f_squared;
  int64_t diag_sum;
  int64_t cross_sum;
} smt_moment_report;

SMT_API smt_status smt_moment_report_at(const smt_context* ctx, const smt_series* series,
                                        uint64_t n, smt_moment_report* out);
SMT_API smt_status smt_grid_sum_ratio(const smt_context* ctx, const smt_series* series,
                                      uint64_t n, double* out);
SMT_API smt_status smt_covariance_gap(const smt_context* ctx, const smt_series* series,
                                      uint64_t n, double* out);
/* Reduced fraction (S^2 - nQ) / (n^2 (n-1)); SMT_ERR_RESOURCE if it does
 * not fit in 64 bits. */
SMT_API smt_status smt_covariance_gap_exact(int64_t sum, int64_t square_sum, uint64_t n,
                                            int64_t* numerator, int64_t* denominator);

typedef struct smt_parity_counts {
  uint64_t n;
  uint64_t plus;
  uint64_t minus;
  uint64_t zero;
} smt_parity_counts;

typedef struct smt_pair_counts {
  uint64_t plus_plus;
  uint64_t minus_minus;
  uint64_t plus_minus;
  uint64_t minus_plus;
} smt_pair_counts;

SMT_API smt_status smt_parity_counts_of(const smt_table* table, uint64_t n,
                                        smt_parity_counts* out);
SMT_API smt_status smt_pair_product_counts(const smt_parity_counts* counts, smt_pair_counts* out);

typedef struct smt_lag_covariance {
  uint64_t lag;
  uint64_t lo;
  uint64_t hi;
  uint64_t pairs;
  double cov;
  double corr;
} smt_lag_covariance;

SMT_API smt_status smt_lag_covariance_of(const smt_table* table, uint64_t lag, uint64_t lo,
                                         uint64_t hi, smt_lag_covariance* out);

typedef struct smt_adjacent_joint {
  uint64_t pairs;
  uint64_t first_ones;
  uint64_t second_ones;
  uint64_t joint_ones;
  double joint;
  double product;
} smt_adjacent_joint;

SMT_API smt_status smt_prime_adjacent_joint(const smt_context* ctx, uint64_t N,
                                            smt_adjacent_joint* out);

/* ---- scaling analysis ---- */

typedef struct smt_sample {
  uint64_t n;
  double magnitude;
} smt_sample;

typedef struct smt_exponent_fit {
  double alpha;
  double log_c;
  double r_squared;
  size_t samples_used;
  size_t samples_dropped;
  double residual_max;
} smt_exponent_fit;

SMT_API smt_status smt_fit_exponent(const smt_sample* samples, size_t count,
                                    smt_exponent_fit* out);

typedef enum smt_phi_function {
  SMT_PHI_CONSTANT = 0,
  SMT_PHI_LOG = 1,
  SMT_PHI_LOG_SQUARED = 2,
  SMT_PHI_ITERATED_LOG = 3,
  SMT_PHI_POWER = 4
} smt_phi_function;

typedef struct smt_phi {
  smt_phi_function function;
  double parameter; /* constant value or power exponent */
  double epsilon;   /* exponent for smt_slow_growth_check */
} smt_phi;

/* "log", "log2", "loglog", "const", "const:<c>", "pow:<e>"; epsilon = 0.5. */
SMT_API smt_status smt_phi_parse(const char* name, smt_phi* out);
/* Writes the canonical name, truncated to cap - 1 characters. */
SMT_API smt_status smt_phi_name(const smt_phi* phi, char* buf, size_t cap);
SMT_API smt_status smt_phi_eval(const smt_phi* phi, double n, double* out);
SMT_API smt_status smt_slow_growth_check(const smt_phi* phi, uint64_t lo, uint64_t hi,
                                         int* holds);

/* Envelope and coverage act on F(n) = S(n) - m n. */
SMT_API smt_status smt_normalized_envelope(const smt_series* series, double m,
                                           double* max_ratio, uint64_t* argmax_n);

typedef struct smt_coverage {
  uint64_t satisfied;
  uint64_t total;
  double fraction;
} smt_coverage;

SMT_API smt_status smt_bound_coverage(const smt_series* series, double m, const smt_phi* phi,
                                      uint64_t from_n, smt_coverage* out);

/* ---- cache files ---- */

typedef enum smt_payload { SMT_PAYLOAD_TABLE = 0, SMT_PAYLOAD_SERIES = 1 } smt_payload;

SMT_API smt_status smt_cache_save_table(const char* path, const smt_table* table);
SMT_API smt_status smt_cache_save_series(const char* path, const smt_series* series);
/* Exactly one of *table / *series is set, per *payload. */
SMT_API smt_status smt_cache_load(const char* path, smt_payload* payload, smt_table** table,
                                  smt_series** series);

/* ---- verification suite ---- */

typedef enum smt_criterion_status {
  SMT_CRITERION_PASS = 0,
  SMT_CRITERION_FAIL = 1,
  SMT_CRITERION_SKIP = 2
} smt_criterion_status;

typedef struct smt_criterion {
  int id;
  const char* name;      /* valid while the report lives */
  smt_criterion_status status;
  const char* measured;
  const char* threshold;
  double seconds;
} smt_criterion;

SMT_API smt_status smt_verify_run(const smt_context* ctx, uint64_t limit,
                                  smt_verify_report** out);
SMT_API void smt_verify_report_destroy(smt_verify_report* report);
SMT_API size_t smt_verify_report_count(const smt_verify_report* report);
SMT_API smt_status smt_verify_report_criterion(const smt_verify_report* report, size_t index,
                                               smt_criterion* out);
/* 1 when no criterion failed. */
SMT_API int smt_verify_report_passed(const smt_verify_report* report);
SMT_API double smt_verify_report_seconds(const smt_verify_report* report);

#ifdef __cplusplus
}
#endif

#endif /* SUMMATORIA_H */
