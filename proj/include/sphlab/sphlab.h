/* sphlab: arithmetic spherical averages and maximal operators on Z^d.
 *
 * C interface over the core library. All functions returning int give a
 * status code (0 = success); on failure sphlab_last_error() describes the
 * problem for the calling thread. Strings returned through char** are
 * heap-allocated and must be released with sphlab_string_free().
 */
#ifndef SPHLAB_H
#define SPHLAB_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define SPHLAB_API __declspec(dllexport)
#else
#define SPHLAB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

enum sphlab_status {
  SPHLAB_OK = 0,
  SPHLAB_INVALID_ARGUMENT = 1,
  SPHLAB_CAP_EXCEEDED = 2,
  SPHLAB_BUDGET_EXCEEDED = 3,
  SPHLAB_NOT_PRIME = 4,
  SPHLAB_EMPTY_SEQUENCE = 5,
  SPHLAB_DIMENSION_TOO_SMALL = 6,
  SPHLAB_INVALID_EXPONENT = 7,
  SPHLAB_INSUFFICIENT_DATA = 8,
  SPHLAB_OVERFLOW = 9,
  SPHLAB_PARSE_ERROR = 10,
  SPHLAB_IO_ERROR = 11,
  SPHLAB_INTERNAL = 12
};

/* Resource limits. threads only affects scheduling, never results. */
typedef struct sphlab_caps {
  uint64_t max_sphere_points;
  uint64_t max_torus_cells;
  uint64_t max_sieve_work;
  uint32_t threads;
} sphlab_caps;

SPHLAB_API const char* sphlab_version(void);
SPHLAB_API const char* sphlab_status_name(int status);
/* Message from the most recent failing call on this thread ("" if none). */
SPHLAB_API const char* sphlab_last_error(void);
SPHLAB_API void sphlab_string_free(char* s);
SPHLAB_API void sphlab_caps_init(sphlab_caps* caps);

/* ---- lattice sphere counting ---------------------------------------- */

/* r_d(lambda) as a decimal string (values can exceed 64 bits). */
SPHLAB_API int sphlab_count_reps(int d, int64_t lambda, const sphlab_caps* caps, char** count_out);
/* Convenience variant; fails with SPHLAB_OVERFLOW if the count needs >64 bits. */
SPHLAB_API int sphlab_count_reps_u64(int d, int64_t lambda, const sphlab_caps* caps,
                                     uint64_t* count_out);
/* {"d", "max_lambda", "counts": [...]} for lambda = 0..max_lambda. */
SPHLAB_API int sphlab_rep_table_json(int d, int64_t max_lambda, const sphlab_caps* caps,
                                     char** json_out);
/* {"d", "lambda", "count", "points": [[x1..xd], ...]} in lexicographic order. */
SPHLAB_API int sphlab_enumerate_json(int d, int64_t lambda, const sphlab_caps* caps,
                                     char** json_out);
/* Residue class decomposition of the sphere mod `modulus`. */
SPHLAB_API int sphlab_residue_counts_json(int d, int64_t lambda, int64_t modulus,
                                          const sphlab_caps* caps, char** json_out);

/* ---- sparse grid functions ------------------------------------------ */

typedef struct sphlab_grid sphlab_grid;

/* Grid file format: {"d": n, "records": [[x1..xd, value], ...]}; duplicate
 * points are summed, zero values dropped. */
SPHLAB_API int sphlab_grid_from_json(const char* json, sphlab_grid** grid_out);
/* coords is row-major n x d; duplicates are summed. */
SPHLAB_API int sphlab_grid_from_records(int d, size_t n, const int64_t* coords,
                                        const double* values, sphlab_grid** grid_out);
SPHLAB_API int sphlab_grid_delta(int d, sphlab_grid** grid_out);
SPHLAB_API void sphlab_grid_free(sphlab_grid* g);
SPHLAB_API int sphlab_grid_dimension(const sphlab_grid* g);
SPHLAB_API int64_t sphlab_grid_support_size(const sphlab_grid* g);
SPHLAB_API int sphlab_grid_value_at(const sphlab_grid* g, const int64_t* point, double* value_out);
SPHLAB_API int sphlab_grid_to_json(const sphlab_grid* g, char** json_out);

/* Spherical average of radius-squared lambda; requires dimension >= 4. */
SPHLAB_API int sphlab_grid_average(const sphlab_grid* g, int64_t lambda, const sphlab_caps* caps,
                                   sphlab_grid** grid_out);
/* Pointwise max of |averages| over a strictly increasing radius list. */
SPHLAB_API int sphlab_grid_maximal(const sphlab_grid* g, size_t n, const int64_t* lambdas,
                                   const sphlab_caps* caps, sphlab_grid** grid_out);
/* p >= 1; pass INFINITY for the sup norm. */
SPHLAB_API int sphlab_grid_lp_norm(const sphlab_grid* g, double p, double* value_out);

/* ---- radius sequences ------------------------------------------------ */

typedef struct sphlab_sequence sphlab_sequence;

/* family_json: {"family": "naturals"|"squares"|"geometric"|"lacunary_random"
 * |"padic_cover", ...params, "seed": n}. */
SPHLAB_API int sphlab_sequence_generate(const char* family_json, sphlab_sequence** seq_out);
SPHLAB_API int sphlab_sequence_from_json(const char* json, sphlab_sequence** seq_out);
/* Text (one integer per line, # comments) or JSON, detected by content. */
SPHLAB_API int sphlab_sequence_from_file(const char* path, sphlab_sequence** seq_out);
SPHLAB_API int sphlab_sequence_to_json(const sphlab_sequence* s, char** json_out);
SPHLAB_API void sphlab_sequence_free(sphlab_sequence* s);
SPHLAB_API int64_t sphlab_sequence_size(const sphlab_sequence* s);
/* Owned by the handle; do not free. NULL for a NULL handle. */
SPHLAB_API const char* sphlab_sequence_name(const sphlab_sequence* s);
/* Copies the first min(n, size) terms into terms_out; fails with
 * SPHLAB_OVERFLOW if a copied term does not fit in int64. */
SPHLAB_API int sphlab_sequence_terms_i64(const sphlab_sequence* s, int64_t* terms_out, size_t n);

/* ---- dimension analysis ---------------------------------------------- */

/* Residue occupancy mod prime^j, j = 1..jmax, with a trailing-window slope
 * fit over `window` scales. */
SPHLAB_API int sphlab_padic_profile_json(const sphlab_sequence* s, int64_t prime, int jmax,
                                         int window, char** json_out);
SPHLAB_API int sphlab_dyadic_profile_json(const sphlab_sequence* s, int window, char** json_out);
/* mode: "declared", "estimated", or "auto" (declared where present, estimated
 * otherwise). primes may be NULL when n_primes is 0. */
SPHLAB_API int sphlab_eta_json(const sphlab_sequence* s, int d, const char* mode,
                               const int64_t* primes, size_t n_primes, int jmax, int window,
                               char** json_out);

/* ---- operator-norm probes -------------------------------------------- */

SPHLAB_API int sphlab_probe_delta_json(int d, const sphlab_sequence* s, double p,
                                       int attempt_direct, const sphlab_caps* caps,
                                       char** json_out);
SPHLAB_API int sphlab_probe_slope_json(int d, const sphlab_sequence* s, int include_identity,
                                       const int64_t* schedule, size_t n_schedule, double p,
                                       const sphlab_caps* caps, char** json_out);
SPHLAB_API int sphlab_probe_padic_json(int d, const sphlab_sequence* s, int64_t prime, int level,
                                       double q, const sphlab_caps* caps, char** json_out);

/* ---- reports ---------------------------------------------------------- */

/* Flattened CSV view of an analysis report envelope. */
SPHLAB_API int sphlab_report_to_csv(const char* envelope_json, char** csv_out);

#ifdef __cplusplus
}
#endif

#endif /* SPHLAB_H */
