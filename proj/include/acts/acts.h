/*
 * C interface to the action-centered Thompson sampling library.
 *
 * Every function returns an acts_status. On failure a one-line description
 * is available from acts_last_error() until the next call on the same
 * thread. Handles are opaque and owned by the caller; release them with the
 * matching *_free function. A handle may be moved between threads but must
 * not be used from two threads at once.
 */
#ifndef ACTS_ACTS_H
#define ACTS_ACTS_H

#include <stddef.h>
#include <stdint.h>

#if defined(ACTS_BUILDING_LIBRARY)
#define ACTS_API __attribute__((visibility("default")))
#else
#define ACTS_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum acts_status {
  ACTS_OK = 0,
  ACTS_ERR_INVALID_ARGUMENT = 1,
  ACTS_ERR_PARSE = 2,
  ACTS_ERR_IO = 3,
  ACTS_ERR_STATE = 4,
  ACTS_ERR_BUFFER_TOO_SMALL = 5,
  ACTS_ERR_INTERNAL = 6
} acts_status;

typedef struct acts_posterior acts_posterior;
typedef struct acts_bandit acts_bandit;
typedef struct acts_environment acts_environment;

typedef struct acts_decision {
  size_t candidate_action; /* 1..N */
  double pi;               /* probability of the nonzero action */
  size_t realized_action;  /* 0 or candidate_action */
} acts_decision;

typedef struct acts_oracle {
  size_t a_star;
  double pi_star;
  size_t best_nonzero;
  double expected_differential;
} acts_oracle;

ACTS_API const char* acts_version(void);
ACTS_API const char* acts_last_error(void);
/* Stable lower-case name for a status ("ok", "invalid_argument", ...). */
ACTS_API const char* acts_status_name(acts_status status);

/* Text outputs use a caller buffer. *needed always receives the full length
 * including the terminating NUL; ACTS_ERR_BUFFER_TOO_SMALL is returned when
 * cap < *needed. buf may be NULL when cap is 0. */

/* ---- posterior ---------------------------------------------------------- */

ACTS_API acts_status acts_posterior_new(size_t dim, double v, acts_posterior** out);
ACTS_API void acts_posterior_free(acts_posterior* p);
ACTS_API size_t acts_posterior_dim(const acts_posterior* p);
ACTS_API acts_status acts_posterior_update(acts_posterior* p, const double* s, size_t n,
                                           double pi, int action_nonzero, double reward);
ACTS_API acts_status acts_posterior_update_unweighted(acts_posterior* p, const double* x,
                                                      size_t n, double reward);
ACTS_API acts_status acts_posterior_theta_hat(const acts_posterior* p, double* out, size_t n);
/* Row-major d*d copy of B. */
ACTS_API acts_status acts_posterior_B(const acts_posterior* p, double* out, size_t n);
ACTS_API acts_status acts_posterior_sample(const acts_posterior* p, uint64_t seed,
                                           double* out, size_t n);
ACTS_API acts_status acts_posterior_z_width(const acts_posterior* p, const double* s,
                                            size_t n, double* out);
ACTS_API acts_status acts_posterior_prob_positive(const acts_posterior* p, const double* s,
                                                  size_t n, double* out);
ACTS_API acts_status acts_posterior_snapshot(const acts_posterior* p, char* buf, size_t cap,
                                             size_t* needed);
ACTS_API acts_status acts_posterior_restore(const char* text, acts_posterior** out);

/* ---- bandit ------------------------------------------------------------- */

/* config_json uses the experiment config schema; only algorithm,
 * benchmark_baseline, environment (feature map part), bounds and v are
 * consulted. The bandit owns an RNG seeded with `seed`. */
ACTS_API acts_status acts_bandit_new(const char* config_json, uint64_t seed,
                                     acts_bandit** out);
ACTS_API void acts_bandit_free(acts_bandit* b);
ACTS_API acts_status acts_bandit_decide(acts_bandit* b, const double* context, size_t n,
                                        acts_decision* out);
/* decision must come from the immediately preceding decide on this context. */
ACTS_API acts_status acts_bandit_observe(acts_bandit* b, const acts_decision* decision,
                                         const double* context, size_t n, double reward);
ACTS_API acts_status acts_bandit_snapshot(const acts_bandit* b, char* buf, size_t cap,
                                          size_t* needed);

/* ---- environment -------------------------------------------------------- */

ACTS_API acts_status acts_environment_new(const char* config_json, uint64_t seed,
                                          acts_environment** out);
ACTS_API void acts_environment_free(acts_environment* e);
ACTS_API size_t acts_environment_context_dim(const acts_environment* e);
/* Advances the baseline process (nonstationary only) and draws a context. */
ACTS_API acts_status acts_environment_step(acts_environment* e, double* context, size_t n);
ACTS_API acts_status acts_environment_reward(acts_environment* e, const double* context,
                                             size_t n, size_t action, double* out);
ACTS_API acts_status acts_environment_oracle(const acts_environment* e, const double* context,
                                             size_t n, double pi_min, double pi_max,
                                             acts_oracle* out);
ACTS_API acts_status acts_environment_regret(const acts_environment* e, const acts_oracle* oracle,
                                             const acts_decision* decision,
                                             const double* context, size_t n, double* out);

/* ---- file-level commands (JSON summary returned through buf) ------------ */

ACTS_API acts_status acts_simulate(const char* config_path, const char* out_dir, char* buf,
                                   size_t cap, size_t* needed);
ACTS_API acts_status acts_replay(const char* log_path, const char* config_path,
                                 const char* out_dir, char* buf, size_t cap, size_t* needed);
ACTS_API acts_status acts_generate_log(const char* config_path, double logging_pi,
                                       uint64_t horizon, const char* out_path, char* buf,
                                       size_t cap, size_t* needed);
ACTS_API acts_status acts_diagnostics(const char* trace_path, size_t dim, char* buf,
                                      size_t cap, size_t* needed);

/* ---- theory helpers ----------------------------------------------------- */

ACTS_API acts_status acts_theory_v(double R, double epsilon, size_t d, double delta,
                                   double* out);
ACTS_API acts_status acts_theory_ell(double R, double T, size_t d, double delta, double* out);
ACTS_API double acts_normal_cdf(double x);

#ifdef __cplusplus
}
#endif

#endif /* ACTS_ACTS_H */
