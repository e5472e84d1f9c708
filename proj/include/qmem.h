/* C interface to the qmem quantum-memory simulation library.
 *
 * All functions return qmem_status; QMEM_OK means success. On failure an
 * optional error message is written to *errmsg (release it with
 * qmem_string_free). Handles are opaque and must be released with the
 * matching *_free function. All calls are thread-safe; handles are
 * immutable after creation.
 */
#ifndef QMEM_H
#define QMEM_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#ifndef QMEM_API
#if defined(_WIN32)
#define QMEM_API __declspec(dllimport)
#else
#define QMEM_API __attribute__((visibility("default")))
#endif
#endif

typedef enum {
  QMEM_OK = 0,
  QMEM_ERR_INVALID_ARGUMENT = 1,
  QMEM_ERR_NUMERIC = 2,
  QMEM_ERR_BUDGET = 3,
  QMEM_ERR_IO = 4,
  QMEM_ERR_INTERNAL = 5,
} qmem_status;

typedef struct qmem_state qmem_state;
typedef struct qmem_pulse qmem_pulse;

/* Homogeneous-ensemble phase data: cycle phase gamma0 of the n = 1 Fock
 * component, coupling sensitivity mu0, phase-variance factor Gamma and
 * the atom number N. */
typedef struct {
  double gamma0;
  double mu0;
  double Gamma;
  long long ensemble_size;
} qmem_phase_model;

QMEM_API const char* qmem_version(void);
QMEM_API void qmem_string_free(char* s);

/* ---- stored states ---- */
QMEM_API qmem_status qmem_state_coherent(double alpha_re, double alpha_im, qmem_state** out,
                                         char** errmsg);
QMEM_API qmem_status qmem_state_cat(double alpha_re, double alpha_im, double eta, double theta,
                                    qmem_state** out, char** errmsg);
QMEM_API qmem_status qmem_state_uniform(int m_top, qmem_state** out, char** errmsg);
QMEM_API qmem_status qmem_state_fock(int n, qmem_state** out, char** errmsg);
QMEM_API qmem_status qmem_state_from_json(const char* json_text, qmem_state** out, char** errmsg);
QMEM_API qmem_status qmem_state_to_json(const qmem_state* state, char** json_out, char** errmsg);
QMEM_API qmem_status qmem_state_stats(const qmem_state* state, double* mean, double* variance,
                                      char** errmsg);
QMEM_API int qmem_state_n_max(const qmem_state* state);
QMEM_API void qmem_state_free(qmem_state* state);

/* ---- driving pulses ---- */
QMEM_API qmem_status qmem_pulse_gaussian(double xi, double tau_d, int grid_points,
                                         qmem_pulse** out, char** errmsg);
QMEM_API qmem_status qmem_pulse_from_csv(const char* path, qmem_pulse** out, char** errmsg);
/* use_paper_constants != 0 returns the fixed (3.2, 2.7) pair. */
QMEM_API qmem_status qmem_pulse_factors(const qmem_pulse* pulse, int use_paper_constants,
                                        double* kappa_theta, double* zeta_theta,
                                        double* alpha_theta, char** errmsg);
QMEM_API void qmem_pulse_free(qmem_pulse* pulse);

/* ---- fidelities ---- */
QMEM_API qmem_status qmem_fidelity_analytic(const qmem_state* state,
                                            const qmem_phase_model* model, int compensated,
                                            double* out, char** errmsg);
QMEM_API qmem_status qmem_fidelity_lower_bound(double x, double* out, char** errmsg);
QMEM_API qmem_status qmem_fidelity_coherent_closed(double alpha_abs, double phase_error,
                                                   double* out, char** errmsg);

/* ---- config-driven runs (the CLI entry point) ----
 * config_json follows the documented run-config schema; the produced CSV
 * is returned in *csv_out (release with qmem_string_free). */
QMEM_API qmem_status qmem_run_json(const char* config_json, char** csv_out, char** errmsg);
QMEM_API qmem_status qmem_explain_json(const char* config_json, char** json_out, char** errmsg);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* QMEM_H */
