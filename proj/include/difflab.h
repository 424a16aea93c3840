/* difflab — C API for the diffusion-coefficient laboratory.
 *
 * Every entry point returns a dfl_status; on failure dfl_last_error() holds
 * a message for the calling thread. Handles are opaque and must be released
 * with their destroy function.
 */
#ifndef DIFFLAB_H
#define DIFFLAB_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dfl_status {
  DFL_OK = 0,
  DFL_ERR_INVALID_ARG = 1,
  DFL_ERR_NUMERIC = 2,
  DFL_ERR_IO = 3,
  DFL_ERR_CONFIG = 4,
  DFL_ERR_DIVERGED = 5,
  DFL_ERR_INTERNAL = 6
} dfl_status;

const char* dfl_version(void);
/* thread-local message of the most recent failure in this thread */
const char* dfl_last_error(void);

/* ---- schedule ------------------------------------------------------- */

typedef struct dfl_schedule dfl_schedule;
dfl_status dfl_schedule_create(double beta0, double beta1, double T, dfl_schedule** out);
void dfl_schedule_destroy(dfl_schedule* s);
dfl_status dfl_schedule_g(const dfl_schedule* s, double t, double* out);
dfl_status dfl_schedule_varpi(const dfl_schedule* s, double t, double* out);
dfl_status dfl_schedule_mean_scale(const dfl_schedule* s, double t, double* out);
/* duration of the unit-g clock: integral of g^2 over [0, T] */
dfl_status dfl_schedule_unit_time(const dfl_schedule* s, double* theta);

/* ---- 1D Gaussian oracle --------------------------------------------- */

/* error_case: 1 full, 2 negated, 3 sinusoidal, 4 t < cT, 5 t > cT.
 * mask_c <= 0 keeps the case default (0.95 / 0.99). */
typedef struct dfl_oracle_spec {
  double sigma0;
  double T;
  double hsq;
  int error_case;
  double mask_c;
  double epsilon;
} dfl_oracle_spec;

dfl_status dfl_oracle_var(const dfl_oracle_spec* spec, double* var_out);
dfl_status dfl_oracle_kl(const dfl_oracle_spec* spec, double* kl_out);
/* weighted through-origin fit of KL on eps^2 over eps_grid (epsilon ignored) */
dfl_status dfl_oracle_leading_l(const dfl_oracle_spec* spec, const double* eps_grid,
                                size_t n_eps, double* l_out, double* r2_out);

/* ---- Fokker-Planck leading order ------------------------------------ */

typedef struct dfl_fp_spec {
  double sigma0;
  double T;
  double hsq;
  int error_case;
  double mask_c;
  int grid_n;
  double grid_r;
  double dt; /* 0 = stability/accuracy rule */
} dfl_fp_spec;

dfl_status dfl_fp_leading_l(const dfl_fp_spec* spec, double* l_out, double* tail_mass_out,
                            double* mass_defect_out);

/* ---- sample-set metrics --------------------------------------------- */

/* CSV sample files (header x0,x1,...); file_a is the reference side */
dfl_status dfl_metrics_csv(const char* file_a, const char* file_b, int bins, double* kl_out,
                           double* js_out, double* w1_out);

/* ---- config-driven experiments --------------------------------------- */

/* Runs the experiment in a config file; writes artifacts and manifest.json.
 * out_dir NULL = runs/<stamp>-<hash>. dir_out (optional) receives the
 * artifacts directory; free with dfl_string_free. */
dfl_status dfl_run_config_file(const char* config_path, const char* out_dir, char** dir_out);
dfl_status dfl_run_config_text(const char* config_text, const char* out_dir, char** dir_out);
void dfl_string_free(char* s);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* DIFFLAB_H */
