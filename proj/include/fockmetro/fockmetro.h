/*
 * Copyright 2026 The fockmetro Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/*
 * C interface of libfockmetro.
 *
 * Every fallible call returns an fm_status; on failure the thread-local
 * message from fm_last_error_message() describes the cause. Handles are
 * opaque and owned by the caller, who releases them with the matching
 * fm_*_free function. Pointers handed out by accessors stay valid until the
 * owning handle is freed.
 */

#ifndef FOCKMETRO_H_
#define FOCKMETRO_H_

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define FM_API __declspec(dllexport)
#else
#define FM_API __attribute__((visibility("default")))
#endif

typedef enum fm_status {
    FM_OK = 0,
    FM_ERR_INVALID_ARGUMENT = 1,
    FM_ERR_LAYOUT_MISMATCH = 2,
    FM_ERR_TRUNCATION = 3,
    FM_ERR_NUMERICAL = 4,
    FM_ERR_NOT_FOUND = 5,
    FM_ERR_IO = 6,
    FM_ERR_UNSUPPORTED_VERSION = 7,
    FM_ERR_INTERNAL = 99
} fm_status;

typedef enum fm_kind { FM_KIND_JC = 0, FM_KIND_KERR = 1 } fm_kind;
typedef enum fm_measurement_kind { FM_MEASURE_COUNTING = 0, FM_MEASURE_HOMODYNE = 1 } fm_measurement_kind;
typedef enum fm_quadrature_frame { FM_FRAME_REFERENCE_ARM = 0, FM_FRAME_ENCODED = 1 } fm_quadrature_frame;
typedef enum fm_qfi_estimator { FM_QFI_FIDELITY = 0, FM_QFI_VARIANCE = 1 } fm_qfi_estimator;
typedef enum fm_fit_model { FM_FIT_SQRT = 0, FM_FIT_POWERLAW = 1, FM_FIT_LINEAR = 2 } fm_fit_model;

FM_API const char *fm_version(void);
FM_API const char *fm_last_error_message(void);
FM_API const char *fm_status_name(fm_status status);

/* ---- Bounds and defaults ---------------------------------------------- */

typedef struct fm_bounds {
    double n_mean;
    double sql_inv_fi;
    double tfs_inv_fi;
    double hl_inv_fi;
} fm_bounds;

FM_API fm_status fm_compute_bounds(double n_mean, fm_bounds *out);
FM_API fm_status fm_default_cutoff(double n_mean, size_t *out);
FM_API double fm_default_phi(void);
FM_API double fm_default_delta(void);

/* ---- States ------------------------------------------------------------ */

typedef struct fm_state fm_state;

/* |g,g,alpha,alpha> (JC) or |alpha,alpha> (Kerr); cutoff 0 picks the default. */
FM_API fm_status fm_state_initial(fm_kind kind, double n_mean, size_t cutoff, fm_state **out);
/* Continuous evolution for adimensional time; returns a new state. */
FM_API fm_status fm_state_evolve(const fm_state *state, fm_kind kind, double time, fm_state **out);
/* Layered circuit from a flat parameter array (J,D,g per JC layer; J,K per Kerr layer). */
FM_API fm_status fm_state_run_circuit(const fm_state *state, fm_kind kind, const double *params, size_t count,
                                      fm_state **out);
FM_API fm_status fm_state_dim(const fm_state *state, size_t *out);
FM_API fm_status fm_state_norm(const fm_state *state, double *out);
FM_API fm_status fm_state_mean_photons(const fm_state *state, double *out);
FM_API fm_status fm_state_qfi(const fm_state *state, fm_qfi_estimator estimator, double phi, double delta,
                              double *out);
FM_API void fm_state_free(fm_state *state);

typedef struct fm_measurement_model {
    fm_measurement_kind kind;
    int include_emitters;
    double theta;
    fm_quadrature_frame frame;
    /* Quadrature grid; 0 selects the defaults for the state's cutoff. */
    double x_max;
    size_t points;
} fm_measurement_model;

FM_API void fm_measurement_model_default(fm_measurement_model *model);
/* CFI of the encoded state (no pre-measurement circuit). */
FM_API fm_status fm_state_cfi(const fm_state *state, const fm_measurement_model *model, double phi, double *out);

/* ---- Continuous sweeps -------------------------------------------------- */

typedef struct fm_sweep_options {
    size_t cutoff;
    double phi;
    double delta;
    fm_qfi_estimator estimator;
    int counting;
    int homodyne;
    double theta;
    fm_quadrature_frame frame;
    size_t workers;
} fm_sweep_options;

/* Absent CFI columns are NaN. */
typedef struct fm_sweep_row {
    double time;
    double inv_qfi;
    double inv_cfi_counting;
    double inv_cfi_homodyne;
} fm_sweep_row;

typedef struct fm_extremum {
    double time;
    double value;
} fm_extremum;

typedef struct fm_sweep fm_sweep;

FM_API void fm_sweep_options_default(fm_sweep_options *options);
FM_API fm_status fm_default_time_grid(fm_kind kind, double *times, size_t capacity, size_t *count);
FM_API fm_status fm_sweep_run(fm_kind kind, double n_mean, const double *times, size_t count,
                              const fm_sweep_options *options, fm_sweep **out);
FM_API size_t fm_sweep_size(const fm_sweep *sweep);
FM_API fm_status fm_sweep_row_at(const fm_sweep *sweep, size_t index, fm_sweep_row *row);
FM_API size_t fm_sweep_minima_count(const fm_sweep *sweep);
FM_API fm_status fm_sweep_minimum_at(const fm_sweep *sweep, size_t index, fm_extremum *out);
FM_API void fm_sweep_free(fm_sweep *sweep);

FM_API fm_status fm_find_minima(const double *xs, const double *ys, size_t count, fm_extremum *out, size_t capacity,
                                size_t *found);
FM_API fm_status fm_time_to_tfs(fm_kind kind, double n_mean, const fm_sweep_options *options, double step,
                                double max_time, double *out);

typedef struct fm_fit_result {
    fm_fit_model model;
    double coefficients[3];
    size_t coefficient_count;
    double r_squared;
} fm_fit_result;

FM_API fm_status fm_fit(fm_fit_model model, const double *xs, const double *ys, size_t count, fm_fit_result *out);

/* Homodyne 1/F_C per angle; inv_cfi has `count` entries. theta_min is the
 * first local minimum within `degeneracy` times the curve depth of the lowest. */
FM_API fm_status fm_theta_sweep(fm_kind kind, double n_mean, double probe_time, const double *thetas, size_t count,
                                const fm_sweep_options *options, double degeneracy, double *inv_cfi,
                                double *theta_min, double *inv_cfi_min);

/* ---- Optimization ------------------------------------------------------- */

typedef struct fm_problem {
    fm_kind kind;
    double n_mean;
    size_t cutoff;
    double phi;
    double delta;
} fm_problem;

typedef struct fm_optimizer_config {
    size_t max_iters;
    double tol;
    double init_scale;
    double initial_step;
    size_t seeds;
    size_t d_max;
    uint64_t master_seed;
    size_t workers;
} fm_optimizer_config;

/* One probe for the measurement stage: a circuit (params != NULL) or
 * continuous evolution for `continuous_time`. */
typedef struct fm_probe {
    const double *params;
    size_t count;
    double continuous_time;
} fm_probe;

typedef struct fm_opt_record {
    fm_kind kind;
    double n_mean;
    size_t seed;
    size_t d;
    const double *params;
    size_t param_count;
    double objective;
    double inv_fisher;
    size_t iters;
    double budget;
    double wall_time;
    /* NULL on success. */
    const char *error;
} fm_opt_record;

typedef struct fm_opt_result fm_opt_result;

FM_API void fm_problem_default(fm_problem *problem);
FM_API void fm_optimizer_config_default(fm_optimizer_config *config);
FM_API fm_status fm_optimize_preparation(const fm_problem *problem, const size_t *depths, size_t depth_count,
                                         const fm_optimizer_config *config, fm_opt_result **out);
/* probe_count is 1 or depth_count. */
FM_API fm_status fm_optimize_measurement(const fm_problem *problem, const fm_probe *probes, size_t probe_count,
                                         const fm_measurement_model *model, const size_t *depths,
                                         size_t depth_count, const fm_optimizer_config *config,
                                         fm_opt_result **out);
FM_API size_t fm_opt_result_size(const fm_opt_result *result);
FM_API fm_status fm_opt_result_at(const fm_opt_result *result, size_t index, fm_opt_record *out);
FM_API void fm_opt_result_free(fm_opt_result *result);

/* -F_Q of a prepared circuit, recomputed from scratch. */
FM_API fm_status fm_preparation_objective(const fm_problem *problem, const double *params, size_t count,
                                          double *out);
/* -F_C of U_M(mu) applied after encoding `probe`. */
FM_API fm_status fm_measurement_objective(const fm_problem *problem, const fm_probe *probe,
                                          const double *premeasure, size_t count,
                                          const fm_measurement_model *model, double *out);
FM_API fm_status fm_minimize(double (*objective)(const double *x, size_t n, void *user), void *user,
                             const double *x0, size_t n, const fm_optimizer_config *config, double *x_best,
                             double *f_best, size_t *iters);

typedef struct fm_ablation_record {
    size_t d;
    double inv_cfi_theta_free;
    double inv_cfi_theta_zero_pqc;
    double inv_cfi_theta_free_pqc;
    double inv_cfi_theta_zero;
    double inv_qfi;
} fm_ablation_record;

FM_API fm_status fm_ablation_theta(const fm_problem *problem, const double *prepared, size_t count,
                                   const fm_optimizer_config *config, fm_ablation_record *out);

/* ---- Wigner functions --------------------------------------------------- */

typedef struct fm_wigner fm_wigner;

/* Reduced state of mode 0 or 1; axes NULL select the default grid. */
FM_API fm_status fm_wigner_from_state(const fm_state *state, size_t mode, const double *x_axis, size_t nx,
                                      const double *p_axis, size_t np, fm_wigner **out);
FM_API fm_status fm_wigner_shape(const fm_wigner *grid, size_t *nx, size_t *np);
FM_API const double *fm_wigner_x_axis(const fm_wigner *grid);
FM_API const double *fm_wigner_p_axis(const fm_wigner *grid);
/* Row-major, rows follow the p axis. */
FM_API const double *fm_wigner_values(const fm_wigner *grid);
FM_API double fm_wigner_integral(const fm_wigner *grid);
FM_API double fm_wigner_purity(const fm_wigner *grid);
FM_API void fm_wigner_free(fm_wigner *grid);

#ifdef __cplusplus
}
#endif

#endif  // FOCKMETRO_H_
