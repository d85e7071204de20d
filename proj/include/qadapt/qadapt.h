// Copyright 2026 The qadapt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/*
 * C interface to the qadapt simulator.
 *
 * Objects are opaque handles created and destroyed through this API. Every
 * fallible call returns a qa_status; on failure qa_last_error() describes
 * the problem for the calling thread until the next failing call.
 */

#ifndef QADAPT_QADAPT_H
#define QADAPT_QADAPT_H

#include <stddef.h>
#include <stdint.h>

#if defined(QADAPT_BUILDING_LIBRARY)
#define QADAPT_API __attribute__((visibility("default")))
#else
#define QADAPT_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qa_status {
    QA_OK = 0,
    QA_ERR_INVALID_ARGUMENT = 1,
    QA_ERR_DIMENSION = 2,
    QA_ERR_NUMERICAL = 3,
    QA_ERR_IO = 4,
    QA_ERR_NULL_HANDLE = 5,
    QA_ERR_INTERNAL = 6
} qa_status;

typedef struct qa_config qa_config;
typedef struct qa_result qa_result;
typedef struct qa_verify_report qa_verify_report;

QADAPT_API const char *qa_version(void);
/* Message of the last failed call on this thread ("" if none). */
QADAPT_API const char *qa_last_error(void);
QADAPT_API const char *qa_status_name(qa_status status);

/* ---- experiment configuration ------------------------------------------ */

/* Defaults: haar_qubit, epsilons {0.1, 0.3, 0.5, 0.7, 0.9}, 2000 trials,
 * 100 iterations, delta_init = delta_max = 4 pi, master seed 1, label "run". */
QADAPT_API qa_status qa_config_create(qa_config **out);
QADAPT_API void qa_config_destroy(qa_config *config);

/* Loads a named preset: fig3, fig4, fig5, fig6a or fig6b. */
QADAPT_API qa_status qa_config_load_figure(qa_config *config, const char *figure);

/* family: haar-qubit | random-qudit | coherent | cat | zero-n (or with
 * underscores). n is used by zero-n, cutoff by coherent and cat. */
QADAPT_API qa_status qa_config_set_env(qa_config *config, const char *family, size_t dim,
                                       size_t n, size_t cutoff);
/* Fixes the coherent/cat amplitude instead of sampling one per trial. */
QADAPT_API qa_status qa_config_set_alpha(qa_config *config, double re, double im);
QADAPT_API qa_status qa_config_clear_epsilons(qa_config *config);
QADAPT_API qa_status qa_config_add_epsilon(qa_config *config, double epsilon);
QADAPT_API qa_status qa_config_set_trials(qa_config *config, size_t n_trials);
QADAPT_API qa_status qa_config_set_iterations(qa_config *config, size_t n_iters);
QADAPT_API qa_status qa_config_set_delta(qa_config *config, double delta_init, double delta_max);
QADAPT_API qa_status qa_config_set_seed(qa_config *config, uint64_t master_seed);
QADAPT_API qa_status qa_config_set_label(qa_config *config, const char *label);
QADAPT_API qa_status qa_config_validate(const qa_config *config);

QADAPT_API qa_status qa_config_get_trials(const qa_config *config, size_t *out);
QADAPT_API qa_status qa_config_get_iterations(const qa_config *config, size_t *out);

/* ---- running ------------------------------------------------------------ */

/* threads = 0 picks the hardware concurrency. keep_trials retains per-trial
 * records for qa_result_write_trials. */
QADAPT_API qa_status qa_run_ensemble(const qa_config *config, unsigned threads,
                                     int keep_trials, qa_result **out);
QADAPT_API void qa_result_destroy(qa_result *result);

QADAPT_API qa_status qa_result_num_epsilons(const qa_result *result, size_t *out);
QADAPT_API qa_status qa_result_num_iterations(const qa_result *result, size_t *out);
QADAPT_API qa_status qa_result_epsilon(const qa_result *result, size_t epsilon_index,
                                       double *out);
/* Any output pointer may be NULL. */
QADAPT_API qa_status qa_result_point(const qa_result *result, size_t epsilon_index,
                                     size_t iteration, double *mean_fidelity,
                                     double *std_fidelity, double *mean_delta,
                                     double *mean_log_delta);
QADAPT_API qa_status qa_result_best_epsilon(const qa_result *result, size_t iteration,
                                            size_t *epsilon_index);

/* format: "csv" or "json". overwrite = 0 refuses to replace existing files. */
QADAPT_API qa_status qa_result_write(const qa_result *result, const char *path,
                                     const char *format, int overwrite);
QADAPT_API qa_status qa_result_write_metadata(const qa_result *result, const char *path,
                                              int overwrite);
QADAPT_API qa_status qa_result_write_trials(const qa_result *result, const char *path,
                                            int overwrite);

/* ---- verification ------------------------------------------------------- */

/* inject_fault != 0 swaps the reduced simulator for a fixture with a frame
 * conjugation error; the report is then expected to fail. */
QADAPT_API qa_status qa_verify(size_t cases, uint64_t seed, int inject_fault,
                               qa_verify_report **out);
QADAPT_API void qa_verify_report_destroy(qa_verify_report *report);
QADAPT_API size_t qa_verify_report_count(const qa_verify_report *report);
/* Returns 1 if every check passed. */
QADAPT_API int qa_verify_report_all_passed(const qa_verify_report *report);
QADAPT_API qa_status qa_verify_report_check(const qa_verify_report *report, size_t index,
                                            const char **name, int *passed, double *worst,
                                            double *tolerance, const char **detail);

#ifdef __cplusplus
}
#endif

#endif /* QADAPT_QADAPT_H */
