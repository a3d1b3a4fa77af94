// SPDX-License-Identifier: Apache-2.0
//
// beamspace: joint beam selection and phase-only beamforming for lens-array
// mmWave MU-MIMO uplinks
// Copyright (C) 2026 The beamspace authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

/* C interface of the beamspace library.
 *
 * Every object is an opaque handle created and released through this header.
 * Functions return a bs_status; on failure bs_last_error() describes the
 * cause. Strings returned by the library stay valid until the owning handle
 * is freed (or, for bs_last_error, until the next failing call on the same
 * thread).
 */
#ifndef BEAMSPACE_BEAMSPACE_H
#define BEAMSPACE_BEAMSPACE_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(BEAMSPACE_BUILDING_LIBRARY)
#define BS_API __declspec(dllexport)
#else
#define BS_API __declspec(dllimport)
#endif
#else
#define BS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum bs_status
{
    BS_OK = 0,
    BS_ERR_INVALID_ARGUMENT = 1, /* malformed input, unknown key, bad dimension */
    BS_ERR_DOMAIN = 2,           /* value outside the model's domain */
    BS_ERR_NUMERICAL = 3,        /* factorization or eigensolver failure */
    BS_ERR_LIMIT = 4,            /* enumeration cap exceeded */
    BS_ERR_IO = 5,               /* file system failure */
    BS_ERR_INTERNAL = 6
} bs_status;

typedef struct bs_experiment bs_experiment;
typedef struct bs_results bs_results;
typedef struct bs_problem bs_problem;
typedef struct bs_solution bs_solution;

BS_API const char *bs_version(void);

/* Message of the last failing call on this thread; "" when none. */
BS_API const char *bs_last_error(void);

BS_API const char *bs_status_name(bs_status status);

/* ---- experiments ------------------------------------------------------- */

BS_API bs_status bs_experiment_parse(const char *json_text, bs_experiment **out);
BS_API bs_status bs_experiment_load(const char *path, bs_experiment **out);
BS_API bs_status bs_experiment_set_trials(bs_experiment *exp, int trials);
BS_API bs_status bs_experiment_set_seed(bs_experiment *exp, uint64_t seed);
BS_API bs_status bs_experiment_set_output_dir(bs_experiment *exp, const char *dir);
BS_API const char *bs_experiment_output_dir(const bs_experiment *exp);

/* Runs all trials; threads <= 0 honours BEAMSPACE_THREADS. Per-trial scheme
 * failures do not fail the call; they are counted in the results. */
BS_API bs_status bs_experiment_run(const bs_experiment *exp, int threads, bs_results **out);
BS_API void bs_experiment_free(bs_experiment *exp);

typedef struct bs_trial_record
{
    char scheme[16];
    double sweep_value;
    int trial;
    double rate_bits;
    double wall_ms;
    int converged;
    int outer_iters;
    int feasible;
} bs_trial_record;

typedef struct bs_summary_record
{
    char scheme[16];
    double sweep_value;
    double mean_rate;
    double ci95_low;
    double ci95_high;
    int n;
} bs_summary_record;

BS_API size_t bs_results_trial_count(const bs_results *res);
BS_API bs_status bs_results_trial(const bs_results *res, size_t index, bs_trial_record *out);
BS_API size_t bs_results_summary_count(const bs_results *res);
BS_API bs_status bs_results_summary(const bs_results *res, size_t index, bs_summary_record *out);
BS_API size_t bs_results_error_count(const bs_results *res);
BS_API const char *bs_results_error(const bs_results *res, size_t index);

/* Writes the CSV/JSON artifacts into dir (created if missing). */
BS_API bs_status bs_results_write(const bs_results *res, const char *dir);

/* *all_passed = 1 when no run failed, all outputs are feasible and the mean
 * rates are ordered pdd >= so >= ia_like at every sweep point. */
BS_API bs_status bs_results_check_gates(const bs_results *res, int *all_passed);

/* One line per gate: "PASS|FAIL <name>: <detail>". */
BS_API const char *bs_results_gate_report(const bs_results *res);
BS_API void bs_results_free(bs_results *res);

/* ---- single problems --------------------------------------------------- */

/* Draws trial `trial` of the scenario described by a SystemConfig JSON object
 * (the "base" block of an experiment spec). */
BS_API bs_status bs_problem_create(const char *config_json, uint64_t trial, bs_problem **out);
BS_API int bs_problem_num_beams(const bs_problem *problem);
BS_API int bs_problem_num_users(const bs_problem *problem);
BS_API void bs_problem_free(bs_problem *problem);

/* scheme: "pdd", "so", "ia_like" or "exhaustive". */
BS_API bs_status bs_problem_solve(const bs_problem *problem, const char *scheme, bs_solution **out);

BS_API double bs_solution_rate(const bs_solution *sol);
BS_API int bs_solution_converged(const bs_solution *sol);
BS_API int bs_solution_outer_iters(const bs_solution *sol);
BS_API size_t bs_solution_num_selected(const bs_solution *sol);

/* Copies up to `capacity` ascending beam indices; returns the number copied. */
BS_API size_t bs_solution_selected(const bs_solution *sol, int *indices, size_t capacity);
BS_API size_t bs_solution_num_phases(const bs_solution *sol);
BS_API size_t bs_solution_phases(const bs_solution *sol, double *re, double *im, size_t capacity);
BS_API size_t bs_solution_trace_length(const bs_solution *sol);

/* Row of the PDD convergence trace; any output pointer may be NULL. */
BS_API bs_status bs_solution_trace_row(const bs_solution *sol, size_t index, int *outer_iter, double *rate_bits,
                                       double *violation, double *rho, int *inner_iters);
BS_API void bs_solution_free(bs_solution *sol);

/* ---- utilities --------------------------------------------------------- */

/* Large-scale gain 10^(-PL/10) with PL = 92.5 + 20 log10(f) + 20 log10(d). */
BS_API bs_status bs_path_loss(double carrier_ghz, double distance_km, double *gain);

typedef struct bs_oracle_report
{
    int trials;
    double mean_greedy;
    double mean_exhaustive;
    double max_gap_bits;
    double min_ratio;
    double fraction_within_95;
    int exhaustive_dominates;
} bs_oracle_report;

/* Greedy against exhaustive beam selection on `trials` random instances. */
BS_API bs_status bs_oracle_compare(int n, int l, int k, uint64_t seed, int trials, bs_oracle_report *out);

#ifdef __cplusplus
}
#endif

#endif /* BEAMSPACE_BEAMSPACE_H */
