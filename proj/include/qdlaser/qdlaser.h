/* Copyright 2026 the qdlaser authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface to the qdlaser core: two quantum dots coupled to a lossy
 * cavity through a phonon bath, their steady states, and the photon-ladder
 * rate reduction. All functions return qdl_status; handles are opaque and
 * single-threaded, the library underneath may use worker threads.
 */

#ifndef QDLASER_QDLASER_H_
#define QDLASER_QDLASER_H_

#include <stddef.h>

#if defined(__GNUC__)
#define QDL_API __attribute__((visibility("default")))
#else
#define QDL_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Mirrors the library's error taxonomy. Values are stable ABI. */
typedef enum qdl_status {
    QDL_OK = 0,
    QDL_ERR_INVALID_ARG = 1,
    QDL_ERR_CONFIG = 2,
    QDL_ERR_QUADRATURE = 3,
    QDL_ERR_SINGULAR = 4,
    QDL_ERR_NO_CONVERGENCE = 5,
    QDL_ERR_NEGATIVE_RATE = 6,
    QDL_ERR_IO = 7,
    QDL_ERR_INTERNAL = 8
} qdl_status;

QDL_API const char* qdl_version(void);
QDL_API const char* qdl_status_name(qdl_status status);

/* Message of the most recent failure on the calling thread; never NULL. */
QDL_API const char* qdl_last_error(void);

/* ---- model ------------------------------------------------------------- */

typedef struct qdl_model qdl_model;

QDL_API qdl_model* qdl_model_create(void); /* NULL only on allocation failure */
QDL_API void qdl_model_destroy(qdl_model* model);

/* Keys as in scenario files: pump_mode, g1, g2, kappa, gamma1, gamma2,
 * gamma1p, gamma2p, eta, eta1, eta2, delta, delta1, delta2, delta1p,
 * delta2p, delta_cp, n_max, phonons_enabled, and bath.temperature,
 * bath.g1_abs, bath.alpha_p, bath.omega_b. Values are parsed like file
 * values; "eta" and "delta" set both dots, "delta" following the current
 * pump_mode, so set pump_mode first. */
QDL_API qdl_status qdl_model_set(qdl_model* model, const char* key, const char* value);

/* Formatted at 12 significant digits; needs buf_len > strlen(result). */
QDL_API qdl_status qdl_model_get(const qdl_model* model, const char* key, char* buf,
                         size_t buf_len);

/* Copy the [model]/[bath] sections of a scenario file into the handle,
 * applying the file's calibrate request if present. */
QDL_API qdl_status qdl_model_load(qdl_model* model, const char* path);

/* Fit bath.g1_abs so the phonon envelope at 5 K is 0.9, store it on the
 * handle, and optionally return it. */
QDL_API qdl_status qdl_model_calibrate(qdl_model* model, double* g1_abs);

/* Run the structural invariant suite (trace preservation, steady-state
 * quality, positivity floor, rate-reduction bookkeeping). *report is owned
 * by the handle until the next call. A finished run with violations still
 * returns QDL_OK; *failures carries the count. */
QDL_API qdl_status qdl_model_check(qdl_model* model, const char** report,
                           int* failures);

/* ---- steady states ----------------------------------------------------- */

typedef struct qdl_result qdl_result;

/* engine: "sme" (polaron secular master equation) or "full_me"/"full".
 * On success *out owns the state; sme results also carry the k-photon
 * excess emission from the rate reduction. */
QDL_API qdl_status qdl_solve_steady(const qdl_model* model, const char* engine,
                            qdl_result** out);
QDL_API void qdl_result_destroy(qdl_result* result);

/* Scalar keys: p_ee, p_plus, p_minus, p_gg, mean_n, residual, min_eig, B,
 * n_max, and on sme results spee, tpee, thpee, fpee, rateeq_mean_n. */
QDL_API qdl_status qdl_result_get(const qdl_result* result, const char* key,
                          double* value);

/* Photon-number distribution. Call with *len = capacity of pn (or pn = NULL
 * to query); returns the length n_max + 1 in *len. */
QDL_API qdl_status qdl_result_pn(const qdl_result* result, double* pn, size_t* len);

/* ---- sweeps ------------------------------------------------------------ */

typedef struct qdl_sweep qdl_sweep;

QDL_API qdl_status qdl_sweep_load(const char* path, qdl_sweep** out);
QDL_API qdl_status qdl_sweep_parse(const char* text, qdl_sweep** out);
QDL_API void qdl_sweep_destroy(qdl_sweep* sweep);

/* Command-line overrides: engine, workers, format, out. */
QDL_API qdl_status qdl_sweep_set(qdl_sweep* sweep, const char* key, const char* value);

/* One row per grid point per engine; per-point solver failures are recorded
 * in the table, not raised. */
QDL_API qdl_status qdl_sweep_run(qdl_sweep* sweep);

QDL_API int qdl_sweep_points(const qdl_sweep* sweep);
QDL_API int qdl_sweep_failed_points(const qdl_sweep* sweep); /* -1 before run */

/* kind: "table" or "compare" (needs engine=both); format: "csv", "json" or
 * NULL for the sweep's own setting. *text is owned by the handle until the
 * next render or destroy. */
QDL_API qdl_status qdl_sweep_render(qdl_sweep* sweep, const char* kind,
                            const char* format, const char** text);

/* Same selection, written to path; "-" means stdout, NULL the sweep's own
 * output file (falling back to stdout). */
QDL_API qdl_status qdl_sweep_write(qdl_sweep* sweep, const char* kind,
                           const char* format, const char* path);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* QDLASER_QDLASER_H_ */
