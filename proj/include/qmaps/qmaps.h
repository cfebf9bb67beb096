/* Copyright 2026 the qmaps authors
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

/* C interface to the qmaps library.
 *
 * Conventions:
 *   - Every function returns a qm_status; QM_OK is 0.  On failure,
 *     qm_last_error_message() describes the problem (thread-local).
 *   - Real parameters (alpha, beta, Q) are strings in the library's input
 *     syntax: "p/q" exact rationals, decimal literals (exact), "~0.1234..."
 *     decimal approximants with an uncertainty of one unit in the last digit,
 *     and the builtins "golden" and "sqrt2".
 *   - char** outputs receive newly allocated strings; release them with
 *     qm_string_free.  Handles are released with their matching _free call.
 *     All _free functions accept NULL.
 */

#ifndef QMAPS_QMAPS_H
#define QMAPS_QMAPS_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qm_status {
  QM_OK = 0,
  QM_INVALID_ARGUMENT = 1,
  QM_DEGENERATE_POLYNOMIAL = 2,
  QM_PRECISION_EXCEEDED = 3,
  QM_WINDOW_TOO_SMALL = 4,
  QM_UNSUPPORTED_KIND = 5,
  QM_COST_GUARD = 6,
  QM_NOT_FOUND = 7,
  QM_IO = 8,
  QM_INTERNAL = 9
} qm_status;

const char* qm_version(void);
const char* qm_last_error_message(void);
void qm_string_free(char* s);

/* ------------------------------------------------------------------------- */
/* Handles.                                                                    */
/* ------------------------------------------------------------------------- */

typedef struct qm_phase qm_phase;
typedef struct qm_testfn qm_testfn;
typedef struct qm_trace_window qm_trace_window;

/* Polynomial phase from coefficients, highest degree first: "1,0,0" is x^2. */
qm_status qm_phase_parse(const char* coeffs_highest_first, qm_phase** out);
void qm_phase_free(qm_phase* phase);
int qm_phase_degree(const qm_phase* phase);

/* Test function spec: "fejer" | "triangle:<p>" | "table:<path>". */
qm_status qm_testfn_parse(const char* spec, qm_testfn** out);
void qm_testfn_free(qm_testfn* f);
qm_status qm_poisson_reference(const qm_testfn* f, double* value);

/* ------------------------------------------------------------------------- */
/* Spectra and traces.  symmetric_range = 0 indexes k = 1..n; nonzero indexes */
/* k = -n..n.                                                                  */
/* ------------------------------------------------------------------------- */

/* Hypothesis check on the classical data; details_json may be NULL. */
qm_status qm_validate_hypotheses(const qm_phase* phase, const char* alpha,
                                 const char* beta, int* curvature_ok,
                                 int* drift_ok, char** details_json);

/* Writes the eigenphases (in [0,1), ascending index) into out.  Needs
 * out_len >= n (or 2n+1 for the symmetric range); *written gets the count. */
qm_status qm_eigenphases(const qm_phase* phase, long long n, const char* alpha,
                         const char* beta, int symmetric_range, double* out,
                         size_t out_len, size_t* written);

/* Traces Tr U^l for |l| <= window. */
qm_status qm_trace_window_compute(const qm_phase* phase, long long n,
                                  const char* alpha, const char* beta,
                                  int symmetric_range, long long window,
                                  qm_trace_window** out);
void qm_trace_window_free(qm_trace_window* tw);
qm_status qm_trace_get(const qm_trace_window* tw, long long ell, double* re,
                       double* im, double* abs2);

/* ------------------------------------------------------------------------- */
/* Pair statistics.                                                            */
/* ------------------------------------------------------------------------- */

qm_status qm_rho2_local(const qm_phase* phase, const qm_testfn* f, long long n,
                        const char* alpha, const char* beta, int symmetric_range,
                        double* value, double* poisson_ref);

/* Cumulative average up to N; per_n (length N, may be NULL) receives the
 * local values. */
qm_status qm_rho2_cumulative(const qm_phase* phase, const qm_testfn* f,
                             long long N, const char* alpha, const char* beta,
                             int symmetric_range, double* per_n, double* value);

/* Physical-side pair count over explicit phases (Fejer only). */
qm_status qm_pair_count(const qm_testfn* f, const double* phases, size_t count,
                        long long n, long long m_cutoff, double* value);

/* ------------------------------------------------------------------------- */
/* Continued fractions.                                                        */
/* ------------------------------------------------------------------------- */

/* Quotients, convergents, Khinchin-Levy statistics and the quotient-growth
 * report, as JSON. */
qm_status qm_cf_report(const char* alpha, size_t max_terms, char** json);

/* Best approximation a/q with q <= Q and |alpha - a/q| <= 1/(qQ), certified;
 * Q is a positive integer in decimal. */
qm_status qm_dirichlet(const char* alpha, const char* Q, char** json);

/* Convergent with numerator in [n^(r-eps), n^r] and gcd(p, n^(k-1)) <= n^eps;
 * QM_NOT_FOUND (with a gcd profile in the message) when none exists. */
qm_status qm_good_convergent(const char* alpha, long long n, int k, double r,
                             double eps, char** json);

/* ------------------------------------------------------------------------- */
/* Estimate pipelines.                                                         */
/* ------------------------------------------------------------------------- */

/* One report per inequality in the degree-2 (resp. degree 3..5) derivation. */
qm_status qm_quadratic_chain(const qm_phase* phase, const char* alpha,
                             const char* beta, long long n, double r, double eps,
                             char** json);
qm_status qm_general_chain(const qm_phase* phase, const char* alpha,
                           const char* beta, long long n, double r, double eps,
                           char** json);

/* The order-j differencing inequality for the frequency-ell phase sum. */
qm_status qm_weyl_inequality(const qm_phase* phase, long long n, long long ell,
                             int j, char** json);

/* ------------------------------------------------------------------------- */
/* Statistical harness.                                                        */
/* ------------------------------------------------------------------------- */

/* config_json is documented in the README; outputs may be NULL if unwanted. */
qm_status qm_sweep_run(const char* config_json, char** records_csv,
                       char** summary_json);

qm_status qm_gap_study(const qm_phase* phase, const char* alpha, const char* beta,
                       long long m_lo, long long m_hi, const char* testfn_spec,
                       char** records_csv, char** summary_json);

qm_status qm_exponent_study(const qm_phase* phase, const char* alpha,
                            const char* beta, const long long* n_grid,
                            size_t n_count, const char* testfn_spec, char** csv,
                            char** json);

#ifdef __cplusplus
}
#endif

#endif /* QMAPS_QMAPS_H */
