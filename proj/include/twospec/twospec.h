/* C interface to the twospec library.
 *
 * All objects are opaque handles released with the matching *_free function.
 * Every fallible call returns a ts_status; on failure ts_last_error() holds a
 * message for the calling thread. Array getters copy at most `cap` entries
 * into caller storage; pass a buffer sized by the matching count getter. */
#ifndef TWOSPEC_TWOSPEC_H
#define TWOSPEC_TWOSPEC_H

#include <stddef.h>
#include <stdint.h>

#if defined(TWOSPEC_BUILDING_LIBRARY)
#define TS_API __attribute__((visibility("default")))
#else
#define TS_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ts_status {
    TS_OK = 0,
    TS_ERR_USAGE = 1,
    TS_ERR_VALIDATION = 2,
    TS_ERR_NUMERIC = 3,
    TS_ERR_DEGENERACY = 4,
    TS_ERR_NONCONVERGENCE = 5,
    TS_ERR_INTERNAL = 6
} ts_status;

typedef enum ts_boundary { TS_DIRICHLET = 0, TS_DIRICHLET_NEUMANN = 1 } ts_boundary;
typedef enum ts_slot { TS_SLOT_P = 0, TS_SLOT_Q = 1 } ts_slot;
typedef enum ts_family { TS_FAMILY_VALUE = 0, TS_FAMILY_DERIVATIVE = 1 } ts_family;
typedef enum ts_estimate_id {
    TS_EST_A1 = 0,
    TS_EST_A2 = 1,
    TS_EST_B1 = 2,
    TS_EST_B2 = 3,
    TS_EST_EQ1 = 4,
    TS_EST_EQ2 = 5
} ts_estimate_id;

TS_API const char* ts_last_error(void);
TS_API const char* ts_version(void);
TS_API const char* ts_status_name(ts_status status);

/* Worker threads for sweeps; n <= 0 restores the default (TWOSPEC_THREADS or
 * hardware concurrency). Results do not depend on the count. */
TS_API void ts_set_threads(int n);
TS_API int ts_get_threads(void);

/* ---- coefficients: c(x) = c0 + sum_k a_k cos(2k pi x) + b_k sin(2k pi x) ---- */

typedef struct ts_coeff ts_coeff;

TS_API ts_status ts_coeff_series(double c0, const double* cosine, size_t n_cos, const double* sine, size_t n_sin,
                                 ts_coeff** out);
/* {"constant": c0, "cos": [...], "sin": [...]} or {"grid": [...], "max_modes": k} */
TS_API ts_status ts_coeff_from_json(const char* json, ts_coeff** out);
/* Samples on x_i = i/(count-1); projected onto modes <= max_modes. */
TS_API ts_status ts_coeff_from_grid(const double* samples, size_t count, int max_modes, ts_coeff** out);
TS_API ts_status ts_coeff_clone(const ts_coeff* c, ts_coeff** out);
TS_API void ts_coeff_free(ts_coeff* c);

TS_API ts_status ts_coeff_eval(const ts_coeff* c, double x, double* out);
TS_API ts_status ts_coeff_l2_norm(const ts_coeff* c, double* out);
/* Number of trigonometric modes stored (length of the cos/sin arrays). */
TS_API size_t ts_coeff_modes(const ts_coeff* c);
TS_API ts_status ts_coeff_terms(const ts_coeff* c, double* c0, double* cosine, double* sine, size_t cap);
/* JSON text; *needed receives strlen + 1. Pass buf = NULL to query the size. */
TS_API ts_status ts_coeff_to_json(const ts_coeff* c, char* buf, size_t cap, size_t* needed);

/* A coefficient pair (p, q) of borrowed handles; NULL means the zero function. */
typedef struct ts_pair {
    const ts_coeff* p;
    const ts_coeff* q;
} ts_pair;

/* Seeded random pair inside the open ball B(center, radius) with modes <= `modes`. */
TS_API ts_status ts_random_pair(const double center[2], double radius, int modes, uint64_t seed, ts_coeff** p,
                                ts_coeff** q);

/* ---- forward spectra ---- */

typedef struct ts_spectrum ts_spectrum;

typedef struct ts_spectrum_options {
    int dimension;      /* Galerkin dimension N; 0 selects the truncation rule */
    int grid_intervals; /* eigenfunction grid (even); 0 selects the default */
    int eigenfunctions; /* nonzero: keep normalized eigenfunctions */
} ts_spectrum_options;

TS_API ts_spectrum_options ts_spectrum_options_default(void);
TS_API ts_status ts_spectrum_compute(ts_pair pair, ts_boundary kind, int n_max, const ts_spectrum_options* options,
                                     ts_spectrum** out);
TS_API void ts_spectrum_free(ts_spectrum* s);

TS_API int ts_spectrum_count(const ts_spectrum* s);
TS_API int ts_spectrum_dimension(const ts_spectrum* s);
TS_API ts_boundary ts_spectrum_kind(const ts_spectrum* s);
TS_API ts_status ts_spectrum_values(const ts_spectrum* s, double* out, size_t cap);
/* Eigenvector residual ||A c - lambda c|| of mode n (1-based). */
TS_API ts_status ts_spectrum_residual(const ts_spectrum* s, int n, double* out);
/* Grid interval count M of the stored eigenfunctions (0 if none). */
TS_API int ts_spectrum_grid_intervals(const ts_spectrum* s);
/* M+1 samples of y_n and y_n' on x_i = i/M. Either output may be NULL. */
TS_API ts_status ts_spectrum_eigenfunction(const ts_spectrum* s, int n, double* values, double* derivatives,
                                           size_t cap);
/* First-order eigenvalue change int dp (y_n')^2 + int dq y_n^2. */
TS_API ts_status ts_spectrum_frechet(const ts_spectrum* s, int n, ts_pair delta, double* out);
/* (lambda_n - k_n^4) / k_n^2 ~ slope + intercept / k_n^2 over the top half. */
TS_API ts_status ts_spectrum_asymptotic_fit(const ts_spectrum* s, double* slope, double* intercept);

TS_API ts_status ts_unperturbed_eigenvalue(double a1, double a2, ts_boundary kind, int n, double* out);
TS_API int ts_truncation_dimension(int n_max, int series_length);

/* ---- degeneracy ---- */

typedef struct ts_exceptional {
    ts_boundary kind;
    int k;
    int t;
    int first;  /* coinciding mode indices */
    int second;
    double a1;
} ts_exceptional;

TS_API ts_status ts_exceptional_lines(double lo, double hi, int index_limit, ts_exceptional* out, size_t cap,
                                      size_t* count);
TS_API ts_status ts_match_exceptional(double a1, int index_limit, ts_exceptional* out, int* found);

typedef struct ts_degeneracy ts_degeneracy;

/* constant: NULL, or the (a1, a2) the spectra were computed at. */
TS_API ts_status ts_degeneracy_detect(const ts_spectrum* dirichlet, const ts_spectrum* dirichlet_neumann,
                                      double tol, const double* constant, ts_degeneracy** out);
TS_API void ts_degeneracy_free(ts_degeneracy* d);
TS_API int ts_degeneracy_in_w(const ts_degeneracy* d);
TS_API size_t ts_degeneracy_cluster_count(const ts_degeneracy* d, ts_boundary kind);
TS_API size_t ts_degeneracy_cluster_size(const ts_degeneracy* d, ts_boundary kind, size_t i);
TS_API ts_status ts_degeneracy_cluster(const ts_degeneracy* d, ts_boundary kind, size_t i, int* indices,
                                       size_t cap);
TS_API ts_status ts_degeneracy_exceptional(const ts_degeneracy* d, ts_exceptional* out, int* found);

/* ---- Riesz families ---- */

typedef struct ts_riesz_report ts_riesz_report;

typedef struct ts_riesz_summary {
    ts_family kind;
    int n_max;
    int grid_intervals;
    double perturbation_sum;
    double tail_estimate;
    double frame_lower;
    double frame_upper;
    double reference_lower;
    double reference_upper;
    int passes_le3;
    size_t terms;
} ts_riesz_summary;

TS_API ts_status ts_riesz_check(ts_pair first, ts_pair second, ts_family kind, int n_max, int grid_intervals,
                                ts_riesz_report** out);
TS_API void ts_riesz_report_free(ts_riesz_report* r);
TS_API ts_status ts_riesz_report_summary(const ts_riesz_report* r, ts_riesz_summary* out);
/* ||d_m - e_m||^2 for m = 0..2 n_max. */
TS_API ts_status ts_riesz_report_terms(const ts_riesz_report* r, double* out, size_t cap);

/* ---- estimates ---- */

typedef struct ts_estimate_options {
    double alpha;
    double ball_radius;
    double degeneracy_tol;
    int points_per_mode;
    int first; /* index range n = first..last */
    int last;
} ts_estimate_options;

TS_API ts_estimate_options ts_estimate_options_default(void);

typedef struct ts_estimate_set ts_estimate_set;

typedef struct ts_estimate_summary {
    ts_estimate_id id;
    double alpha;
    double norm_factor;
    double max_ratio;
    double trend_slope;
    int passed;
    size_t points;
} ts_estimate_summary;

/* A1, A2, B1, B2 for four pairs. */
TS_API ts_status ts_verify_products(const ts_pair pairs[4], const ts_estimate_options* options, ts_estimate_set** out);
/* Eq1, Eq2 for two pairs. */
TS_API ts_status ts_verify_differences(ts_pair first, ts_pair second, const ts_estimate_options* options,
                                       ts_estimate_set** out);
TS_API void ts_estimate_set_free(ts_estimate_set* s);
TS_API size_t ts_estimate_set_count(const ts_estimate_set* s);
TS_API ts_status ts_estimate_set_summary(const ts_estimate_set* s, size_t i, ts_estimate_summary* out);
/* Any output may be NULL. */
TS_API ts_status ts_estimate_set_series(const ts_estimate_set* s, size_t i, int* n_values, double* lhs,
                                        double* ratios, size_t cap);
TS_API const char* ts_estimate_name(ts_estimate_id id);
TS_API double ts_max_trend_slope(void);

typedef struct ts_sup_report ts_sup_report;

TS_API ts_status ts_verify_sup_bounds(ts_pair pair, const ts_estimate_options* options, ts_sup_report** out);
TS_API void ts_sup_report_free(ts_sup_report* r);
TS_API size_t ts_sup_report_count(const ts_sup_report* r);
TS_API ts_status ts_sup_report_maxima(const ts_sup_report* r, double* max_value, double* max_derivative);
TS_API ts_status ts_sup_report_series(const ts_sup_report* r, int* n_values, double* sup_values,
                                      double* sup_derivatives, size_t cap);
TS_API ts_status ts_sup_bound_constant(double c, double m, int n, double alpha, double* out);

TS_API ts_status ts_disjointness_index(double r, double alpha, int* out);

typedef struct ts_loc_report ts_loc_report;

typedef struct ts_loc_summary {
    double alpha;
    double r;
    int disjointness_index;
    double minimal_r;
    int first_contained;
    int all_in_region;
    size_t points;
} ts_loc_summary;

TS_API ts_status ts_verify_localization(ts_pair pair, double alpha, double r, int first, int last,
                                        ts_loc_report** out);
TS_API void ts_loc_report_free(ts_loc_report* r);
TS_API ts_status ts_loc_report_summary(const ts_loc_report* r, ts_loc_summary* out);
/* Any output may be NULL. */
TS_API ts_status ts_loc_report_series(const ts_loc_report* r, int* n_values, double* eigenvalues, double* distances,
                                      double* radii, int* in_own_disk, int* in_region, size_t cap);

typedef struct ts_form_identity {
    double eigenvalue;
    double lhs;
    double rhs;
    double residual;
    double subtraction_lhs;
    double subtraction_rhs;
    double subtraction_residual;
} ts_form_identity;

TS_API ts_status ts_verify_form_identity(ts_pair first, ts_pair second, ts_boundary kind, int n,
                                         ts_form_identity* out);

/* ---- inverse problem ---- */

typedef struct ts_solver_config {
    int basis_modes;
    double tikhonov;
    double damping;
    int max_iter;
    double tol;
    int forward_n;
    int oracle_n;
    int max_halvings;
} ts_solver_config;

TS_API ts_solver_config ts_solver_config_default(void);

typedef struct ts_inverse_problem ts_inverse_problem;

TS_API ts_status ts_inverse_problem_create(ts_slot unknown, const ts_coeff* known, const double* target_lambda,
                                           const double* target_mu, size_t n_spec, const double anchor[2],
                                           ts_inverse_problem** out);
/* Seeded synthetic problem; *truth (optional, may be NULL) receives the true unknown. */
TS_API ts_status ts_inverse_problem_synthetic(const double anchor[2], double epsilon, uint64_t seed, int n_spec,
                                              ts_slot unknown, int oracle_n, int modes, ts_inverse_problem** out,
                                              ts_coeff** truth);
TS_API void ts_inverse_problem_free(ts_inverse_problem* p);
TS_API size_t ts_inverse_problem_size(const ts_inverse_problem* p);
TS_API ts_status ts_inverse_problem_targets(const ts_inverse_problem* p, double* lambda, double* mu, size_t cap);

typedef struct ts_reconstruction ts_reconstruction;

typedef struct ts_reconstruction_summary {
    int iterations;
    int converged;
    double threshold;
    double final_residual;
    int has_truth_error;
    double final_l2_error_vs_truth;
    size_t history;
} ts_reconstruction_summary;

/* Returns TS_OK when the solver ran, converged or not; check the summary.
 * truth may be NULL. */
TS_API ts_status ts_recover_unknown(const ts_inverse_problem* p, const ts_solver_config* config,
                                    const ts_coeff* truth, ts_reconstruction** out);
TS_API void ts_reconstruction_free(ts_reconstruction* r);
TS_API ts_status ts_reconstruction_summary_get(const ts_reconstruction* r, ts_reconstruction_summary* out);
TS_API ts_status ts_reconstruction_history(const ts_reconstruction* r, double* out, size_t cap);
/* New handle owned by the caller. */
TS_API ts_status ts_reconstruction_estimate(const ts_reconstruction* r, ts_coeff** out);

typedef struct ts_probe_report ts_probe_report;

typedef struct ts_probe_summary {
    ts_slot unknown;
    double epsilon;
    int n_spec;
    uint64_t seed;
    double min_ratio;
    double max_ratio;
    int consistent;
    size_t trials;
} ts_probe_summary;

TS_API ts_status ts_uniqueness_probe(const double anchor[2], double epsilon, int trials, uint64_t seed,
                                     ts_slot unknown, int n_spec, int modes, ts_probe_report** out);
TS_API void ts_probe_report_free(ts_probe_report* r);
TS_API ts_status ts_probe_report_summary(const ts_probe_report* r, ts_probe_summary* out);
/* Any output may be NULL. */
TS_API ts_status ts_probe_report_trials(const ts_probe_report* r, double* spectral_distance,
                                        double* coefficient_distance, double* ratio, size_t cap);
TS_API ts_status ts_compare_candidates(ts_pair first, ts_pair second, ts_slot unknown, int n_spec,
                                       double* spectral_distance, double* coefficient_distance);

#ifdef __cplusplus
}
#endif

#endif
