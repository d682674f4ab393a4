/* C interface to the Gilbert tessellation library.
 *
 * Every call returns a gilbert_status; on failure gilbert_last_error()
 * holds a message for the calling thread. Handles are opaque and owned by
 * the caller. Strings returned through char** must be released with
 * gilbert_string_free. Infinite branch lengths are reported as INFINITY.
 */
#ifndef GILBERT_H
#define GILBERT_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define GILBERT_API __declspec(dllexport)
#else
#define GILBERT_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum gilbert_status {
  GILBERT_OK = 0,
  GILBERT_ERR_DOMAIN = 1,      /* argument outside its domain */
  GILBERT_ERR_DEGENERATE = 2,  /* measure-zero configuration */
  GILBERT_ERR_LOOKUP = 3,      /* unknown seed or index */
  GILBERT_ERR_HARNESS = 4,     /* Monte Carlo harness gave up */
  GILBERT_ERR_IO = 5,
  GILBERT_ERR_INTERNAL = 6,
  GILBERT_ERR_NULL = 7         /* null handle or output pointer */
} gilbert_status;

typedef struct gilbert_config gilbert_config;
typedef struct gilbert_tessellation gilbert_tessellation;
typedef struct gilbert_table gilbert_table;

/* Intensity tau plus the (master seed, stream) pair selecting the randomness. */
typedef struct gilbert_process {
  double intensity;
  uint64_t master_seed;
  uint64_t stream;
} gilbert_process;

GILBERT_API const char* gilbert_version(void);
GILBERT_API const char* gilbert_last_error(void);
GILBERT_API const char* gilbert_status_name(gilbert_status status);
GILBERT_API void gilbert_string_free(char* s);

/* ---- finite configurations ---- */

GILBERT_API gilbert_status gilbert_config_new(gilbert_config** out);
GILBERT_API void gilbert_config_free(gilbert_config* config);
/* Appends a seed with id = current size; alpha in [0, pi). */
GILBERT_API gilbert_status gilbert_config_add(gilbert_config* config, double x, double y, double alpha);
GILBERT_API gilbert_status gilbert_config_set_window(gilbert_config* config, double x0, double y0, double w,
                                                     double h);
GILBERT_API size_t gilbert_config_size(const gilbert_config* config);
/* JSON list of {x, y, alpha}. */
GILBERT_API gilbert_status gilbert_config_from_json(const char* json, gilbert_config** out);
GILBERT_API gilbert_status gilbert_config_to_json(const gilbert_config* config, char** out);
/* Poisson sample in [x0, x0 + w] x [y0, y0 + h]; the window is recorded. */
GILBERT_API gilbert_status gilbert_config_sample(double x0, double y0, double w, double h, gilbert_process process,
                                                 gilbert_config** out);
GILBERT_API gilbert_status gilbert_config_seed(const gilbert_config* config, size_t index, double* x, double* y,
                                               double* alpha, uint64_t* id);

/* ---- tessellations ---- */

GILBERT_API gilbert_status gilbert_build(const gilbert_config* config, int lexicographic_ties,
                                         gilbert_tessellation** out);
GILBERT_API void gilbert_tessellation_free(gilbert_tessellation* tess);
GILBERT_API size_t gilbert_tessellation_seed_count(const gilbert_tessellation* tess);
/* sign: +1 for the upper branch, -1 for the lower one. */
GILBERT_API gilbert_status gilbert_branch_length(const gilbert_tessellation* tess, size_t index, int sign,
                                                 double* out);
GILBERT_API gilbert_status gilbert_branch_tip(const gilbert_tessellation* tess, size_t index, int sign, double t,
                                              double* x, double* y);

typedef struct gilbert_event {
  double time;
  uint64_t blocked_seed;
  int blocked_sign;
  uint64_t blocker_seed;
  int blocker_sign;
  double blocker_arrival;
  double x;
  double y;
} gilbert_event;

GILBERT_API size_t gilbert_event_count(const gilbert_tessellation* tess);
GILBERT_API gilbert_status gilbert_event_at(const gilbert_tessellation* tess, size_t k, gilbert_event* out);

GILBERT_API gilbert_status gilbert_tessellation_json(const gilbert_tessellation* tess, char** out);
/* Window (x0, y0, w, h) with w, h > 0, or w = h = 0 for the default clip window. */
GILBERT_API gilbert_status gilbert_tessellation_svg(const gilbert_tessellation* tess, double x0, double y0, double w,
                                                    double h, char** out);

/* ---- functionals ----
 * phi: "total-length", "power:a", "threshold:t", "threshold:0+"
 * f:   "const1", "zero", "const:c", "x", "y", "xy", "cos", "cos:kx,ky", "sin:kx,ky"
 */

typedef struct gilbert_xi {
  double xi_plus;
  double xi_minus;
  double radius;
  int rho_hat;
  int certified;
  int resamples;
} gilbert_xi;

/* Whole-plane branch lengths of a point inserted at (x, y). */
GILBERT_API gilbert_status gilbert_whole_plane_xi(double x, double y, gilbert_process process, int m_max,
                                                  gilbert_xi* out);

typedef struct gilbert_measure_info {
  size_t atoms;
  double certified_fraction;
  size_t excluded;
  double value;            /* integral of f, uncertified atoms included */
  double certified_value;  /* certified atoms only */
  double lambda;
} gilbert_measure_info;

/* One empirical measure on [0, sqrt(lambda)]^2; padding < 0 picks the default. */
GILBERT_API gilbert_status gilbert_measure(gilbert_process process, const char* phi, const char* f, double lambda,
                                           double padding, gilbert_measure_info* out);

/* ---- estimators ---- */

typedef struct gilbert_estimate {
  double estimate;
  double std_error;
  size_t n_rep;
  double certified_fraction;
  size_t excluded;
} gilbert_estimate;

GILBERT_API gilbert_status gilbert_estimate_e(gilbert_process process, const char* phi, size_t n_rep, int m_max,
                                              gilbert_estimate* out);
GILBERT_API gilbert_status gilbert_estimate_c0(gilbert_process process, const char* phi, size_t n_rep, int m_max,
                                               gilbert_estimate* out);
GILBERT_API gilbert_status gilbert_estimate_cxy(gilbert_process process, const char* phi, double dx, double dy,
                                                size_t n_rep, int m_max, gilbert_estimate* out);

typedef struct gilbert_tail_fit {
  double slope;
  double intercept;
  double r_squared;
  size_t n_points;
  double rate;
  double prefactor;
  int nonincreasing;
} gilbert_tail_fit;

/* survival_out and std_error_out (nullable) receive n_r values. */
GILBERT_API gilbert_status gilbert_stab_tail(gilbert_process process, const double* r_grid, size_t n_r, size_t n_rep,
                                             int m_max, double* survival_out, double* std_error_out,
                                             double* certified_fraction, gilbert_tail_fit* fit_out);

typedef struct gilbert_variance {
  double estimate;
  double std_error;
  size_t n_rep;
  double certified_fraction;
  double c0;
  double c0_se;
  double integral;
  double integral_se;
  double coarse_estimate;
  int refinement_warning;
  double r_max;
  double truncation_bound;
} gilbert_variance;

/* r_max <= 0: fit a stabilization tail first and truncate where it drops
 * below 1e-3. */
GILBERT_API gilbert_status gilbert_estimate_v(gilbert_process process, const char* phi, double r_max, int n_angles,
                                              int n_radii, size_t n_rep, int m_max, gilbert_variance* out);

/* ---- experiment tables ---- */

typedef struct gilbert_table_row {
  double lambda;
  double estimate;
  double std_error;
  double target;
  size_t n_rep;
  double certified_fraction;
  uint64_t master_seed;
} gilbert_table_row;

GILBERT_API void gilbert_table_free(gilbert_table* table);
GILBERT_API size_t gilbert_table_size(const gilbert_table* table);
GILBERT_API gilbert_status gilbert_table_row_at(const gilbert_table* table, size_t i, gilbert_table_row* out);
GILBERT_API gilbert_status gilbert_table_csv(const gilbert_table* table, char** out);
GILBERT_API gilbert_status gilbert_table_from_csv(const char* csv, gilbert_table** out);

/* target_per_point: E (lln) or V (var) per point; NaN estimates it (lln)
 * or leaves the target column NaN (var). padding < 0 picks the default. */
GILBERT_API gilbert_status gilbert_lln(gilbert_process process, const char* phi, const char* f, const double* lambdas,
                                       size_t n_lambda, size_t n_rep, double padding, double target_per_point,
                                       gilbert_table** out);
GILBERT_API gilbert_status gilbert_var(gilbert_process process, const char* phi, const char* f, const double* lambdas,
                                       size_t n_lambda, size_t n_rep, double padding, double target_per_point,
                                       gilbert_table** out);

typedef struct gilbert_clt_info {
  double ks_statistic;
  double p_value;
  double mean;
  double variance;
  size_t n_rep;
} gilbert_clt_info;

/* standardized_out (nullable) receives n_rep values. */
GILBERT_API gilbert_status gilbert_clt(gilbert_process process, const char* phi, const char* f, double lambda,
                                       size_t n_rep, double padding, gilbert_clt_info* out, double* standardized_out);

GILBERT_API gilbert_status gilbert_ks_normal(const double* samples, size_t n, double* statistic, double* p_value);

typedef struct gilbert_scaling_row {
  double intensity;
  double scaled_e;
  double scaled_e_se;
  double scaled_v;
  double scaled_v_se;
  double lambda;
} gilbert_scaling_row;

typedef struct gilbert_scaling_info {
  double max_z_e;
  double max_z_v;
  int e_consistent;
  int v_consistent;
} gilbert_scaling_info;

/* rows_out receives n_tau rows; process.intensity is ignored. */
GILBERT_API gilbert_status gilbert_scaling(gilbert_process process, const char* phi, const double* intensities,
                                           size_t n_tau, size_t n_rep_e, size_t n_rep_v, double points_per_window,
                                           int m_max, gilbert_scaling_row* rows_out, gilbert_scaling_info* out);

/* ---- files ---- */

GILBERT_API gilbert_status gilbert_write_file(const char* path, const char* content);
GILBERT_API gilbert_status gilbert_read_file(const char* path, char** out);

#ifdef __cplusplus
}
#endif

#endif
