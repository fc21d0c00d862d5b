#ifndef SPARSEDETECT_H
#define SPARSEDETECT_H

/*
 * C interface to the sparsedetect library: design matrices, sparse
 * alternatives, ANOVA / Max / higher-criticism statistics, detection
 * boundaries and Monte Carlo risk experiments.
 *
 * Every fallible call returns an sd_status. On failure a description of the
 * last error on the calling thread is available from sd_last_error().
 * Objects are opaque handles released with the matching *_free function.
 * Strings returned through char** out-parameters are owned by the caller and
 * released with sd_string_free.
 */

#include <stddef.h>
#include <stdint.h>

#if defined(SPARSEDETECT_BUILDING_LIBRARY)
#define SD_API __attribute__((visibility("default")))
#else
#define SD_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sd_status {
  SD_OK = 0,
  SD_ERR_PARAMETER = 1,
  SD_ERR_DOMAIN = 2,
  SD_ERR_DIMENSION = 3,
  SD_ERR_EMPTY_GRID = 4,
  SD_ERR_PARSE = 5,
  SD_ERR_IO = 6,
  SD_ERR_RUNTIME = 7,
  SD_ERR_NULL_ARGUMENT = 8
} sd_status;

typedef enum sd_boundary_flag {
  SD_BOUNDARY_INTERIOR = 0,
  SD_BOUNDARY_DOMAIN_EDGE = 1,
  SD_BOUNDARY_INFINITE = 2
} sd_boundary_flag;

typedef struct sd_design sd_design;
typedef struct sd_signal sd_signal;
typedef struct sd_experiment sd_experiment;
typedef struct sd_results sd_results;

SD_API const char* sd_version(void);
SD_API const char* sd_status_string(sd_status status);
/* Message of the most recent failure on this thread ("" if none). */
SD_API const char* sd_last_error(void);
SD_API void sd_string_free(char* s);

/* ---- boundaries ------------------------------------------------------- */

SD_API sd_status sd_rho_star(double alpha, double* out);
SD_API sd_status sd_rho_max(double alpha, double* out);
SD_API sd_status sd_rho_rand(double alpha, double* out, sd_boundary_flag* flag);
/* CSV over alpha_min, alpha_min + step, ... <= alpha_max. Pass step <= 0
 * together with has_step = 0 for the single-point table alpha_min == alpha_max. */
SD_API sd_status sd_boundary_table_csv(double alpha_min, double alpha_max, double step, int has_step,
                                       char** csv);
SD_API sd_status sd_anova_power_scaling(const sd_design* x, const double* beta, size_t p, double* out);

/* ---- designs ---------------------------------------------------------- */

/* spec is the text form "variant;key=value;...", e.g. "gaussian;n=500;p=2000". */
SD_API sd_status sd_design_build(const char* spec, uint64_t seed, sd_design** out);
SD_API sd_status sd_design_read_csv(const char* path, sd_design** out);
SD_API sd_status sd_design_write_csv(const sd_design* x, const char* path);
SD_API void sd_design_free(sd_design* x);
SD_API sd_status sd_design_dims(const sd_design* x, size_t* n, size_t* p);
SD_API sd_status sd_design_spec(const sd_design* x, char** spec);
/* Column-major n*p values. */
SD_API sd_status sd_design_values(const sd_design* x, double* out, size_t len);
/* Row-major p*p Gram matrix. */
SD_API sd_status sd_design_gram(const sd_design* x, double* out, size_t len);
/* strong_delta <= 0 selects the default 1/log p. */
SD_API sd_status sd_design_coherence(const sd_design* x, double gamma, double strong_delta, double* max_offdiag,
                                     size_t* delta_observed, int* strong_ok);
SD_API sd_status sd_coherence_lower_bound(size_t n, size_t p, double* out);

/* ---- alternatives ----------------------------------------------------- */

SD_API sd_status sd_sparsity_from_alpha(size_t p, double alpha, size_t* out);
SD_API sd_status sd_amplitude_from_r(size_t p, double r, double* out);
/* model "SFEM" (signal = r, or amplitude when signal_is_amplitude != 0) or
 * "SREM" (signal = tau). */
SD_API sd_status sd_signal_sample(const char* model, size_t p, double alpha, double signal,
                                  int signal_is_amplitude, uint64_t seed, sd_signal** out);
SD_API void sd_signal_free(sd_signal* s);
SD_API sd_status sd_signal_values(const sd_signal* s, double* beta, size_t p);
SD_API sd_status sd_signal_support(const sd_signal* s, size_t* indices, size_t capacity, size_t* count);
SD_API sd_status sd_signal_write_csv(const sd_signal* s, const char* path);
/* y = X beta + sigma z; y has length n. */
SD_API sd_status sd_synthesize(const sd_design* x, const sd_signal* s, double sigma, uint64_t seed, double* y,
                               size_t n);

/* ---- statistics ------------------------------------------------------- */

SD_API double sd_gaussian_survival(double t);
SD_API sd_status sd_stat_anova(const sd_design* x, const double* y, size_t n, double* value);
/* index is 0-based */
SD_API sd_status sd_stat_max(const sd_design* x, const double* y, size_t n, double* value, size_t* index);
SD_API sd_status sd_stat_hc_continuous(const double* v, size_t p, double* value, double* t_at_max);
SD_API sd_status sd_stat_hc_discretized(const double* v, size_t p, double s, double* value, double* t_at_max);
SD_API sd_status sd_hc_grid_start(double alpha, size_t p, double* s);
SD_API sd_status sd_estimate_sigma(const double* y, size_t n, double* sigma_hat, int* degenerate);

/* ---- experiments ------------------------------------------------------ */

SD_API sd_status sd_experiment_from_json(const char* json, sd_experiment** out);
SD_API sd_status sd_preset_count(const char* name, size_t* count);
SD_API sd_status sd_preset_experiment(const char* name, size_t index, sd_experiment** out);
SD_API sd_status sd_preset_description(const char* name, char** text);
SD_API void sd_experiment_free(sd_experiment* e);
SD_API sd_status sd_experiment_set_seed(sd_experiment* e, uint64_t seed);
SD_API sd_status sd_experiment_set_trials(sd_experiment* e, size_t trials);
SD_API sd_status sd_experiment_set_threads(sd_experiment* e, unsigned threads);
SD_API sd_status sd_experiment_set_plot(sd_experiment* e, int plot);
SD_API sd_status sd_experiment_plot(const sd_experiment* e, int* plot);
SD_API sd_status sd_experiment_cell_count(const sd_experiment* e, size_t* count);
/* Resolved configuration as JSON (accepted back by sd_experiment_from_json). */
SD_API sd_status sd_experiment_to_json(const sd_experiment* e, char** json);
SD_API sd_status sd_experiment_run(const sd_experiment* e, sd_results** out);

SD_API void sd_results_free(sd_results* r);
SD_API sd_status sd_results_count(const sd_results* r, size_t* count);
SD_API sd_status sd_results_risk(const sd_results* r, size_t index, double* best_risk, double* best_threshold,
                                 double* std_err);
SD_API const char* sd_results_csv_header(void);
/* Data rows only (no header), newline terminated. */
SD_API sd_status sd_results_csv(const sd_results* r, char** csv);
SD_API sd_status sd_results_plot_count(const sd_results* r, size_t* count);
SD_API sd_status sd_results_plot(const sd_results* r, size_t index, char** file_name, char** svg);
/* Newline-separated descriptions of monotone-power violations ("" if none). */
SD_API sd_status sd_results_monotonicity_report(const sd_results* r, char** text);

#ifdef __cplusplus
}
#endif

#endif /* SPARSEDETECT_H */
