/*
   Copyright 2026 The spotvol Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#ifndef SPOTVOL_SPOTVOL_H
#define SPOTVOL_SPOTVOL_H

/* C interface of libspotvol. Objects are opaque handles created by
 * *_create / *_run functions and released by the matching *_free. Every
 * fallible call returns a spotvol_status; on failure the thread-local
 * message is available from spotvol_last_error(). Strings returned through
 * char** are heap-allocated and released with spotvol_string_free. */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(SPOTVOL_BUILDING_LIBRARY)
#    define SPOTVOL_API __declspec(dllexport)
#  else
#    define SPOTVOL_API __declspec(dllimport)
#  endif
#else
#  define SPOTVOL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum spotvol_status {
    SPOTVOL_OK = 0,
    SPOTVOL_E_DOMAIN = 1,
    SPOTVOL_E_CONFIG = 2,
    SPOTVOL_E_WINDOW = 3,
    SPOTVOL_E_INGEST = 4,
    SPOTVOL_E_DEGENERATE = 5,
    SPOTVOL_E_IO = 6,
    SPOTVOL_E_INVALID_ARGUMENT = 7,
    SPOTVOL_E_INTERNAL = 8
} spotvol_status;

typedef enum spotvol_format { SPOTVOL_FORMAT_CSV = 0, SPOTVOL_FORMAT_JSON = 1 } spotvol_format;

typedef enum spotvol_method {
    SPOTVOL_NORMAL_ONE_SIDED = 0,
    SPOTVOL_EDGEWORTH_ONE_SIDED = 1,
    SPOTVOL_NORMAL_TWO_SIDED = 2,
    SPOTVOL_EDGEWORTH_TWO_SIDED = 3,
    SPOTVOL_S_NORMAL_ONE_SIDED = 4,
    SPOTVOL_S_EDGEWORTH_ONE_SIDED = 5,
    SPOTVOL_S_NORMAL_TWO_SIDED = 6,
    SPOTVOL_S_EDGEWORTH_TWO_SIDED = 7
} spotvol_method;

typedef struct spotvol_kv {
    const char* key;
    const char* value;
} spotvol_kv;

typedef struct spotvol_path spotvol_path;
typedef struct spotvol_model spotvol_model;
typedef struct spotvol_experiment spotvol_experiment;
typedef struct spotvol_report spotvol_report;
typedef struct spotvol_audit spotvol_audit;

typedef struct spotvol_estimate {
    double value;
    double tau;
    int64_t kn;
    double delta_n;
    int64_t window_start;
    int64_t window_end;
} spotvol_estimate;

typedef struct spotvol_interval_options {
    int paper_constants; /* nonzero: rounded 1.645 / 1.96 quantiles */
    int q2_as_printed;   /* nonzero: +4/9 H5 in the kurtosis correction */
} spotvol_interval_options;

typedef struct spotvol_interval {
    double lower;
    double upper;
    double level;
    spotvol_method method;
    int64_t kn;
    int lower_clamped;
} spotvol_interval;

typedef struct spotvol_estimate_record {
    const char* estimator;
    spotvol_estimate estimate;
    spotvol_interval interval;
} spotvol_estimate_record;

typedef struct spotvol_coverage_cell {
    const char* model;  /* static storage */
    int64_t n;
    double tau;
    spotvol_method method;
    const char* method_name; /* static storage */
    int64_t kn;
    int64_t trials;
    int64_t hits;
    double coverage;
    double mc_std_error;
} spotvol_coverage_cell;

typedef struct spotvol_audit_row {
    const char* quantity; /* valid while the audit handle lives */
    double empirical;
    double mc_std_error;
    double prediction;
    double exact;
} spotvol_audit_row;

/* Library information and errors. */
SPOTVOL_API const char* spotvol_version(void);
SPOTVOL_API const char* spotvol_rng_algorithm(void);
SPOTVOL_API const char* spotvol_status_name(spotvol_status status);
SPOTVOL_API const char* spotvol_last_error(void);
SPOTVOL_API void spotvol_string_free(char* s);

SPOTVOL_API spotvol_status spotvol_method_from_name(const char* name, spotvol_method* out);
SPOTVOL_API const char* spotvol_method_name(spotvol_method method);

/* Price paths. */
SPOTVOL_API spotvol_status spotvol_path_create(const double* log_prices, int64_t count,
                                               double delta_n, double horizon,
                                               spotvol_path** out);
SPOTVOL_API spotvol_status spotvol_path_read_csv(const char* file, spotvol_path** out);
SPOTVOL_API spotvol_status spotvol_path_parse_csv(const char* text, spotvol_path** out);
SPOTVOL_API void spotvol_path_free(spotvol_path* path);
SPOTVOL_API int64_t spotvol_path_size(const spotvol_path* path);
SPOTVOL_API double spotvol_path_delta(const spotvol_path* path);
SPOTVOL_API double spotvol_path_horizon(const spotvol_path* path);
/* Copies the n + 1 log-prices; capacity must be at least n + 1. */
SPOTVOL_API spotvol_status spotvol_path_log_prices(const spotvol_path* path, double* out,
                                                   int64_t capacity);
SPOTVOL_API spotvol_status spotvol_path_render(const spotvol_path* path, spotvol_format format,
                                               const spotvol_kv* metadata, size_t metadata_count,
                                               char** out);

/* Models: "model1", "model2" or "constant_vol". Parameters are the model's
 * named coefficients plus "drift", "x0", "v0" and "rho". */
SPOTVOL_API spotvol_status spotvol_model_create(const char* kind, spotvol_model** out);
SPOTVOL_API spotvol_status spotvol_model_set(spotvol_model* model, const char* name,
                                             double value);
SPOTVOL_API spotvol_status spotvol_model_get(const spotvol_model* model, const char* name,
                                             double* out);
SPOTVOL_API const char* spotvol_model_kind(const spotvol_model* model);
SPOTVOL_API void spotvol_model_free(spotvol_model* model);

/* Euler simulation; true_spot_vol (nullable) receives n + 1 values. */
SPOTVOL_API spotvol_status spotvol_simulate(const spotvol_model* model, int64_t n,
                                            double horizon, int refinement, uint64_t seed,
                                            spotvol_path** path_out, double* true_spot_vol);

/* Estimation and intervals. */
SPOTVOL_API spotvol_status spotvol_choose_kn(int64_t n, double c, double exponent, int64_t* out);
SPOTVOL_API spotvol_status spotvol_estimate_uniform(const spotvol_path* path, double tau,
                                                    int64_t kn, spotvol_estimate* out);
/* kernel: "uniform", "epanechnikov", "quartic" or "triweight". */
SPOTVOL_API spotvol_status spotvol_estimate_kernel(const spotvol_path* path, double tau,
                                                   double bandwidth, const char* kernel,
                                                   spotvol_estimate* out);
SPOTVOL_API spotvol_status spotvol_interval_build(const spotvol_estimate* estimate,
                                                  spotvol_method method, double level,
                                                  const spotvol_interval_options* options,
                                                  spotvol_interval* out);
SPOTVOL_API spotvol_status spotvol_render_estimates(const spotvol_estimate_record* records,
                                                    size_t count, spotvol_format format,
                                                    const spotvol_kv* metadata,
                                                    size_t metadata_count, char** out);

/* Coverage experiments. The experiment copies the model. */
SPOTVOL_API spotvol_status spotvol_experiment_create(const spotvol_model* model,
                                                     spotvol_experiment** out);
SPOTVOL_API void spotvol_experiment_free(spotvol_experiment* experiment);
SPOTVOL_API spotvol_status spotvol_experiment_set_n_values(spotvol_experiment* e,
                                                           const int64_t* values, size_t count);
SPOTVOL_API spotvol_status spotvol_experiment_set_tau_values(spotvol_experiment* e,
                                                             const double* values, size_t count);
SPOTVOL_API spotvol_status spotvol_experiment_set_methods(spotvol_experiment* e,
                                                          const spotvol_method* methods,
                                                          size_t count);
SPOTVOL_API spotvol_status spotvol_experiment_set_kn_rule(spotvol_experiment* e, double c,
                                                          double exponent);
/* kn <= 0 clears a fixed kn. */
SPOTVOL_API spotvol_status spotvol_experiment_set_fixed_kn(spotvol_experiment* e, int64_t kn);
SPOTVOL_API spotvol_status spotvol_experiment_set_level(spotvol_experiment* e, double level);
SPOTVOL_API spotvol_status spotvol_experiment_set_replications(spotvol_experiment* e,
                                                               int64_t replications);
SPOTVOL_API spotvol_status spotvol_experiment_set_seed(spotvol_experiment* e, uint64_t seed);
SPOTVOL_API spotvol_status spotvol_experiment_set_refinement(spotvol_experiment* e,
                                                             int refinement);
SPOTVOL_API spotvol_status spotvol_experiment_set_horizon(spotvol_experiment* e, double horizon);
SPOTVOL_API spotvol_status spotvol_experiment_set_options(spotvol_experiment* e,
                                                          const spotvol_interval_options* options);
/* 0 selects the default thread count. */
SPOTVOL_API spotvol_status spotvol_experiment_set_threads(spotvol_experiment* e, int threads);
SPOTVOL_API spotvol_status spotvol_experiment_set_common_random_numbers(spotvol_experiment* e,
                                                                        int enabled);
SPOTVOL_API spotvol_status spotvol_experiment_validate(const spotvol_experiment* e);

SPOTVOL_API spotvol_status spotvol_coverage_run(const spotvol_experiment* e,
                                                spotvol_report** out);
SPOTVOL_API size_t spotvol_report_cell_count(const spotvol_report* report);
SPOTVOL_API spotvol_status spotvol_report_cell(const spotvol_report* report, size_t index,
                                               spotvol_coverage_cell* out);
SPOTVOL_API int spotvol_report_common_random_numbers(const spotvol_report* report);
SPOTVOL_API spotvol_status spotvol_report_render(const spotvol_report* report,
                                                 spotvol_format format,
                                                 const spotvol_kv* metadata,
                                                 size_t metadata_count, char** out);
SPOTVOL_API void spotvol_report_free(spotvol_report* report);

/* Exact constant-volatility coverage; degenerate (nullable) is set to 1
 * when the interval has no effective lower bound. */
SPOTVOL_API spotvol_status spotvol_analytic_coverage(int64_t kn, double level,
                                                     spotvol_method method,
                                                     const spotvol_interval_options* options,
                                                     double* coverage, int* degenerate);

/* Cumulant audit under constant volatility. */
SPOTVOL_API spotvol_status spotvol_audit_run(int64_t kn, int64_t replications, uint64_t seed,
                                             int threads, spotvol_audit** out);
SPOTVOL_API size_t spotvol_audit_row_count(const spotvol_audit* audit);
SPOTVOL_API spotvol_status spotvol_audit_row_at(const spotvol_audit* audit, size_t index,
                                                spotvol_audit_row* out);
SPOTVOL_API spotvol_status spotvol_audit_render(const spotvol_audit* audit,
                                                spotvol_format format,
                                                const spotvol_kv* metadata,
                                                size_t metadata_count, char** out);
SPOTVOL_API void spotvol_audit_free(spotvol_audit* audit);

#ifdef __cplusplus
}
#endif

#endif /* SPOTVOL_SPOTVOL_H */
