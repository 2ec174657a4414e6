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

#include "spotvol/spotvol.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <sstream>
#include <string>

#include "spotvol/error.hpp"
#include "spotvol/harness.hpp"
#include "spotvol/io.hpp"
#include "spotvol/rng.hpp"

struct spotvol_path {
    spotvol::PricePath path;
};

struct spotvol_model {
    spotvol::ModelSpec spec;
};

struct spotvol_experiment {
    spotvol::ExperimentConfig config;
};

struct spotvol_report {
    spotvol::CoverageReport report;
};

struct spotvol_audit {
    spotvol::AuditReport report;
};

namespace {

thread_local std::string g_last_error;

spotvol_status status_of(spotvol::ErrorCode code) {
    switch (code) {
        case spotvol::ErrorCode::domain: return SPOTVOL_E_DOMAIN;
        case spotvol::ErrorCode::config: return SPOTVOL_E_CONFIG;
        case spotvol::ErrorCode::window: return SPOTVOL_E_WINDOW;
        case spotvol::ErrorCode::ingest: return SPOTVOL_E_INGEST;
        case spotvol::ErrorCode::degenerate: return SPOTVOL_E_DEGENERATE;
        case spotvol::ErrorCode::io: return SPOTVOL_E_IO;
    }
    return SPOTVOL_E_INTERNAL;
}

template <class F>
spotvol_status guarded(F&& f) {
    try {
        g_last_error.clear();
        f();
        return SPOTVOL_OK;
    } catch (const spotvol::Error& e) {
        g_last_error = e.what();
        return status_of(e.code());
    } catch (const std::bad_alloc&) {
        g_last_error = "out of memory";
        return SPOTVOL_E_INTERNAL;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return SPOTVOL_E_INTERNAL;
    } catch (...) {
        g_last_error = "unknown error";
        return SPOTVOL_E_INTERNAL;
    }
}

spotvol_status invalid(const char* what) {
    g_last_error = what;
    return SPOTVOL_E_INVALID_ARGUMENT;
}

char* to_c_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

spotvol::Metadata to_metadata(const spotvol_kv* kv, size_t count) {
    spotvol::Metadata out;
    if (count > 0 && !kv) throw spotvol::ConfigError("metadata pointer is null");
    for (size_t i = 0; i < count; ++i) {
        if (!kv[i].key || !kv[i].value) throw spotvol::ConfigError("metadata entry is null");
        out.emplace_back(kv[i].key, kv[i].value);
    }
    return out;
}

spotvol::OutputFormat to_format(spotvol_format f) {
    switch (f) {
        case SPOTVOL_FORMAT_CSV: return spotvol::OutputFormat::csv;
        case SPOTVOL_FORMAT_JSON: return spotvol::OutputFormat::json;
    }
    throw spotvol::ConfigError("unknown output format");
}

spotvol::CoverageMethod to_coverage_method(spotvol_method m) {
    if (m < SPOTVOL_NORMAL_ONE_SIDED || m > SPOTVOL_S_EDGEWORTH_TWO_SIDED) {
        throw spotvol::ConfigError("unknown method");
    }
    return static_cast<spotvol::CoverageMethod>(m);
}

spotvol::IntervalMethod to_interval_method(spotvol_method m) {
    auto im = spotvol::interval_method_of(to_coverage_method(m));
    if (!im) throw spotvol::ConfigError("S diagnostics are not interval methods");
    return *im;
}

spotvol::IntervalOptions to_options(const spotvol_interval_options* o) {
    spotvol::IntervalOptions out;
    if (o) {
        out.quantiles = o->paper_constants ? spotvol::QuantileConvention::paper
                                           : spotvol::QuantileConvention::exact;
        out.q2_form = o->q2_as_printed ? spotvol::Q2Form::as_printed : spotvol::Q2Form::derived;
    }
    return out;
}

spotvol_estimate from_estimate(const spotvol::SpotVolEstimate& e) {
    return {e.value, e.tau, e.kn, e.delta_n, e.window_start, e.window_end};
}

spotvol::SpotVolEstimate to_estimate(const spotvol_estimate& e) {
    spotvol::SpotVolEstimate out;
    out.value = e.value;
    out.tau = e.tau;
    out.kn = e.kn;
    out.delta_n = e.delta_n;
    out.window_start = e.window_start;
    out.window_end = e.window_end;
    return out;
}

spotvol_interval from_interval(const spotvol::IntervalResult& r) {
    spotvol_interval out;
    out.lower = r.lower;
    out.upper = r.upper;
    out.level = r.nominal_level.value();
    out.method = static_cast<spotvol_method>(spotvol::to_coverage_method(r.method));
    out.kn = r.kn;
    out.lower_clamped = r.lower_clamped ? 1 : 0;
    return out;
}

} // namespace

extern "C" {

const char* spotvol_version(void) { return SPOTVOL_VERSION; }

const char* spotvol_rng_algorithm(void) { return spotvol::Philox4x64::algorithm_name(); }

const char* spotvol_status_name(spotvol_status status) {
    switch (status) {
        case SPOTVOL_OK: return "ok";
        case SPOTVOL_E_DOMAIN: return "domain";
        case SPOTVOL_E_CONFIG: return "config";
        case SPOTVOL_E_WINDOW: return "window";
        case SPOTVOL_E_INGEST: return "ingest";
        case SPOTVOL_E_DEGENERATE: return "degenerate";
        case SPOTVOL_E_IO: return "io";
        case SPOTVOL_E_INVALID_ARGUMENT: return "invalid_argument";
        case SPOTVOL_E_INTERNAL: return "internal";
    }
    return "unknown";
}

const char* spotvol_last_error(void) { return g_last_error.c_str(); }

void spotvol_string_free(char* s) { std::free(s); }

spotvol_status spotvol_method_from_name(const char* name, spotvol_method* out) {
    if (!name || !out) return invalid("null argument");
    return guarded([&] {
        *out = static_cast<spotvol_method>(spotvol::coverage_method_from_string(name));
    });
}

const char* spotvol_method_name(spotvol_method method) {
    if (method < SPOTVOL_NORMAL_ONE_SIDED || method > SPOTVOL_S_EDGEWORTH_TWO_SIDED) {
        return "unknown";
    }
    return spotvol::to_string(static_cast<spotvol::CoverageMethod>(method));
}

spotvol_status spotvol_path_create(const double* log_prices, int64_t count, double delta_n,
                                   double horizon, spotvol_path** out) {
    if (!out || (!log_prices && count > 0)) return invalid("null argument");
    if (count < 0) return invalid("negative count");
    return guarded([&] {
        std::vector<double> x(log_prices, log_prices + count);
        *out = new spotvol_path{spotvol::PricePath(std::move(x), delta_n, horizon)};
    });
}

spotvol_status spotvol_path_read_csv(const char* file, spotvol_path** out) {
    if (!file || !out) return invalid("null argument");
    return guarded([&] { *out = new spotvol_path{spotvol::read_price_csv(file)}; });
}

spotvol_status spotvol_path_parse_csv(const char* text, spotvol_path** out) {
    if (!text || !out) return invalid("null argument");
    return guarded([&] {
        std::istringstream in(text);
        *out = new spotvol_path{spotvol::parse_price_csv(in)};
    });
}

void spotvol_path_free(spotvol_path* path) { delete path; }

int64_t spotvol_path_size(const spotvol_path* path) { return path ? path->path.size() : 0; }

double spotvol_path_delta(const spotvol_path* path) { return path ? path->path.delta_n() : 0.0; }

double spotvol_path_horizon(const spotvol_path* path) {
    return path ? path->path.horizon() : 0.0;
}

spotvol_status spotvol_path_log_prices(const spotvol_path* path, double* out, int64_t capacity) {
    if (!path || !out) return invalid("null argument");
    const auto x = path->path.log_prices();
    if (capacity < static_cast<int64_t>(x.size())) return invalid("buffer too small");
    std::memcpy(out, x.data(), x.size() * sizeof(double));
    return SPOTVOL_OK;
}

spotvol_status spotvol_path_render(const spotvol_path* path, spotvol_format format,
                                   const spotvol_kv* metadata, size_t metadata_count,
                                   char** out) {
    if (!path || !out) return invalid("null argument");
    return guarded([&] {
        *out = to_c_string(spotvol::render_price_path(path->path, to_format(format),
                                                      to_metadata(metadata, metadata_count)));
    });
}

spotvol_status spotvol_model_create(const char* kind, spotvol_model** out) {
    if (!kind || !out) return invalid("null argument");
    return guarded([&] {
        switch (spotvol::model_kind_from_string(kind)) {
            case spotvol::ModelKind::model1: *out = new spotvol_model{spotvol::default_model1()}; break;
            case spotvol::ModelKind::model2: *out = new spotvol_model{spotvol::default_model2()}; break;
            case spotvol::ModelKind::constant_vol:
                *out = new spotvol_model{spotvol::constant_vol_model(1.0)};
                break;
        }
    });
}

spotvol_status spotvol_model_set(spotvol_model* model, const char* name, double value) {
    if (!model || !name) return invalid("null argument");
    return guarded([&] {
        const std::string key = name;
        auto& spec = model->spec;
        if (key == "drift") spec.drift_b = value;
        else if (key == "x0") spec.x0 = value;
        else if (key == "v0") spec.v0 = value;
        else if (key == "rho") spec.rho = value;
        else if (spec.params.count(key)) spec.params[key] = value;
        else {
            throw spotvol::ConfigError(std::string("model ") + spotvol::to_string(spec.kind) +
                                       " has no parameter '" + key + "'");
        }
    });
}

spotvol_status spotvol_model_get(const spotvol_model* model, const char* name, double* out) {
    if (!model || !name || !out) return invalid("null argument");
    return guarded([&] {
        const std::string key = name;
        const auto& spec = model->spec;
        if (key == "drift") *out = spec.drift_b;
        else if (key == "x0") *out = spec.x0;
        else if (key == "v0") *out = spec.v0;
        else if (key == "rho") *out = spec.rho;
        else *out = spec.param(key);
    });
}

const char* spotvol_model_kind(const spotvol_model* model) {
    return model ? spotvol::to_string(model->spec.kind) : "unknown";
}

void spotvol_model_free(spotvol_model* model) { delete model; }

spotvol_status spotvol_simulate(const spotvol_model* model, int64_t n, double horizon,
                                int refinement, uint64_t seed, spotvol_path** path_out,
                                double* true_spot_vol) {
    if (!model || !path_out) return invalid("null argument");
    return guarded([&] {
        auto sim = spotvol::simulate(model->spec, n, horizon, refinement, seed);
        if (true_spot_vol) {
            std::memcpy(true_spot_vol, sim.true_spot_vol.data(),
                        sim.true_spot_vol.size() * sizeof(double));
        }
        *path_out = new spotvol_path{std::move(sim.path)};
    });
}

spotvol_status spotvol_choose_kn(int64_t n, double c, double exponent, int64_t* out) {
    if (!out) return invalid("null argument");
    return guarded([&] { *out = spotvol::choose_kn(n, c, exponent); });
}

spotvol_status spotvol_estimate_uniform(const spotvol_path* path, double tau, int64_t kn,
                                        spotvol_estimate* out) {
    if (!path || !out) return invalid("null argument");
    return guarded([&] { *out = from_estimate(spotvol::estimate_uniform(path->path, tau, kn)); });
}

spotvol_status spotvol_estimate_kernel(const spotvol_path* path, double tau, double bandwidth,
                                       const char* kernel, spotvol_estimate* out) {
    if (!path || !kernel || !out) return invalid("null argument");
    return guarded([&] {
        *out = from_estimate(spotvol::estimate_kernel(path->path, tau, bandwidth,
                                                      spotvol::KernelSpec::from_name(kernel)));
    });
}

spotvol_status spotvol_interval_build(const spotvol_estimate* estimate, spotvol_method method,
                                      double level, const spotvol_interval_options* options,
                                      spotvol_interval* out) {
    if (!estimate || !out) return invalid("null argument");
    return guarded([&] {
        *out = from_interval(spotvol::build_interval(to_interval_method(method),
                                                     to_estimate(*estimate),
                                                     spotvol::Probability(level),
                                                     to_options(options)));
    });
}

spotvol_status spotvol_render_estimates(const spotvol_estimate_record* records, size_t count,
                                        spotvol_format format, const spotvol_kv* metadata,
                                        size_t metadata_count, char** out) {
    if ((!records && count > 0) || !out) return invalid("null argument");
    return guarded([&] {
        std::vector<spotvol::EstimateRecord> recs;
        recs.reserve(count);
        for (size_t i = 0; i < count; ++i) {
            const auto& r = records[i];
            spotvol::EstimateRecord rec;
            rec.estimator = r.estimator ? r.estimator : "uniform";
            rec.estimate = to_estimate(r.estimate);
            rec.interval.lower = r.interval.lower;
            rec.interval.upper = r.interval.upper;
            rec.interval.nominal_level = spotvol::Probability(r.interval.level);
            rec.interval.method = to_interval_method(r.interval.method);
            rec.interval.kn = r.interval.kn;
            rec.interval.lower_clamped = r.interval.lower_clamped != 0;
            recs.push_back(std::move(rec));
        }
        *out = to_c_string(spotvol::render_estimates(recs, to_format(format),
                                                     to_metadata(metadata, metadata_count)));
    });
}

spotvol_status spotvol_experiment_create(const spotvol_model* model, spotvol_experiment** out) {
    if (!model || !out) return invalid("null argument");
    return guarded([&] {
        auto* e = new spotvol_experiment{};
        e->config.model = model->spec;
        *out = e;
    });
}

void spotvol_experiment_free(spotvol_experiment* experiment) { delete experiment; }

spotvol_status spotvol_experiment_set_n_values(spotvol_experiment* e, const int64_t* values,
                                               size_t count) {
    if (!e || (!values && count > 0)) return invalid("null argument");
    e->config.n_values.assign(values, values + count);
    return SPOTVOL_OK;
}

spotvol_status spotvol_experiment_set_tau_values(spotvol_experiment* e, const double* values,
                                                 size_t count) {
    if (!e || (!values && count > 0)) return invalid("null argument");
    e->config.tau_values.assign(values, values + count);
    return SPOTVOL_OK;
}

spotvol_status spotvol_experiment_set_methods(spotvol_experiment* e,
                                              const spotvol_method* methods, size_t count) {
    if (!e || (!methods && count > 0)) return invalid("null argument");
    return guarded([&] {
        std::vector<spotvol::CoverageMethod> out;
        for (size_t i = 0; i < count; ++i) out.push_back(to_coverage_method(methods[i]));
        e->config.methods = std::move(out);
    });
}

spotvol_status spotvol_experiment_set_kn_rule(spotvol_experiment* e, double c, double exponent) {
    if (!e) return invalid("null argument");
    e->config.kn_rule = {c, exponent};
    return SPOTVOL_OK;
}

spotvol_status spotvol_experiment_set_fixed_kn(spotvol_experiment* e, int64_t kn) {
    if (!e) return invalid("null argument");
    if (kn > 0) e->config.fixed_kn = kn;
    else e->config.fixed_kn.reset();
    return SPOTVOL_OK;
}

spotvol_status spotvol_experiment_set_level(spotvol_experiment* e, double level) {
    if (!e) return invalid("null argument");
    e->config.level = level;
    return SPOTVOL_OK;
}

spotvol_status spotvol_experiment_set_replications(spotvol_experiment* e, int64_t replications) {
    if (!e) return invalid("null argument");
    e->config.replications = replications;
    return SPOTVOL_OK;
}

spotvol_status spotvol_experiment_set_seed(spotvol_experiment* e, uint64_t seed) {
    if (!e) return invalid("null argument");
    e->config.base_seed = seed;
    return SPOTVOL_OK;
}

spotvol_status spotvol_experiment_set_refinement(spotvol_experiment* e, int refinement) {
    if (!e) return invalid("null argument");
    e->config.refinement = refinement;
    return SPOTVOL_OK;
}

spotvol_status spotvol_experiment_set_horizon(spotvol_experiment* e, double horizon) {
    if (!e) return invalid("null argument");
    e->config.horizon = horizon;
    return SPOTVOL_OK;
}

spotvol_status spotvol_experiment_set_options(spotvol_experiment* e,
                                              const spotvol_interval_options* options) {
    if (!e) return invalid("null argument");
    const auto o = to_options(options);
    e->config.paper_constants = o.quantiles == spotvol::QuantileConvention::paper;
    e->config.q2_form = o.q2_form;
    return SPOTVOL_OK;
}

spotvol_status spotvol_experiment_set_threads(spotvol_experiment* e, int threads) {
    if (!e) return invalid("null argument");
    e->config.threads = threads;
    return SPOTVOL_OK;
}

spotvol_status spotvol_experiment_set_common_random_numbers(spotvol_experiment* e, int enabled) {
    if (!e) return invalid("null argument");
    e->config.common_random_numbers = enabled != 0;
    return SPOTVOL_OK;
}

spotvol_status spotvol_experiment_validate(const spotvol_experiment* e) {
    if (!e) return invalid("null argument");
    return guarded([&] { e->config.validate(); });
}

spotvol_status spotvol_coverage_run(const spotvol_experiment* e, spotvol_report** out) {
    if (!e || !out) return invalid("null argument");
    return guarded([&] { *out = new spotvol_report{spotvol::run_coverage(e->config)}; });
}

size_t spotvol_report_cell_count(const spotvol_report* report) {
    return report ? report->report.cells.size() : 0;
}

spotvol_status spotvol_report_cell(const spotvol_report* report, size_t index,
                                   spotvol_coverage_cell* out) {
    if (!report || !out) return invalid("null argument");
    if (index >= report->report.cells.size()) return invalid("cell index out of range");
    const auto& c = report->report.cells[index];
    out->model = c.model == "model1" ? "model1" : c.model == "model2" ? "model2" : "constant_vol";
    out->n = c.n;
    out->tau = c.tau;
    out->method = static_cast<spotvol_method>(c.method);
    out->method_name = spotvol::to_string(c.method);
    out->kn = c.kn;
    out->trials = c.trials;
    out->hits = c.hits;
    out->coverage = c.coverage();
    out->mc_std_error = c.mc_std_error();
    return SPOTVOL_OK;
}

int spotvol_report_common_random_numbers(const spotvol_report* report) {
    return report && report->report.common_random_numbers ? 1 : 0;
}

spotvol_status spotvol_report_render(const spotvol_report* report, spotvol_format format,
                                     const spotvol_kv* metadata, size_t metadata_count,
                                     char** out) {
    if (!report || !out) return invalid("null argument");
    return guarded([&] {
        *out = to_c_string(spotvol::render_coverage(report->report, to_format(format),
                                                    to_metadata(metadata, metadata_count)));
    });
}

void spotvol_report_free(spotvol_report* report) { delete report; }

spotvol_status spotvol_analytic_coverage(int64_t kn, double level, spotvol_method method,
                                         const spotvol_interval_options* options,
                                         double* coverage, int* degenerate) {
    if (!coverage) return invalid("null argument");
    return guarded([&] {
        const auto r = spotvol::analytic_coverage_constant_vol(
            kn, spotvol::Probability(level), to_coverage_method(method), to_options(options));
        *coverage = r.coverage.value();
        if (degenerate) *degenerate = r.degenerate ? 1 : 0;
    });
}

spotvol_status spotvol_audit_run(int64_t kn, int64_t replications, uint64_t seed, int threads,
                                 spotvol_audit** out) {
    if (!out) return invalid("null argument");
    return guarded([&] {
        *out = new spotvol_audit{spotvol::cumulant_audit(kn, replications, seed, threads)};
    });
}

size_t spotvol_audit_row_count(const spotvol_audit* audit) {
    return audit ? audit->report.rows.size() : 0;
}

spotvol_status spotvol_audit_row_at(const spotvol_audit* audit, size_t index,
                                    spotvol_audit_row* out) {
    if (!audit || !out) return invalid("null argument");
    if (index >= audit->report.rows.size()) return invalid("row index out of range");
    const auto& r = audit->report.rows[index];
    *out = {r.quantity.c_str(), r.empirical, r.mc_std_error, r.prediction, r.exact};
    return SPOTVOL_OK;
}

spotvol_status spotvol_audit_render(const spotvol_audit* audit, spotvol_format format,
                                    const spotvol_kv* metadata, size_t metadata_count,
                                    char** out) {
    if (!audit || !out) return invalid("null argument");
    return guarded([&] {
        *out = to_c_string(spotvol::render_audit(audit->report, to_format(format),
                                                 to_metadata(metadata, metadata_count)));
    });
}

void spotvol_audit_free(spotvol_audit* audit) { delete audit; }

} // extern "C"
