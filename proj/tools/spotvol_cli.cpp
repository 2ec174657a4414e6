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

// spotvol command-line tool. Talks to the library through the C API only.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "run_config.hpp"
#include "spotvol/spotvol.h"

namespace {

using spotvol::cli::Command;
using spotvol::cli::Layer;
using spotvol::cli::RunConfig;
using spotvol::cli::UsageError;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitDegenerate = 3;

/// Carries a C API failure up to main.
struct ApiFailure {
    spotvol_status status;
    std::string message;
};

void check(spotvol_status s) {
    if (s != SPOTVOL_OK) throw ApiFailure{s, spotvol_last_error()};
}

int exit_code(spotvol_status s) {
    switch (s) {
        case SPOTVOL_OK: return kExitOk;
        case SPOTVOL_E_INGEST:
        case SPOTVOL_E_IO: return kExitData;
        case SPOTVOL_E_DEGENERATE: return kExitDegenerate;
        default: return kExitUsage;
    }
}

template <class T, void (*Free)(T*)>
struct Deleter {
    void operator()(T* p) const { Free(p); }
};
using PathPtr = std::unique_ptr<spotvol_path, Deleter<spotvol_path, spotvol_path_free>>;
using ModelPtr = std::unique_ptr<spotvol_model, Deleter<spotvol_model, spotvol_model_free>>;
using ExperimentPtr =
    std::unique_ptr<spotvol_experiment, Deleter<spotvol_experiment, spotvol_experiment_free>>;
using ReportPtr = std::unique_ptr<spotvol_report, Deleter<spotvol_report, spotvol_report_free>>;
using AuditPtr = std::unique_ptr<spotvol_audit, Deleter<spotvol_audit, spotvol_audit_free>>;

std::string take_string(char* s) {
    std::string out(s);
    spotvol_string_free(s);
    return out;
}

struct MetadataView {
    std::vector<std::pair<std::string, std::string>> items;
    std::vector<spotvol_kv> kv;

    explicit MetadataView(std::vector<std::pair<std::string, std::string>> m) : items(std::move(m)) {
        for (const auto& [k, v] : items) kv.push_back({k.c_str(), v.c_str()});
    }
};

spotvol_format format_of(const RunConfig& c) {
    return c.format == "json" ? SPOTVOL_FORMAT_JSON : SPOTVOL_FORMAT_CSV;
}

spotvol_interval_options options_of(const RunConfig& c) {
    return {c.paper_constants ? 1 : 0, c.q2_form == "as_printed" ? 1 : 0};
}

void write_result(const std::string& file, const std::string& text) {
    if (file.empty() || file == "-") {
        std::cout << text;
        std::cout.flush();
        if (!std::cout) throw ApiFailure{SPOTVOL_E_IO, "cannot write to stdout"};
        return;
    }
    std::ofstream out(file, std::ios::binary | std::ios::trunc);
    if (!out) throw ApiFailure{SPOTVOL_E_IO, "cannot open '" + file + "' for writing"};
    out << text;
    out.close();
    if (!out) throw ApiFailure{SPOTVOL_E_IO, "write to '" + file + "' failed"};
}

ModelPtr make_model(const RunConfig& c) {
    spotvol_model* raw = nullptr;
    check(spotvol_model_create(c.model.c_str(), &raw));
    ModelPtr model(raw);
    for (const auto& [k, v] : c.params) check(spotvol_model_set(model.get(), k.c_str(), v));
    if (c.sigma) check(spotvol_model_set(model.get(), "sigma", *c.sigma));
    if (c.drift) check(spotvol_model_set(model.get(), "drift", *c.drift));
    if (c.rho) check(spotvol_model_set(model.get(), "rho", *c.rho));
    return model;
}

std::vector<spotvol_method> methods_of(const RunConfig& c) {
    std::vector<spotvol_method> out;
    for (const auto& name : c.methods) {
        spotvol_method m;
        check(spotvol_method_from_name(name.c_str(), &m));
        out.push_back(m);
    }
    return out;
}

int run_simulate(const RunConfig& c, const MetadataView& meta) {
    ModelPtr model = make_model(c);
    spotvol_path* raw = nullptr;
    check(spotvol_simulate(model.get(), c.n.front(), c.horizon, c.refinement, c.seed, &raw, nullptr));
    PathPtr path(raw);
    char* text = nullptr;
    check(spotvol_path_render(path.get(), format_of(c), meta.kv.data(), meta.kv.size(), &text));
    write_result(c.output, take_string(text));
    return kExitOk;
}

int run_estimate(const RunConfig& c, const MetadataView& meta) {
    spotvol_path* raw = nullptr;
    check(spotvol_path_read_csv(c.input.c_str(), &raw));
    PathPtr path(raw);
    const auto methods = methods_of(c);
    const auto options = options_of(c);

    std::vector<spotvol_estimate_record> records;
    for (double tau : c.tau) {
        spotvol_estimate est;
        const char* estimator = "uniform";
        if (c.bandwidth) {
            check(spotvol_estimate_kernel(path.get(), tau, *c.bandwidth, c.kernel.c_str(), &est));
            estimator = c.kernel.c_str();
        } else {
            std::int64_t kn = 0;
            if (c.kn) kn = *c.kn;
            else check(spotvol_choose_kn(spotvol_path_size(path.get()), c.kn_c, c.kn_exponent, &kn));
            check(spotvol_estimate_uniform(path.get(), tau, kn, &est));
        }
        for (auto m : methods) {
            spotvol_estimate_record rec;
            rec.estimator = estimator;
            rec.estimate = est;
            check(spotvol_interval_build(&est, m, c.level, &options, &rec.interval));
            records.push_back(rec);
        }
    }
    char* text = nullptr;
    check(spotvol_render_estimates(records.data(), records.size(), format_of(c), meta.kv.data(),
                                   meta.kv.size(), &text));
    write_result(c.output, take_string(text));
    return kExitOk;
}

int run_coverage(const RunConfig& c, const MetadataView& meta) {
    ModelPtr model = make_model(c);
    spotvol_experiment* raw = nullptr;
    check(spotvol_experiment_create(model.get(), &raw));
    ExperimentPtr e(raw);
    check(spotvol_experiment_set_n_values(e.get(), c.n.data(), c.n.size()));
    check(spotvol_experiment_set_tau_values(e.get(), c.tau.data(), c.tau.size()));
    const auto methods = methods_of(c);
    check(spotvol_experiment_set_methods(e.get(), methods.data(), methods.size()));
    check(spotvol_experiment_set_kn_rule(e.get(), c.kn_c, c.kn_exponent));
    check(spotvol_experiment_set_fixed_kn(e.get(), c.kn.value_or(0)));
    check(spotvol_experiment_set_level(e.get(), c.level));
    check(spotvol_experiment_set_replications(e.get(), c.replications));
    check(spotvol_experiment_set_seed(e.get(), c.seed));
    check(spotvol_experiment_set_refinement(e.get(), c.refinement));
    check(spotvol_experiment_set_horizon(e.get(), c.horizon));
    const auto options = options_of(c);
    check(spotvol_experiment_set_options(e.get(), &options));
    check(spotvol_experiment_set_threads(e.get(), c.threads));
    check(spotvol_experiment_set_common_random_numbers(e.get(), c.common_random_numbers ? 1 : 0));
    check(spotvol_experiment_validate(e.get()));

    if (c.uses_table_matching_rule()) {
        std::cerr << "warning: kn = floor(0.5 n^(1/2)) (table-matching rule). The stated rule\n"
                     "         floor(0.5 n^(1/4)) gives kn = 2..6 on this grid, far too small to\n"
                     "         produce coverage near the tabulated values; select it with\n"
                     "         --kn-rule paper-stated.\n";
    }

    spotvol_report* rep = nullptr;
    check(spotvol_coverage_run(e.get(), &rep));
    ReportPtr report(rep);
    char* text = nullptr;
    check(spotvol_report_render(report.get(), format_of(c), meta.kv.data(), meta.kv.size(), &text));
    write_result(c.output, take_string(text));
    return kExitOk;
}

int run_audit(const RunConfig& c, const MetadataView& meta) {
    spotvol_audit* raw = nullptr;
    check(spotvol_audit_run(*c.kn, c.replications, c.seed, c.threads, &raw));
    AuditPtr audit(raw);
    char* text = nullptr;
    check(spotvol_audit_render(audit.get(), format_of(c), meta.kv.data(), meta.kv.size(), &text));
    write_result(c.output, take_string(text));
    return kExitOk;
}

struct Flags {
    std::string config, preset, model, kn_rule, input, output, format, kernel, q2_form;
    std::vector<std::int64_t> n;
    std::vector<double> tau;
    std::vector<std::string> methods, params;
    std::int64_t kn = 0, replications = 0;
    double kn_c = 0, kn_exponent = 0, level = 0, bandwidth = 0, sigma = 0, drift = 0, rho = 0,
           horizon = 0;
    std::uint64_t seed = 0;
    int refinement = 0, threads = 0;
    bool paper_constants = false, replications_full = false, no_crn = false;
};

Layer flag_layer(const CLI::App& app, const Flags& f) {
    Layer l = Layer::object();
    auto given = [&](const char* name) { return app.count(name) > 0; };
    if (given("--model")) l["model"] = f.model;
    if (given("--n")) l["n"] = f.n;
    if (given("--tau")) l["tau"] = f.tau;
    if (given("--kn")) l["kn"] = f.kn;
    if (given("--kn-c")) l["kn_c"] = f.kn_c;
    if (given("--kn-exponent")) l["kn_exponent"] = f.kn_exponent;
    if (given("--kn-rule")) l["kn_rule"] = f.kn_rule;
    if (given("--level")) l["level"] = f.level;
    if (given("--replications")) l["replications"] = f.replications;
    if (f.replications_full) l["replications"] = 10000;
    if (given("--seed")) l["seed"] = f.seed;
    if (given("--refinement")) l["refinement"] = f.refinement;
    if (given("--method")) l["method"] = f.methods;
    if (f.paper_constants) l["paper_constants"] = true;
    if (given("--q2-form")) l["q2_form"] = f.q2_form;
    if (given("--input")) l["input"] = f.input;
    if (given("--output")) l["output"] = f.output;
    if (given("--format")) l["format"] = f.format;
    if (given("--kernel")) l["kernel"] = f.kernel;
    if (given("--bandwidth")) l["bandwidth"] = f.bandwidth;
    if (given("--sigma")) l["sigma"] = f.sigma;
    if (given("--drift")) l["drift"] = f.drift;
    if (given("--rho")) l["rho"] = f.rho;
    if (given("--horizon")) l["horizon"] = f.horizon;
    if (given("--threads")) l["threads"] = f.threads;
    if (f.no_crn) l["crn"] = false;
    if (!f.params.empty()) {
        Layer p = Layer::object();
        for (const auto& kv : f.params) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos) throw UsageError("--param expects name=value, got '" + kv + "'");
            try {
                std::size_t used = 0;
                const std::string value = kv.substr(eq + 1);
                p[kv.substr(0, eq)] = std::stod(value, &used);
                if (used != value.size()) throw std::invalid_argument(value);
            } catch (const std::logic_error&) {
                throw UsageError("--param " + kv + ": value is not a number");
            }
        }
        l["params"] = p;
    }
    return l;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spot volatility estimation, Edgeworth-corrected intervals and coverage experiments"};
    app.set_version_flag("--version", std::string(spotvol_version()));
    app.require_subcommand(1);
    Flags f;

    app.add_option("--config", f.config, "JSON config file (flags override its keys)");
    app.add_option("--preset", f.preset, "paper-model1, paper-model2 or oracle-constvol");
    app.add_option("--model", f.model, "model1, model2 or constant_vol");
    app.add_option("--param", f.params, "model coefficient override, name=value")->delimiter(',');
    app.add_option("--sigma", f.sigma, "volatility of constant_vol");
    app.add_option("--drift", f.drift, "price drift b");
    app.add_option("--rho", f.rho, "correlation between price and first factor driver");
    app.add_option("--n", f.n, "number of observation intervals (comma-separated list)")->delimiter(',');
    app.add_option("--tau", f.tau, "estimation time(s) (comma-separated list)")->delimiter(',');
    app.add_option("--kn", f.kn, "fixed window size");
    app.add_option("--kn-c", f.kn_c, "kn rule coefficient c in floor(c n^e)");
    app.add_option("--kn-exponent", f.kn_exponent, "kn rule exponent e in floor(c n^e)");
    app.add_option("--kn-rule", f.kn_rule, "table-matching or paper-stated");
    app.add_option("--level", f.level, "nominal coverage level");
    app.add_option("--replications", f.replications, "Monte Carlo replications");
    app.add_flag("--replications-full", f.replications_full, "use 10000 replications");
    app.add_option("--seed", f.seed, "base seed");
    app.add_option("--refinement", f.refinement, "Euler substeps per observation interval");
    app.add_option("--method", f.methods, "interval method(s) (comma-separated list)")->delimiter(',');
    app.add_flag("--paper-constants", f.paper_constants, "use the rounded quantiles 1.645 and 1.96");
    app.add_option("--q2-form", f.q2_form, "derived or as_printed");
    app.add_option("--input", f.input, "input CSV with header timestamp,log_price");
    app.add_option("--output", f.output, "output file (default stdout)");
    app.add_option("--format", f.format, "csv or json");
    app.add_option("--kernel", f.kernel, "uniform, epanechnikov, quartic or triweight");
    app.add_option("--bandwidth", f.bandwidth, "kernel bandwidth h (kernel estimator)");
    app.add_option("--horizon", f.horizon, "time horizon T");
    app.add_option("--threads", f.threads, "worker threads (default: SPOTVOL_THREADS or all cores)");
    app.add_flag("--no-crn", f.no_crn, "draw each n independently in coverage runs");

    std::string command;
    for (const char* name : {"simulate", "estimate", "coverage", "audit"}) {
        auto* sub = app.add_subcommand(name);
        sub->fallthrough();
        sub->callback([&command, name] { command = name; });
    }
    app.get_subcommand("simulate")->description("simulate a log-price path and write it as CSV");
    app.get_subcommand("estimate")->description("estimate spot variance and intervals from a CSV");
    app.get_subcommand("coverage")->description("run a Monte Carlo coverage experiment");
    app.get_subcommand("audit")->description("Monte Carlo audit of the moment and cumulant formulas");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        const Command cmd = spotvol::cli::command_from_string(command);
        std::vector<Layer> layers;
        if (!f.preset.empty()) layers.push_back(spotvol::cli::preset_layer(f.preset));
        if (!f.config.empty()) layers.push_back(spotvol::cli::load_config_file(f.config));
        layers.push_back(flag_layer(app, f));
        RunConfig config = spotvol::cli::resolve(cmd, spotvol::cli::merge_layers(layers));
        config.preset = f.preset;
        const MetadataView meta(
            spotvol::cli::run_metadata(config, spotvol_version(), spotvol_rng_algorithm()));
        switch (cmd) {
            case Command::simulate: return run_simulate(config, meta);
            case Command::estimate: return run_estimate(config, meta);
            case Command::coverage: return run_coverage(config, meta);
            case Command::audit: return run_audit(config, meta);
        }
    } catch (const UsageError& e) {
        std::cerr << "spotvol: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ApiFailure& e) {
        std::cerr << "spotvol: " << spotvol_status_name(e.status) << " error: " << e.message << "\n";
        return exit_code(e.status);
    } catch (const std::exception& e) {
        std::cerr << "spotvol: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitOk;
}
