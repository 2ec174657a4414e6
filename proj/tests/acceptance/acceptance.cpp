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

// Acceptance checks. Prints one PASS/FAIL line per criterion; exits 0 only
// when every selected criterion passes.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include <CLI11.hpp>

#include "spotvol/edgeworth.hpp"
#include "spotvol/harness.hpp"
#include "spotvol/special_functions.hpp"

using namespace spotvol;

namespace {

// Pinned tolerances.
constexpr double kAuditSigmas = 3.0;           // criteria 1 and 2
constexpr std::int64_t kAuditKn = 50;
constexpr std::int64_t kAuditReplications = 1'000'000;
constexpr double kAuditRuntimeTarget = 60.0;   // seconds
constexpr double kEdgeworthRateFactor = 3.0;   // criterion 3
constexpr double kRateConstant = 0.31206;      // criterion 4
constexpr double kRateRelTol = 0.25;
constexpr std::int64_t kTableReplications = 2000;  // criterion 6
constexpr double kTableRuntimeTarget = 600.0;
constexpr std::int64_t kMatchReplications = 10'000;  // criterion 7
constexpr double kMatchTolPP = 3.0;
constexpr double kTableN1 = 92.64;
constexpr double kTableE1 = 96.10;
constexpr std::uint64_t kSeed = 1;

const std::vector<std::int64_t> kGridN = {780, 1560, 4680, 7800, 11700, 23400};
const std::vector<double> kGridTau = {0.3, 0.5, 0.7};

struct Verdict {
    bool pass = false;
    std::string detail;
    std::vector<std::string> notes;
};

std::string fmt(double x, int digits = 5) {
    std::ostringstream os;
    os.precision(digits);
    os << x;
    return os.str();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Verdict criterion1() {
    const auto t0 = std::chrono::steady_clock::now();
    const AuditReport a = cumulant_audit(kAuditKn, kAuditReplications, kSeed);
    const double elapsed = seconds_since(t0);
    Verdict v;
    bool ok = elapsed < kAuditRuntimeTarget;
    std::ostringstream os;
    for (const char* q : {"E[M^3]", "E[M^4]"}) {
        const AuditRow& r = a.row(q);
        const double z = (r.empirical - r.prediction) / r.mc_std_error;
        ok = ok && std::abs(z) <= kAuditSigmas;
        os << q << " = " << fmt(r.empirical) << " (se " << fmt(r.mc_std_error, 2) << ", predicted "
           << fmt(r.prediction) << ", z " << fmt(z, 3) << "); ";
        v.notes.push_back(std::string(q) + " chi-square closed form " + fmt(r.exact, 10));
    }
    os << "runtime " << fmt(elapsed, 3) << " s";
    v.pass = ok;
    v.detail = os.str();
    return v;
}

Verdict criterion2() {
    const AuditReport a = cumulant_audit(kAuditKn, kAuditReplications, kSeed);
    Verdict v;
    bool ok = true;
    std::ostringstream os;
    const double k3_target = -4.0 * std::sqrt(2.0) / std::sqrt(static_cast<double>(kAuditKn));
    const char* sep = "";
    for (const auto& [q, target] : std::vector<std::pair<std::string, double>>{
             {"k1[T]", -std::sqrt(2.0) / std::sqrt(static_cast<double>(kAuditKn))}, {"k3[T]", k3_target}}) {
        const AuditRow& r = a.row(q);
        os << sep;
        sep = "; ";
        const double z = (r.empirical - target) / r.mc_std_error;
        ok = ok && std::abs(z) <= kAuditSigmas;
        os << q << " = " << fmt(r.empirical) << " (se " << fmt(r.mc_std_error, 2) << ", predicted "
           << fmt(target) << ", z " << fmt(z, 3) << ")";
        const double ze = (r.empirical - r.exact) / r.mc_std_error;
        v.notes.push_back(q + " exact chi-square value " + fmt(r.exact, 8) + ", empirical is " + fmt(ze, 3) +
                          " se from it");
    }
    v.pass = ok;
    v.detail = os.str();
    return v;
}

Verdict criterion3() {
    auto max_err = [](std::int64_t kn) {
        double worst = 0.0;
        for (int x = -3; x <= 3; ++x) {
            worst = std::max(worst, std::abs(edgeworth_cdf_S(x, kn).probability.value() -
                                             exact_cdf_M(x, kn).value()));
        }
        return worst;
    };
    const double e25 = max_err(25), e400 = max_err(400);
    Verdict v;
    v.pass = e400 * kEdgeworthRateFactor <= e25;
    v.detail = "max error kn=25: " + fmt(e25) + ", kn=400: " + fmt(e400) + ", ratio " + fmt(e25 / e400, 4);
    return v;
}

Verdict criterion4() {
    Verdict v;
    bool ok = true;
    std::ostringstream os;
    for (std::int64_t kn : {100, 400, 1600}) {
        const double cov =
            analytic_coverage_constant_vol(kn, Probability(0.95), IntervalMethod::normal_one_sided).coverage;
        const double scaled = (0.95 - cov) * std::sqrt(static_cast<double>(kn));
        const double rel = std::abs(scaled / kRateConstant - 1.0);
        ok = ok && rel <= kRateRelTol;
        os << "kn=" << kn << ": " << fmt(scaled) << " (rel " << fmt(rel, 3) << ") ";
    }
    v.pass = ok;
    v.detail = os.str();
    return v;
}

Verdict criterion5() {
    Verdict v;
    bool ok = true;
    std::ostringstream os;
    auto check = [&](std::int64_t kn, IntervalMethod normal, IntervalMethod edgeworth, const IntervalOptions& opt,
                     std::ostringstream& out) {
        const double n = analytic_coverage_constant_vol(kn, Probability(0.95), normal, opt).coverage;
        const double e = analytic_coverage_constant_vol(kn, Probability(0.95), edgeworth, opt).coverage;
        out << "kn=" << kn << (is_one_sided(normal) ? " 1s " : " 2s ") << fmt(n, 4) << "/" << fmt(e, 4) << " ";
        return std::abs(e - 0.95) < std::abs(n - 0.95);
    };
    std::ostringstream printed;
    bool printed_ok = true;
    for (std::int64_t kn : {10, 25, 50, 100}) {
        ok = check(kn, IntervalMethod::normal_one_sided, IntervalMethod::edgeworth_one_sided, {}, os) && ok;
        ok = check(kn, IntervalMethod::normal_two_sided, IntervalMethod::edgeworth_two_sided, {}, os) && ok;
        printed_ok = check(kn, IntervalMethod::normal_two_sided, IntervalMethod::edgeworth_two_sided,
                           {QuantileConvention::exact, Q2Form::as_printed}, printed) &&
                     printed_ok;
    }
    v.pass = ok;
    v.detail = "normal/edgeworth coverage " + os.str();
    v.notes.push_back(std::string("with the +4/9 H5 form of q2 the two-sided ordering ") +
                      (printed_ok ? "holds" : "fails") + ": " + printed.str());
    return v;
}

struct GridCheck {
    int ordering_violations = 0;
    int monotone_violations = 0;
    int cells = 0;
    std::vector<std::string> notes;
};

CoverageReport run_grid(const ModelSpec& model) {
    ExperimentConfig c;
    c.model = model;
    c.n_values = kGridN;
    c.tau_values = kGridTau;
    c.kn_rule = KnRule::table_matching();
    c.replications = kTableReplications;
    c.refinement = 10;
    c.base_seed = kSeed;
    return run_coverage(c);
}

GridCheck check_grid(const CoverageReport& r, const std::string& label) {
    // (n, tau, method) -> coverage
    std::map<std::tuple<std::int64_t, double, CoverageMethod>, double> cov;
    for (const auto& cell : r.cells) cov[{cell.n, cell.tau, cell.method}] = cell.coverage();
    GridCheck g;
    for (double tau : kGridTau) {
        for (std::int64_t n : kGridN) {
            ++g.cells;
            const auto at = [&](CoverageMethod m) { return cov.at({n, tau, m}); };
            if (!(at(CoverageMethod::edgeworth_one_sided) > at(CoverageMethod::normal_one_sided))) {
                ++g.ordering_violations;
                g.notes.push_back(label + " one-sided ordering fails at n=" + std::to_string(n) + " tau=" + fmt(tau));
            }
            if (!(at(CoverageMethod::edgeworth_two_sided) > at(CoverageMethod::normal_two_sided))) {
                ++g.ordering_violations;
                g.notes.push_back(label + " two-sided ordering fails at n=" + std::to_string(n) + " tau=" + fmt(tau));
            }
        }
        for (CoverageMethod m : kIntervalCoverageMethods) {
            std::ostringstream row;
            row << label << " tau=" << fmt(tau) << " " << to_string(m) << ":";
            for (std::size_t i = 0; i < kGridN.size(); ++i) {
                const double c = cov.at({kGridN[i], tau, m});
                row << " " << fmt(100.0 * c, 4);
                if (i > 0 && c < cov.at({kGridN[i - 1], tau, m})) {
                    ++g.monotone_violations;
                    row << "(down)";
                }
            }
            g.notes.push_back(row.str());
        }
    }
    return g;
}

Verdict criterion6() {
    const auto t0 = std::chrono::steady_clock::now();
    const GridCheck g1 = check_grid(run_grid(default_model1()), "model1");
    const GridCheck g2 = check_grid(run_grid(default_model2()), "model2");
    const double elapsed = seconds_since(t0);
    Verdict v;
    const int ordering = g1.ordering_violations + g2.ordering_violations;
    const int monotone = g1.monotone_violations + g2.monotone_violations;
    v.pass = ordering == 0 && monotone == 0 && elapsed < kTableRuntimeTarget;
    v.detail = "ordering violations " + std::to_string(ordering) + " of " +
               std::to_string(2 * (g1.cells + g2.cells)) + ", decreases in n " + std::to_string(monotone) +
               " of " + std::to_string(2 * 3 * 4 * (static_cast<int>(kGridN.size()) - 1)) + ", runtime " +
               fmt(elapsed, 3) + " s";
    v.notes = g1.notes;
    v.notes.insert(v.notes.end(), g2.notes.begin(), g2.notes.end());
    ModelSpec no_drift = default_model1();
    no_drift.drift_b = 0.0;
    const GridCheck g0 = check_grid(run_grid(no_drift), "model1 drift=0");
    v.notes.push_back("with zero drift, model1 has " + std::to_string(g0.ordering_violations) +
                      " ordering violations and " + std::to_string(g0.monotone_violations) + " decreases in n");
    for (const auto& n : g0.notes) v.notes.push_back(n);
    return v;
}

CoverageReport single_cell(const KnRule& rule) {
    ExperimentConfig c;
    c.model = default_model1();
    c.n_values = {23400};
    c.tau_values = {0.5};
    c.kn_rule = rule;
    c.replications = kMatchReplications;
    c.refinement = 10;
    c.base_seed = kSeed;
    c.paper_constants = true;
    c.methods = {CoverageMethod::normal_one_sided, CoverageMethod::edgeworth_one_sided};
    return run_coverage(c);
}

Verdict criterion7() {
    const CoverageReport r = single_cell(KnRule::table_matching());
    const double n1 = 100.0 * r.cells[0].coverage();
    const double e1 = 100.0 * r.cells[1].coverage();
    Verdict v;
    v.pass = std::abs(n1 - kTableN1) <= kMatchTolPP && std::abs(e1 - kTableE1) <= kMatchTolPP;
    v.detail = "kn=" + std::to_string(r.cells[0].kn) + ": normal one-sided " + fmt(n1, 4) + " (target " +
               fmt(kTableN1, 4) + "), edgeworth one-sided " + fmt(e1, 4) + " (target " + fmt(kTableE1, 4) + ")";
    const CoverageReport s = single_cell(KnRule::paper_stated());
    v.notes.push_back("stated rule kn=" + std::to_string(s.cells[0].kn) + ": normal one-sided " +
                      fmt(100.0 * s.cells[0].coverage(), 4) + ", edgeworth one-sided " +
                      fmt(100.0 * s.cells[1].coverage(), 4));
    return v;
}

int run_cli(const std::string& args, const std::filesystem::path& out) {
    const std::string cmd = std::string("'") + SPOTVOL_CLI_PATH + "' " + args + " --output '" + out.string() +
                            "' 2>/dev/null";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

Verdict criterion8() {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / ("spotvol_acceptance_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    const std::string base = "coverage --preset paper-model1 --seed 7";
    const std::vector<std::pair<std::string, std::string>> runs = {
        {"--threads 1", "a.csv"}, {"--threads 4", "b.csv"}, {"--threads 2", "c.csv"}};
    Verdict v;
    bool ok = true;
    std::vector<std::string> bodies;
    for (const auto& [flag, name] : runs) {
        const int rc = run_cli(base + " " + flag, dir / name);
        ok = ok && rc == 0;
        bodies.push_back(slurp(dir / name));
    }
    const std::string json_args = "coverage --preset paper-model2 --seed 7 --n 780,1560 --format json";
    ok = ok && run_cli(json_args + " --threads 1", dir / "e.json") == 0;
    ok = ok && run_cli(json_args + " --threads 3", dir / "f.json") == 0;
    const bool json_same = slurp(dir / "e.json") == slurp(dir / "f.json");
    const bool same = std::all_of(bodies.begin(), bodies.end(), [&](const auto& b) { return b == bodies[0]; });
    v.pass = ok && same && json_same && !bodies[0].empty();
    v.detail = std::to_string(runs.size()) + " CSV runs at 1, 4 and 2 threads " +
               (same ? "byte-identical" : "differ") + " (" + std::to_string(bodies[0].size()) +
               " bytes); JSON at 1 and 3 threads " + (json_same ? "byte-identical" : "differ");
    fs::remove_all(dir);
    return v;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"spotvol acceptance checks"};
    std::vector<int> selected;
    app.add_option("--criterion", selected, "criterion number(s) 1-8; default all")
        ->check(CLI::Range(1, 8))
        ->delimiter(',');
    CLI11_PARSE(app, argc, argv);
    if (selected.empty()) selected = {1, 2, 3, 4, 5, 6, 7, 8};

    const std::map<int, std::function<Verdict()>> checks = {
        {1, criterion1}, {2, criterion2}, {3, criterion3}, {4, criterion4},
        {5, criterion5}, {6, criterion6}, {7, criterion7}, {8, criterion8}};
    bool all = true;
    for (int id : selected) {
        Verdict v;
        try {
            v = checks.at(id)();
        } catch (const std::exception& e) {
            v.pass = false;
            v.detail = std::string("error: ") + e.what();
        }
        std::cout << "criterion " << id << ": " << (v.pass ? "PASS" : "FAIL") << " | " << v.detail << "\n";
        for (const auto& note : v.notes) std::cout << "    " << note << "\n";
        std::cout.flush();
        all = all && v.pass;
    }
    return all ? 0 : 1;
}
