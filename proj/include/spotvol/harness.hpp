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

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "spotvol/intervals.hpp"
#include "spotvol/simulator.hpp"

namespace spotvol {

/// What a coverage cell counts. The first four are the feasible interval
/// methods; the `s_` variants test the infeasible statistic S against its
/// normal and Edgeworth quantiles and exist only here, where the true spot
/// variance is known.
enum class CoverageMethod {
    normal_one_sided,
    edgeworth_one_sided,
    normal_two_sided,
    edgeworth_two_sided,
    s_normal_one_sided,
    s_edgeworth_one_sided,
    s_normal_two_sided,
    s_edgeworth_two_sided,
};

inline constexpr std::array<CoverageMethod, 4> kIntervalCoverageMethods = {
    CoverageMethod::normal_one_sided, CoverageMethod::edgeworth_one_sided,
    CoverageMethod::normal_two_sided, CoverageMethod::edgeworth_two_sided};

inline constexpr std::array<CoverageMethod, 4> kSDiagnosticMethods = {
    CoverageMethod::s_normal_one_sided, CoverageMethod::s_edgeworth_one_sided,
    CoverageMethod::s_normal_two_sided, CoverageMethod::s_edgeworth_two_sided};

const char* to_string(CoverageMethod method) noexcept;
CoverageMethod coverage_method_from_string(const std::string& name);
CoverageMethod to_coverage_method(IntervalMethod method) noexcept;
/// The interval method a coverage method corresponds to, or nullopt for the
/// S diagnostics.
std::optional<IntervalMethod> interval_method_of(CoverageMethod method) noexcept;

struct ExperimentConfig {
    ModelSpec model;
    std::vector<std::int64_t> n_values;
    std::vector<double> tau_values;
    KnRule kn_rule = KnRule::table_matching();
    /// Overrides kn_rule for every n when set.
    std::optional<std::int64_t> fixed_kn;
    double level = 0.95;
    std::int64_t replications = 2000;
    std::uint64_t base_seed = 0;
    int refinement = 10;
    std::vector<CoverageMethod> methods{kIntervalCoverageMethods.begin(),
                                        kIntervalCoverageMethods.end()};
    bool paper_constants = false;
    Q2Form q2_form = Q2Form::derived;
    double horizon = 1.0;
    /// Worker threads; 0 picks the default (see resolve_thread_count).
    int threads = 0;
    /// Share one Brownian path across the n values of a replication when
    /// their grids nest in a common fine grid of moderate size.
    bool common_random_numbers = true;

    std::int64_t kn_for(std::int64_t n) const;
    /// Throws ConfigError on any violation, including a window that does
    /// not fit for some (n, tau) pair. Run before any simulation.
    void validate() const;
};

struct CoverageCell {
    std::string model;
    std::int64_t n = 0;
    double tau = 0.0;
    CoverageMethod method = CoverageMethod::normal_one_sided;
    std::int64_t kn = 0;
    std::int64_t trials = 0;
    std::int64_t hits = 0;

    double coverage() const noexcept;
    double mc_std_error() const noexcept;
};

struct CoverageReport {
    std::vector<CoverageCell> cells;  // ordered by n, tau, method as configured
    bool common_random_numbers = false;
};

/// Threads to use for `requested` (> 0 is taken as is). Otherwise the
/// SPOTVOL_THREADS environment variable, then the hardware concurrency.
int resolve_thread_count(int requested);

/// Replicated coverage experiment. Replication r simulates from
/// derive_seed(base_seed, r) only; hit counters are integers, so the report
/// does not depend on the number of threads.
CoverageReport run_coverage(const ExperimentConfig& config);

struct WindowRequest {
    double tau = 0.0;
    std::int64_t kn = 0;
};

struct WindowSample {
    SpotVolEstimate estimate;
    double true_sigma2 = 0.0;  // spot variance at the snapped grid point of tau
};

/// Uniform estimates over the requested windows of the path that
/// simulate(model, grid, seed) would produce, generating price draws only
/// inside the windows. Agrees with estimate_uniform on the full path up to
/// floating-point summation order.
std::vector<WindowSample> simulate_windows(const ModelSpec& model, const SimulationGrid& grid,
                                           std::uint64_t seed,
                                           std::span<const WindowRequest> windows);

struct AnalyticCoverage {
    Probability coverage;
    /// Set when the interval imposes no lower restriction because its
    /// lower factor is not positive; coverage is then the one-sided
    /// probability of the upper restriction.
    bool degenerate = false;
};

/// Exact coverage under constant volatility, where the estimate is
/// sigma^2 chi2_kn / kn.
AnalyticCoverage analytic_coverage_constant_vol(std::int64_t kn, Probability level,
                                                CoverageMethod method,
                                                const IntervalOptions& options = {});
AnalyticCoverage analytic_coverage_constant_vol(std::int64_t kn, Probability level,
                                                IntervalMethod method,
                                                const IntervalOptions& options = {});

/// Exact CDF of M = (chi2_kn - kn) / sqrt(2 kn); equals S under constant volatility.
Probability exact_cdf_M(double x, std::int64_t kn);
/// Exact CDF of T = sqrt(kn/2) (1 - kn / chi2_kn) under constant volatility.
Probability exact_cdf_T(double x, std::int64_t kn);
/// Exact first four cumulants of T under constant volatility. Requires kn > 8.
CumulantSet exact_cumulants_T(std::int64_t kn);

struct AuditRow {
    std::string quantity;
    double empirical = 0.0;
    double mc_std_error = 0.0;
    double prediction = 0.0;  // leading-term formula
    double exact = 0.0;       // chi-square closed form
};

struct AuditReport {
    std::int64_t kn = 0;
    std::int64_t replications = 0;
    std::uint64_t seed = 0;
    std::vector<AuditRow> rows;

    /// Row by quantity name; throws ConfigError when absent.
    const AuditRow& row(const std::string& quantity) const;
};

/// Monte Carlo moments of M, U = sqrt(kn)(v - sigma^2)/sigma^2 and T under
/// constant volatility. Rows: E[M^3], E[M^4], E[MU], E[M^2U], k1[T]..k4[T].
/// Higher cumulant standard errors use the delta-method influence function.
AuditReport cumulant_audit(std::int64_t kn, std::int64_t replications, std::uint64_t seed,
                           int threads = 0);

} // namespace spotvol
