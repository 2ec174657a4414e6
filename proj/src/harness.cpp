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

#include "spotvol/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <numbers>
#include <numeric>
#include <set>
#include <sstream>
#include <thread>

#include "path_engine.hpp"
#include "spotvol/error.hpp"
#include "spotvol/rng.hpp"

namespace spotvol {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;

// Largest fine grid, relative to the finest observation grid, for which
// replications share one Brownian path across n.
constexpr std::int64_t kMaxCrnAggregation = 64;

struct Window {
    double tau;
    std::int64_t kn;
    std::int64_t m;          // grid index of tau
    std::int64_t start_sub;  // first substep inside the window
    std::int64_t end_sub;    // one past the last substep
};

std::vector<Window> plan_windows(const SimulationGrid& grid, std::span<const WindowRequest> reqs) {
    const double delta = grid.horizon / static_cast<double>(grid.n);
    std::vector<Window> out;
    out.reserve(reqs.size());
    for (const auto& q : reqs) {
        if (q.kn < 1) throw DomainError("window: kn must be >= 1");
        if (!std::isfinite(q.tau) || q.tau < 0.0) throw DomainError("window: tau must be >= 0");
        const std::int64_t m = grid_index(q.tau, delta);
        if (m + q.kn > grid.n) {
            std::ostringstream os;
            os << "estimation window [" << m + 1 << ", " << m + q.kn
               << "] runs past the last increment " << grid.n << " (tau = " << q.tau
               << ", kn = " << q.kn << ")";
            throw WindowError(os.str());
        }
        out.push_back({q.tau, q.kn, m, m * grid.refinement, (m + q.kn) * grid.refinement});
    }
    return out;
}

std::int64_t last_substep(const std::vector<Window>& windows) {
    std::int64_t last = 0;
    for (const auto& w : windows) last = std::max(last, w.end_sub);
    return last;
}

// Walks the Euler recursion up to the last window end. f1/f2 hold master
// factor normals from index 0 (null when the model has fewer factors).
void run_windows(const detail::VolatilityDynamics& dyn, const SimulationGrid& grid,
                 std::uint64_t seed, const std::vector<Window>& windows, const double* f1,
                 const double* f2, std::vector<double>& price_buf, std::vector<double>& incs,
                 std::vector<WindowSample>& out) {
    const std::int64_t r = grid.refinement;
    const std::int64_t agg = grid.draws_per_substep;
    const std::int64_t substeps = grid.n * r;
    const double dt = grid.horizon / static_cast<double>(substeps);
    const double sqrt_dt_master = std::sqrt(dt / static_cast<double>(agg));
    const double delta = grid.horizon / static_cast<double>(grid.n);
    const NormalStream price(seed, detail::price_stream);

    // Price draws and increments of all windows, laid out back to back.
    std::vector<std::size_t> draw_off(windows.size()), inc_off(windows.size());
    std::size_t draws = 0, nincs = 0;
    for (std::size_t w = 0; w < windows.size(); ++w) {
        draw_off[w] = draws;
        inc_off[w] = nincs;
        draws += static_cast<std::size_t>((windows[w].end_sub - windows[w].start_sub) * agg);
        nincs += static_cast<std::size_t>(windows[w].kn);
    }
    price_buf.resize(draws);
    incs.assign(nincs, 0.0);
    for (std::size_t w = 0; w < windows.size(); ++w) {
        const auto len = static_cast<std::size_t>((windows[w].end_sub - windows[w].start_sub) * agg);
        price.fill(static_cast<std::uint64_t>(windows[w].start_sub * agg),
                   std::span<double>(price_buf.data() + draw_off[w], len));
    }

    out.assign(windows.size(), WindowSample{});
    auto state = dyn.initial();
    const std::int64_t last = last_substep(windows);
    const int factors = dyn.factor_count();
    for (std::int64_t s = 0; s < last; ++s) {
        const std::size_t off = static_cast<std::size_t>(s * agg);
        const double dw1 = factors >= 1 ? detail::aggregate(f1 + off, agg, sqrt_dt_master) : 0.0;
        const double dw2 = factors >= 2 ? detail::aggregate(f2 + off, agg, sqrt_dt_master) : 0.0;
        bool have_sigma = false;
        double sigma = 0.0;
        for (std::size_t w = 0; w < windows.size(); ++w) {
            const Window& win = windows[w];
            if (s < win.start_sub || s >= win.end_sub) continue;
            if (!have_sigma) {
                sigma = dyn.sigma(state);
                have_sigma = true;
            }
            if (s == win.start_sub) out[w].true_sigma2 = sigma * sigma;
            const std::int64_t local = s - win.start_sub;
            const double db = detail::aggregate(price_buf.data() + draw_off[w] +
                                                    static_cast<std::size_t>(local * agg),
                                                agg, sqrt_dt_master);
            incs[inc_off[w] + static_cast<std::size_t>(local / r)] +=
                dyn.price_increment(sigma, dt, db, dw1);
        }
        dyn.step(state, dt, dw1, dw2);
    }

    for (std::size_t w = 0; w < windows.size(); ++w) {
        const Window& win = windows[w];
        SpotVolEstimate& est = out[w].estimate;
        est.value = window_estimate(
            std::span<const double>(incs.data() + inc_off[w], static_cast<std::size_t>(win.kn)),
            delta);
        est.tau = win.tau;
        est.kn = win.kn;
        est.delta_n = delta;
        est.window_start = win.m + 1;
        est.window_end = win.m + win.kn;
    }
}

void fill_factors(const detail::VolatilityDynamics& dyn, std::uint64_t seed, std::size_t count,
                  std::vector<double>& f1, std::vector<double>& f2) {
    if (dyn.factor_count() >= 1) {
        f1.resize(count);
        NormalStream(seed, detail::factor1_stream).fill(0, f1);
    }
    if (dyn.factor_count() >= 2) {
        f2.resize(count);
        NormalStream(seed, detail::factor2_stream).fill(0, f2);
    }
}

// Cut-off c such that a hit is {S > c} (one-sided) or {|S| <= c} (two-sided).
double s_cutoff(CoverageMethod method, std::int64_t kn, double level, QuantileConvention q) {
    const double k = static_cast<double>(kn);
    switch (method) {
        case CoverageMethod::s_normal_one_sided: return normal_quantile(1.0 - level, q);
        case CoverageMethod::s_edgeworth_one_sided: {
            const double z = normal_quantile(1.0 - level, q);
            return z - p1(z) / std::sqrt(k);
        }
        case CoverageMethod::s_normal_two_sided: return normal_quantile(0.5 * (1.0 + level), q);
        case CoverageMethod::s_edgeworth_two_sided: {
            const double z = normal_quantile(0.5 * (1.0 + level), q);
            return z - p2(z) / k;
        }
        default: break;
    }
    throw DomainError("s_cutoff: not an S diagnostic");
}

bool is_s_one_sided(CoverageMethod m) {
    return m == CoverageMethod::s_normal_one_sided || m == CoverageMethod::s_edgeworth_one_sided;
}

std::int64_t lcm_capped(const std::vector<std::int64_t>& values, std::int64_t cap) {
    std::int64_t l = 1;
    for (auto v : values) {
        const std::int64_t g = std::gcd(l, v);
        const std::int64_t f = v / g;
        if (l > cap / f) return -1;
        l *= f;
    }
    return l;
}

} // namespace

const char* to_string(CoverageMethod method) noexcept {
    switch (method) {
        case CoverageMethod::normal_one_sided: return "normal_one_sided";
        case CoverageMethod::edgeworth_one_sided: return "edgeworth_one_sided";
        case CoverageMethod::normal_two_sided: return "normal_two_sided";
        case CoverageMethod::edgeworth_two_sided: return "edgeworth_two_sided";
        case CoverageMethod::s_normal_one_sided: return "s_normal_one_sided";
        case CoverageMethod::s_edgeworth_one_sided: return "s_edgeworth_one_sided";
        case CoverageMethod::s_normal_two_sided: return "s_normal_two_sided";
        case CoverageMethod::s_edgeworth_two_sided: return "s_edgeworth_two_sided";
    }
    return "unknown";
}

CoverageMethod coverage_method_from_string(const std::string& name) {
    for (auto m : kIntervalCoverageMethods) {
        if (name == to_string(m)) return m;
    }
    for (auto m : kSDiagnosticMethods) {
        if (name == to_string(m)) return m;
    }
    throw ConfigError("unknown method '" + name + "'");
}

CoverageMethod to_coverage_method(IntervalMethod method) noexcept {
    switch (method) {
        case IntervalMethod::normal_one_sided: return CoverageMethod::normal_one_sided;
        case IntervalMethod::edgeworth_one_sided: return CoverageMethod::edgeworth_one_sided;
        case IntervalMethod::normal_two_sided: return CoverageMethod::normal_two_sided;
        case IntervalMethod::edgeworth_two_sided: return CoverageMethod::edgeworth_two_sided;
    }
    return CoverageMethod::normal_one_sided;
}

std::optional<IntervalMethod> interval_method_of(CoverageMethod method) noexcept {
    switch (method) {
        case CoverageMethod::normal_one_sided: return IntervalMethod::normal_one_sided;
        case CoverageMethod::edgeworth_one_sided: return IntervalMethod::edgeworth_one_sided;
        case CoverageMethod::normal_two_sided: return IntervalMethod::normal_two_sided;
        case CoverageMethod::edgeworth_two_sided: return IntervalMethod::edgeworth_two_sided;
        default: break;
    }
    return std::nullopt;
}

std::int64_t ExperimentConfig::kn_for(std::int64_t n) const {
    return fixed_kn ? *fixed_kn : kn_rule(n);
}

void ExperimentConfig::validate() const {
    model.validate();
    if (n_values.empty()) throw ConfigError("experiment needs at least one n");
    if (tau_values.empty()) throw ConfigError("experiment needs at least one tau");
    if (methods.empty()) throw ConfigError("experiment needs at least one method");
    if (replications < 100) throw ConfigError("replications must be >= 100");
    if (refinement < 1) throw ConfigError("refinement must be >= 1");
    if (!(horizon > 0.0) || !std::isfinite(horizon)) throw ConfigError("horizon must be positive");
    if (threads < 0) throw ConfigError("threads must be >= 0");
    if (!(level > 0.0 && level < 1.0)) throw ConfigError("level must lie in (0, 1)");
    if (fixed_kn && *fixed_kn < 1) throw ConfigError("kn must be >= 1");
    if (std::set<std::int64_t>(n_values.begin(), n_values.end()).size() != n_values.size()) {
        throw ConfigError("duplicate n value");
    }
    if (std::set<double>(tau_values.begin(), tau_values.end()).size() != tau_values.size()) {
        throw ConfigError("duplicate tau value");
    }
    if (std::set<CoverageMethod>(methods.begin(), methods.end()).size() != methods.size()) {
        throw ConfigError("duplicate method");
    }
    for (double tau : tau_values) {
        if (!(tau > 0.0 && tau < horizon)) {
            std::ostringstream os;
            os << "tau = " << tau << " must lie strictly inside (0, " << horizon << ")";
            throw ConfigError(os.str());
        }
    }
    const IntervalOptions options{
        paper_constants ? QuantileConvention::paper : QuantileConvention::exact, q2_form};
    for (auto n : n_values) {
        if (n < 2) throw ConfigError("every n must be >= 2");
        const std::int64_t kn = kn_for(n);
        const double delta = horizon / static_cast<double>(n);
        for (double tau : tau_values) {
            const std::int64_t m = grid_index(tau, delta);
            if (m + kn > n) {
                std::ostringstream os;
                os << "window does not fit: n = " << n << ", tau = " << tau << ", kn = " << kn
                   << " needs increments " << m + 1 << ".." << m + kn;
                throw ConfigError(os.str());
            }
        }
        for (auto method : methods) {
            try {
                if (auto im = interval_method_of(method)) {
                    interval_factors(*im, kn, Probability(level), options);
                } else {
                    if (is_s_one_sided(method) && !(level > 0.5)) {
                        throw DomainError("one-sided intervals need 0.5 < level < 1");
                    }
                    s_cutoff(method, kn, level, options.quantiles);
                }
            } catch (const ConfigError&) {
                throw;
            } catch (const Error& e) {
                std::ostringstream os;
                os << to_string(method) << " at n = " << n << ", kn = " << kn << ": " << e.what();
                throw ConfigError(os.str());
            }
        }
    }
}

double CoverageCell::coverage() const noexcept {
    return trials > 0 ? static_cast<double>(hits) / static_cast<double>(trials) : 0.0;
}

double CoverageCell::mc_std_error() const noexcept {
    if (trials <= 0) return 0.0;
    const double p = coverage();
    return std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
}

int resolve_thread_count(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("SPOTVOL_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0 && v <= 1024) return static_cast<int>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

std::vector<WindowSample> simulate_windows(const ModelSpec& model, const SimulationGrid& grid,
                                           std::uint64_t seed,
                                           std::span<const WindowRequest> windows) {
    grid.validate();
    const detail::VolatilityDynamics dyn(model);
    const auto plan = plan_windows(grid, windows);
    std::vector<double> f1, f2, price_buf, incs;
    fill_factors(dyn, seed,
                 static_cast<std::size_t>(last_substep(plan) * grid.draws_per_substep), f1, f2);
    std::vector<WindowSample> out;
    run_windows(dyn, grid, seed, plan, f1.data(), f2.data(), price_buf, incs, out);
    return out;
}

namespace {

template <class Body>
void parallel_for(std::int64_t count, int threads, Body&& body) {
    threads = static_cast<int>(std::min<std::int64_t>(threads, std::max<std::int64_t>(count, 1)));
    std::atomic<std::int64_t> next{0};
    auto worker = [&](int id) {
        for (std::int64_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) body(id, i);
    };
    if (threads <= 1) {
        worker(0);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    std::exception_ptr error;
    std::mutex error_mutex;
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
            try {
                worker(t);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                next.store(count);
            }
        });
    }
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

} // namespace

CoverageReport run_coverage(const ExperimentConfig& config) {
    config.validate();
    const detail::VolatilityDynamics dyn(config.model);
    const IntervalOptions options{
        config.paper_constants ? QuantileConvention::paper : QuantileConvention::exact,
        config.q2_form};
    const Probability level(config.level);

    const std::size_t nn = config.n_values.size();
    const std::size_t nt = config.tau_values.size();
    const std::size_t nm = config.methods.size();
    const std::size_t ncells = nn * nt * nm;

    const std::int64_t max_n = *std::max_element(config.n_values.begin(), config.n_values.end());
    const std::int64_t lcm = lcm_capped(config.n_values, kMaxCrnAggregation * max_n);
    const bool crn = config.common_random_numbers && lcm > 0;

    struct GridPlan {
        SimulationGrid grid;
        std::vector<Window> windows;
        std::int64_t kn;
        std::vector<IntervalFactors> factors;  // per method (interval methods only)
        std::vector<double> cutoffs;           // per method (S diagnostics only)
    };
    std::vector<GridPlan> plans(nn);
    std::size_t master_draws = 0;
    for (std::size_t i = 0; i < nn; ++i) {
        GridPlan& p = plans[i];
        p.grid.n = config.n_values[i];
        p.grid.horizon = config.horizon;
        p.grid.refinement = config.refinement;
        p.grid.draws_per_substep = crn ? lcm / p.grid.n : 1;
        p.kn = config.kn_for(p.grid.n);
        std::vector<WindowRequest> reqs;
        for (double tau : config.tau_values) reqs.push_back({tau, p.kn});
        p.windows = plan_windows(p.grid, reqs);
        master_draws = std::max(master_draws, static_cast<std::size_t>(last_substep(p.windows) *
                                                                       p.grid.draws_per_substep));
        p.factors.resize(nm);
        p.cutoffs.resize(nm);
        for (std::size_t k = 0; k < nm; ++k) {
            if (auto im = interval_method_of(config.methods[k])) {
                p.factors[k] = interval_factors(*im, p.kn, level, options);
            } else {
                p.cutoffs[k] = s_cutoff(config.methods[k], p.kn, config.level, options.quantiles);
            }
        }
    }

    const int threads = resolve_thread_count(config.threads);
    struct Scratch {
        std::vector<std::int64_t> hits;
        std::vector<double> f1, f2, price_buf, incs;
        std::vector<WindowSample> samples;
    };
    std::vector<Scratch> scratch(static_cast<std::size_t>(threads));
    for (auto& s : scratch) s.hits.assign(ncells, 0);

    parallel_for(config.replications, threads, [&](int id, std::int64_t rep) {
        Scratch& sc = scratch[static_cast<std::size_t>(id)];
        const std::uint64_t path_seed = derive_seed(config.base_seed, static_cast<std::uint64_t>(rep));
        if (crn) fill_factors(dyn, path_seed, master_draws, sc.f1, sc.f2);
        for (std::size_t i = 0; i < nn; ++i) {
            const GridPlan& p = plans[i];
            std::uint64_t seed = path_seed;
            if (!crn) {
                seed = derive_seed(path_seed, static_cast<std::uint64_t>(p.grid.n));
                fill_factors(dyn, seed,
                             static_cast<std::size_t>(last_substep(p.windows) *
                                                      p.grid.draws_per_substep),
                             sc.f1, sc.f2);
            }
            run_windows(dyn, p.grid, seed, p.windows, sc.f1.data(), sc.f2.data(), sc.price_buf,
                        sc.incs, sc.samples);
            for (std::size_t t = 0; t < nt; ++t) {
                const WindowSample& ws = sc.samples[t];
                const double v = ws.estimate.value;
                const double s2 = ws.true_sigma2;
                const double k = static_cast<double>(p.kn);
                for (std::size_t m = 0; m < nm; ++m) {
                    const CoverageMethod method = config.methods[m];
                    bool hit = false;
                    if (auto im = interval_method_of(method)) {
                        if (v > 0.0) {
                            const IntervalFactors& f = p.factors[m];
                            if (is_one_sided(*im)) {
                                hit = s2 > 0.0 && s2 < v * f.upper;
                            } else {
                                hit = std::max(v * f.lower, 0.0) <= s2 && s2 <= v * f.upper;
                            }
                        }
                    } else {
                        const double s = std::sqrt(k) * (v - s2) / (kSqrt2 * s2);
                        hit = is_s_one_sided(method) ? s > p.cutoffs[m]
                                                     : std::abs(s) <= p.cutoffs[m];
                    }
                    if (hit) ++sc.hits[(i * nt + t) * nm + m];
                }
            }
        }
    });

    CoverageReport report;
    report.common_random_numbers = crn;
    report.cells.reserve(ncells);
    for (std::size_t i = 0; i < nn; ++i) {
        for (std::size_t t = 0; t < nt; ++t) {
            for (std::size_t m = 0; m < nm; ++m) {
                CoverageCell cell;
                cell.model = to_string(config.model.kind);
                cell.n = config.n_values[i];
                cell.tau = config.tau_values[t];
                cell.method = config.methods[m];
                cell.kn = plans[i].kn;
                cell.trials = config.replications;
                for (const auto& sc : scratch) cell.hits += sc.hits[(i * nt + t) * nm + m];
                report.cells.push_back(std::move(cell));
            }
        }
    }
    return report;
}

AnalyticCoverage analytic_coverage_constant_vol(std::int64_t kn, Probability level,
                                                CoverageMethod method,
                                                const IntervalOptions& options) {
    if (kn < 1) throw DomainError("analytic coverage: kn must be >= 1");
    const double k = static_cast<double>(kn);
    if (auto im = interval_method_of(method)) {
        const IntervalFactors f = interval_factors(*im, kn, level, options);
        if (!(f.upper > 0.0)) throw DegenerateError("analytic coverage: empty interval");
        // sigma^2 in (v f_l, v f_u)  <=>  k / f_u < chi2 < k / f_l
        const double upper_part = chisq_sf(k / f.upper, kn);
        if (is_one_sided(*im)) return {Probability(upper_part), false};
        if (!(f.lower > 0.0)) return {Probability(upper_part), true};
        const double p = upper_part - chisq_sf(k / f.lower, kn);
        return {Probability(std::clamp(p, 0.0, 1.0)), false};
    }
    // S coincides with M = (chi2 - k) / sqrt(2k).
    if (is_s_one_sided(method) && !(level > 0.5)) {
        throw DomainError("one-sided intervals need 0.5 < level < 1");
    }
    const double c = s_cutoff(method, kn, level, options.quantiles);
    const double scale = std::sqrt(2.0 * k);
    if (is_s_one_sided(method)) return {chisq_sf(std::max(k + c * scale, 0.0), kn), false};
    if (!(c > 0.0)) return {Probability(0.0), true};
    const double hi = chisq_cdf(k + c * scale, kn);
    const double lo = k - c * scale > 0.0 ? chisq_cdf(k - c * scale, kn).value() : 0.0;
    return {Probability(std::clamp(hi - lo, 0.0, 1.0)), k - c * scale <= 0.0};
}

AnalyticCoverage analytic_coverage_constant_vol(std::int64_t kn, Probability level,
                                                IntervalMethod method,
                                                const IntervalOptions& options) {
    return analytic_coverage_constant_vol(kn, level, to_coverage_method(method), options);
}

Probability exact_cdf_M(double x, std::int64_t kn) {
    if (kn < 1) throw DomainError("exact_cdf_M: kn must be >= 1");
    if (!std::isfinite(x)) throw DomainError("exact_cdf_M: x must be finite");
    const double k = static_cast<double>(kn);
    const double arg = k + x * std::sqrt(2.0 * k);
    if (arg <= 0.0) return Probability(0.0);
    return chisq_cdf(arg, kn);
}

Probability exact_cdf_T(double x, std::int64_t kn) {
    if (kn < 1) throw DomainError("exact_cdf_T: kn must be >= 1");
    if (!std::isfinite(x)) throw DomainError("exact_cdf_T: x must be finite");
    const double k = static_cast<double>(kn);
    // T <= x  <=>  k / chi2 >= 1 - x sqrt(2/k)
    const double c = 1.0 - x * std::sqrt(2.0 / k);
    if (c <= 0.0) return Probability(1.0);
    return chisq_cdf(k / c, kn);
}

CumulantSet exact_cumulants_T(std::int64_t kn) {
    if (kn <= 8) throw DomainError("exact_cumulants_T: kn must exceed 8");
    using ld = long double;
    const ld k = static_cast<ld>(kn);
    // W = k / chi2_k has E[W^m] = k^m / prod_{j=1..m} (k - 2j).
    ld ew[5] = {1, 0, 0, 0, 0};
    for (int m = 1; m <= 4; ++m) ew[m] = ew[m - 1] * k / (k - 2 * m);
    // Raw moments of D = 1 - W.
    const ld binom[5][5] = {{1}, {1, 1}, {1, 2, 1}, {1, 3, 3, 1}, {1, 4, 6, 4, 1}};
    ld ed[5] = {1, 0, 0, 0, 0};
    for (int j = 1; j <= 4; ++j) {
        ld sum = 0;
        for (int i = 0; i <= j; ++i) sum += binom[j][i] * ((i % 2) ? -ew[i] : ew[i]);
        ed[j] = sum;
    }
    // T = a D with a = sqrt(k/2).
    const ld a = std::sqrt(k / 2);
    const ld mu = a * ed[1];
    const ld c2 = a * a * (ed[2] - ed[1] * ed[1]);
    const ld c3 = a * a * a * (ed[3] - 3 * ed[2] * ed[1] + 2 * ed[1] * ed[1] * ed[1]);
    const ld c4 = a * a * a * a *
                  (ed[4] - 4 * ed[3] * ed[1] + 6 * ed[2] * ed[1] * ed[1] -
                   3 * ed[1] * ed[1] * ed[1] * ed[1]);
    CumulantSet out;
    out.kn = kn;
    out.k1 = static_cast<double>(mu);
    out.k2 = static_cast<double>(c2);
    out.k3 = static_cast<double>(c3);
    out.k4 = static_cast<double>(c4 - 3 * c2 * c2);
    return out;
}

const AuditRow& AuditReport::row(const std::string& quantity) const {
    for (const auto& r : rows) {
        if (r.quantity == quantity) return r;
    }
    throw ConfigError("audit has no row '" + quantity + "'");
}

AuditReport cumulant_audit(std::int64_t kn, std::int64_t replications, std::uint64_t seed,
                           int threads) {
    if (kn <= 8) throw ConfigError("cumulant audit needs kn > 8");
    if (replications < 2) throw ConfigError("cumulant audit needs at least two replications");
    const auto count = static_cast<std::size_t>(replications);
    const double k = static_cast<double>(kn);
    const double rk = std::sqrt(k);

    // sigma = 1; v = chi2_k / k.
    std::vector<double> mvals(count), tvals(count);
    const int nthreads = resolve_thread_count(threads);
    std::vector<std::vector<double>> bufs(static_cast<std::size_t>(nthreads),
                                          std::vector<double>(static_cast<std::size_t>(kn)));
    parallel_for(replications, nthreads, [&](int id, std::int64_t rep) {
        auto& z = bufs[static_cast<std::size_t>(id)];
        NormalStream(derive_seed(seed, static_cast<std::uint64_t>(rep)), detail::price_stream)
            .fill(0, z);
        double chi2 = 0.0;
        for (double x : z) chi2 += x * x;
        const double v = chi2 / k;
        const auto i = static_cast<std::size_t>(rep);
        mvals[i] = rk * (v - 1.0) / kSqrt2;
        tvals[i] = rk * (v - 1.0) / (kSqrt2 * v);
    });

    const double nrep = static_cast<double>(replications);
    auto mean_se = [&](auto&& f) {
        double s = 0.0;
        for (std::size_t i = 0; i < count; ++i) s += f(i);
        const double mean = s / nrep;
        double ss = 0.0;
        for (std::size_t i = 0; i < count; ++i) {
            const double d = f(i) - mean;
            ss += d * d;
        }
        return std::pair<double, double>{mean, std::sqrt(ss / (nrep - 1.0) / nrep)};
    };

    AuditReport report;
    report.kn = kn;
    report.replications = replications;
    report.seed = seed;
    const CumulantSet lead = leading_cumulants_T(kn);
    const CumulantSet exact = exact_cumulants_T(kn);

    {
        auto [m, se] = mean_se([&](std::size_t i) { return std::pow(mvals[i], 3); });
        report.rows.push_back({"E[M^3]", m, se, 2.0 * kSqrt2 / rk, 8.0 * k / std::pow(2.0 * k, 1.5)});
    }
    {
        auto [m, se] = mean_se([&](std::size_t i) { return std::pow(mvals[i], 4); });
        report.rows.push_back({"E[M^4]", m, se, 3.0 + 12.0 / k, 3.0 + 12.0 / k});
    }
    // Under constant volatility U = sqrt2 M.
    {
        auto [m, se] = mean_se([&](std::size_t i) { return mvals[i] * (kSqrt2 * mvals[i]); });
        report.rows.push_back({"E[MU]", m, se, kSqrt2, kSqrt2});
    }
    {
        auto [m, se] =
            mean_se([&](std::size_t i) { return mvals[i] * mvals[i] * (kSqrt2 * mvals[i]); });
        report.rows.push_back({"E[M^2U]", m, se, 4.0 / rk, 4.0 / rk});
    }

    auto [mu, se1] = mean_se([&](std::size_t i) { return tvals[i]; });
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double t : tvals) {
        const double d = t - mu;
        const double d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    m2 /= nrep;
    m3 /= nrep;
    m4 /= nrep;
    const double k4 = m4 - 3.0 * m2 * m2;
    report.rows.push_back({"k1[T]", mu, se1, lead.k1, exact.k1});
    {
        auto [ignored, se] = mean_se([&](std::size_t i) {
            const double d = tvals[i] - mu;
            return d * d - m2;
        });
        (void)ignored;
        report.rows.push_back({"k2[T]", m2, se, lead.k2, exact.k2});
    }
    {
        auto [ignored, se] = mean_se([&](std::size_t i) {
            const double d = tvals[i] - mu;
            return d * d * d - m3 - 3.0 * m2 * d;
        });
        (void)ignored;
        report.rows.push_back({"k3[T]", m3, se, lead.k3, exact.k3});
    }
    {
        auto [ignored, se] = mean_se([&](std::size_t i) {
            const double d = tvals[i] - mu;
            const double d2 = d * d;
            return d2 * d2 - m4 - 4.0 * m3 * d - 6.0 * m2 * (d2 - m2);
        });
        (void)ignored;
        report.rows.push_back({"k4[T]", k4, se, lead.k4, exact.k4});
    }
    return report;
}

} // namespace spotvol
