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

#include "spotvol/estimator.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "spotvol/error.hpp"

namespace spotvol {

namespace {

constexpr double kSnapTolerance = 1e-9;

// floor(x), treating values within kSnapTolerance of an integer as that
// integer.
std::int64_t snapped_floor(double x) {
    const double nearest = std::round(x);
    if (std::abs(x - nearest) <= kSnapTolerance * std::max(1.0, std::abs(x))) {
        return static_cast<std::int64_t>(nearest);
    }
    return static_cast<std::int64_t>(std::floor(x));
}

void check_tau(const PricePath& path, double tau) {
    if (!std::isfinite(tau) || tau < 0.0) {
        throw DomainError("tau must be finite and >= 0");
    }
    if (tau > path.horizon() * (1.0 + kSnapTolerance)) {
        std::ostringstream os;
        os << "tau = " << tau << " lies beyond the sample horizon " << path.horizon();
        throw WindowError(os.str());
    }
}

} // namespace

PricePath::PricePath(std::vector<double> log_prices, double delta_n, double horizon)
    : log_prices_(std::move(log_prices)), delta_n_(delta_n), horizon_(horizon) {
    if (log_prices_.size() < 2) {
        throw IngestError("a price path needs at least two observations");
    }
    if (!(delta_n_ > 0.0) || !std::isfinite(delta_n_)) {
        throw IngestError("grid spacing delta_n must be positive and finite");
    }
    const double n = static_cast<double>(log_prices_.size() - 1);
    if (!(horizon_ > 0.0) || std::abs(delta_n_ * n - horizon_) > 1e-9 * horizon_) {
        std::ostringstream os;
        os.precision(17);
        os << "inconsistent grid: delta_n * n = " << delta_n_ * n << " but horizon = " << horizon_;
        throw IngestError(os.str());
    }
    for (std::size_t i = 0; i < log_prices_.size(); ++i) {
        if (!std::isfinite(log_prices_[i])) {
            throw IngestError("non-finite log-price at observation " + std::to_string(i));
        }
    }
}

PricePath PricePath::on_grid(std::vector<double> log_prices, double delta_n) {
    const double horizon = delta_n * static_cast<double>(log_prices.size() - 1);
    return PricePath(std::move(log_prices), delta_n, horizon);
}

std::int64_t grid_index(double tau, double delta_n) { return snapped_floor(tau / delta_n); }

double window_estimate(std::span<const double> increments, double delta_n) {
    double sum = 0.0;
    for (double dx : increments) sum += dx * dx;
    return sum / (static_cast<double>(increments.size()) * delta_n);
}

SpotVolEstimate estimate_uniform(const PricePath& path, double tau, std::int64_t kn) {
    if (kn < 1) throw DomainError("kn must be >= 1");
    check_tau(path, tau);
    const std::int64_t start = grid_index(tau, path.delta_n()) + 1;
    const std::int64_t end = start + kn - 1;
    if (end > path.size()) {
        std::ostringstream os;
        os << "estimation window [" << start << ", " << end << "] runs past the last increment "
           << path.size() << " (tau = " << tau << ", kn = " << kn << ")";
        throw WindowError(os.str());
    }
    double sum = 0.0;
    for (std::int64_t i = start; i <= end; ++i) {
        const double dx = path.increment(i);
        sum += dx * dx;
    }
    SpotVolEstimate est;
    est.value = sum / (static_cast<double>(kn) * path.delta_n());
    est.tau = tau;
    est.kn = kn;
    est.delta_n = path.delta_n();
    est.window_start = start;
    est.window_end = end;
    return est;
}

// ---------------------------------------------------------------------------
// Kernels
// ---------------------------------------------------------------------------

KernelSpec KernelSpec::uniform() {
    return KernelSpec(KernelKind::uniform, [](double x) { return (x >= 0.0 && x < 1.0) ? 1.0 : 0.0; },
                      0.0, 1.0);
}

KernelSpec KernelSpec::epanechnikov() {
    return KernelSpec(
        KernelKind::epanechnikov,
        [](double x) { return std::abs(x) <= 1.0 ? 0.75 * (1.0 - x * x) : 0.0; }, -1.0, 1.0);
}

KernelSpec KernelSpec::quartic() {
    return KernelSpec(
        KernelKind::quartic,
        [](double x) {
            if (std::abs(x) > 1.0) return 0.0;
            const double t = 1.0 - x * x;
            return (15.0 / 16.0) * t * t;
        },
        -1.0, 1.0);
}

KernelSpec KernelSpec::triweight() {
    return KernelSpec(
        KernelKind::triweight,
        [](double x) {
            if (std::abs(x) > 1.0) return 0.0;
            const double t = 1.0 - x * x;
            return (35.0 / 32.0) * t * t * t;
        },
        -1.0, 1.0);
}

KernelSpec KernelSpec::custom(WeightFn fn, double a, double b) {
    if (!fn) throw ConfigError("custom kernel: empty weight function");
    if (!std::isfinite(a) || !std::isfinite(b) || !(a < b)) {
        throw ConfigError("custom kernel: support must be a bounded interval [a, b] with a < b");
    }
    constexpr int nodes = 10000;
    const double step = (b - a) / nodes;
    double integral = 0.0;
    double integral_sq = 0.0;
    for (int i = 0; i <= nodes; ++i) {
        const double x = (i == nodes) ? b : a + i * step;
        const double w = fn(x);
        if (!std::isfinite(w) || w < 0.0) {
            std::ostringstream os;
            os << "custom kernel: weight " << w << " at x = " << x << " is negative or non-finite";
            throw ConfigError(os.str());
        }
        const double edge = (i == 0 || i == nodes) ? 0.5 : 1.0;
        integral += edge * w;
        integral_sq += edge * w * w;
    }
    integral *= step;
    integral_sq *= step;
    if (std::abs(integral - 1.0) > 1e-6) {
        std::ostringstream os;
        os.precision(10);
        os << "custom kernel: integral over support is " << integral << ", expected 1";
        throw ConfigError(os.str());
    }
    if (!std::isfinite(integral_sq)) throw ConfigError("custom kernel: K^2 is not integrable");
    return KernelSpec(KernelKind::custom, std::move(fn), a, b);
}

KernelSpec KernelSpec::from_name(const std::string& name) {
    if (name == "uniform") return uniform();
    if (name == "epanechnikov") return epanechnikov();
    if (name == "quartic") return quartic();
    if (name == "triweight") return triweight();
    throw ConfigError("unknown kernel '" + name +
                      "' (expected uniform, epanechnikov, quartic or triweight)");
}

double KernelSpec::operator()(double x) const { return fn_(x); }

const char* to_string(KernelKind kind) noexcept {
    switch (kind) {
        case KernelKind::uniform: return "uniform";
        case KernelKind::epanechnikov: return "epanechnikov";
        case KernelKind::quartic: return "quartic";
        case KernelKind::triweight: return "triweight";
        case KernelKind::custom: return "custom";
    }
    return "unknown";
}

SpotVolEstimate estimate_kernel(const PricePath& path, double tau, double bandwidth,
                                const KernelSpec& kernel) {
    check_tau(path, tau);
    const double delta = path.delta_n();
    if (!std::isfinite(bandwidth) || bandwidth < delta * (1.0 - kSnapTolerance)) {
        throw DomainError("bandwidth must be finite and at least one grid step");
    }
    const std::int64_t origin = grid_index(tau, delta);
    const double ratio = bandwidth / delta;

    // Offsets j = i - 1 - origin with u = j delta / h inside the support;
    // one extra step on each side so the kernel itself decides the edges.
    const auto j_lo = static_cast<std::int64_t>(std::floor(kernel.support_begin() * ratio)) - 1;
    const auto j_hi = static_cast<std::int64_t>(std::ceil(kernel.support_end() * ratio)) + 1;
    const std::int64_t i_lo = std::max<std::int64_t>(1, origin + 1 + j_lo);
    const std::int64_t i_hi = std::min<std::int64_t>(path.size(), origin + 1 + j_hi);

    double sum = 0.0;
    std::int64_t first = 0;
    std::int64_t last = 0;
    for (std::int64_t i = i_lo; i <= i_hi; ++i) {
        const double u = static_cast<double>(i - 1 - origin) * delta / bandwidth;
        const double w = kernel(u);
        if (w <= 0.0) continue;
        if (first == 0) first = i;
        last = i;
        const double dx = path.increment(i);
        sum += w * (dx * dx);
    }
    if (first == 0) {
        throw WindowError("kernel support around tau contains no increment of the sample");
    }

    SpotVolEstimate est;
    est.value = sum / bandwidth;
    est.tau = tau;
    est.kn = std::max<std::int64_t>(1, snapped_floor(ratio));
    est.delta_n = delta;
    est.window_start = first;
    est.window_end = last;
    return est;
}

std::int64_t choose_kn(std::int64_t n, double c, double exponent) {
    if (n < 1) throw ConfigError("choose_kn: n must be >= 1");
    if (!(c > 0.0) || !std::isfinite(c)) throw ConfigError("choose_kn: c must be positive");
    if (!(exponent > 0.0 && exponent < 1.0)) {
        throw ConfigError("choose_kn: exponent must lie in (0, 1)");
    }
    const std::int64_t kn = snapped_floor(c * std::pow(static_cast<double>(n), exponent));
    if (kn < 1) {
        std::ostringstream os;
        os << "kn rule floor(" << c << " * " << n << "^" << exponent << ") = " << kn
           << " < 1; increase c or the exponent";
        throw ConfigError(os.str());
    }
    return kn;
}

KnRule kn_rule_preset(const std::string& name) {
    if (name == "paper-stated") return KnRule::paper_stated();
    if (name == "table-matching") return KnRule::table_matching();
    throw ConfigError("unknown kn rule preset '" + name +
                      "' (expected paper-stated or table-matching)");
}

double statistic_S(const SpotVolEstimate& est, double true_sigma2) {
    if (!(true_sigma2 > 0.0) || !std::isfinite(true_sigma2)) {
        throw DomainError("statistic_S: true spot variance must be positive");
    }
    return std::sqrt(static_cast<double>(est.kn)) * (est.value - true_sigma2) /
           (std::numbers::sqrt2 * true_sigma2);
}

double statistic_T(const SpotVolEstimate& est, double sigma2) {
    if (!std::isfinite(sigma2)) throw DomainError("statistic_T: sigma2 must be finite");
    if (!(est.value > 0.0)) {
        throw DegenerateError("statistic_T: the estimate is zero, studentization is undefined");
    }
    return std::sqrt(static_cast<double>(est.kn)) * (est.value - sigma2) /
           (std::numbers::sqrt2 * est.value);
}

} // namespace spotvol
