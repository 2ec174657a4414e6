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

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace spotvol {

/// Equally spaced log-price observations X_0, X_delta, ..., X_{n delta}.
/// Immutable after construction.
class PricePath {
public:
    /// Throws IngestError when fewer than two observations are given, a value
    /// is non-finite, delta_n is not positive, or delta_n * n differs from
    /// horizon by more than 1e-9 relative.
    PricePath(std::vector<double> log_prices, double delta_n, double horizon);

    /// Horizon inferred as delta_n * n.
    static PricePath on_grid(std::vector<double> log_prices, double delta_n);

    std::span<const double> log_prices() const noexcept { return log_prices_; }
    /// Number of increments n.
    std::int64_t size() const noexcept {
        return static_cast<std::int64_t>(log_prices_.size()) - 1;
    }
    double delta_n() const noexcept { return delta_n_; }
    double horizon() const noexcept { return horizon_; }

    /// Increment X_{i delta} - X_{(i-1) delta} for i in [1, n].
    double increment(std::int64_t i) const {
        return log_prices_[static_cast<std::size_t>(i)] -
               log_prices_[static_cast<std::size_t>(i - 1)];
    }

private:
    std::vector<double> log_prices_;
    double delta_n_;
    double horizon_;
};

struct SpotVolEstimate {
    double value = 0.0;   // estimated spot variance
    double tau = 0.0;
    std::int64_t kn = 0;  // effective number of returns used for inference
    double delta_n = 0.0;
    std::int64_t window_start = 0;  // first increment index used (1-based)
    std::int64_t window_end = 0;    // last increment index used (inclusive)
};

/// Grid index floor(tau / delta_n), where ratios within 1e-9 of an integer
/// are snapped to that integer first.
std::int64_t grid_index(double tau, double delta_n);

/// (1 / (k delta_n)) * sum of squared increments.
double window_estimate(std::span<const double> increments, double delta_n);

/// Uniform-window estimator over increments floor(tau/delta)+1 ..
/// floor(tau/delta)+kn. A window that runs past the last increment throws
/// WindowError; there is no clamping.
SpotVolEstimate estimate_uniform(const PricePath& path, double tau, std::int64_t kn);

enum class KernelKind { uniform, epanechnikov, quartic, triweight, custom };

class KernelSpec {
public:
    using WeightFn = std::function<double(double)>;

    /// 1{0 <= x < 1}.
    static KernelSpec uniform();
    /// 3/4 (1 - x^2) on [-1, 1].
    static KernelSpec epanechnikov();
    /// 15/16 (1 - x^2)^2 on [-1, 1].
    static KernelSpec quartic();
    /// 35/32 (1 - x^2)^3 on [-1, 1].
    static KernelSpec triweight();
    /// User-supplied kernel on [a, b]. The weight function must be
    /// nonnegative and integrate to one; both are checked with a 1e4-node
    /// trapezoid rule and violations throw ConfigError.
    static KernelSpec custom(WeightFn fn, double a, double b);

    static KernelSpec from_name(const std::string& name);

    KernelKind kind() const noexcept { return kind_; }
    double support_begin() const noexcept { return a_; }
    double support_end() const noexcept { return b_; }
    double operator()(double x) const;

private:
    KernelSpec(KernelKind kind, WeightFn fn, double a, double b)
        : kind_(kind), fn_(std::move(fn)), a_(a), b_(b) {}

    KernelKind kind_;
    WeightFn fn_;
    double a_;
    double b_;
};

const char* to_string(KernelKind kind) noexcept;

/// Kernel estimator (1/h) sum_i K(u_i) (dX_i)^2 with
/// u_i = ((i - 1) - floor(tau/delta)) delta / h, i.e. each increment is
/// weighted by the kernel at its left endpoint relative to tau. With the
/// uniform kernel and h = kn * delta this is exactly estimate_uniform.
/// Increments outside [1, n] are skipped; if no increment gets positive
/// weight a WindowError is thrown.
SpotVolEstimate estimate_kernel(const PricePath& path, double tau, double bandwidth,
                                const KernelSpec& kernel);

/// floor(c * n^exponent). Throws ConfigError when the result is below one.
std::int64_t choose_kn(std::int64_t n, double c, double exponent);

/// Defaults to the stated rule floor(0.5 n^(1/4)).
struct KnRule {
    double c = 0.5;
    double exponent = 0.25;

    std::int64_t operator()(std::int64_t n) const { return choose_kn(n, c, exponent); }

    /// The rule as stated for the simulation design, floor(0.5 n^(1/4)).
    static constexpr KnRule paper_stated() { return {0.5, 0.25}; }
    /// floor(0.5 n^(1/2)), which reproduces the magnitudes of the published
    /// coverage tables.
    static constexpr KnRule table_matching() { return {0.5, 0.5}; }
};

/// KnRule preset by name ("paper-stated" or "table-matching").
KnRule kn_rule_preset(const std::string& name);

/// sqrt(kn) (value - sigma2) / (sqrt(2) sigma2), normalized by the true
/// spot variance.
double statistic_S(const SpotVolEstimate& est, double true_sigma2);

/// sqrt(kn) (value - sigma2) / (sqrt(2) value), studentized by the estimate
/// itself. Throws DegenerateError when the estimate is zero.
double statistic_T(const SpotVolEstimate& est, double sigma2);

} // namespace spotvol
