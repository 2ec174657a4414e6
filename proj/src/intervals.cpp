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

#include "spotvol/intervals.hpp"

#include <cassert>
#include <cmath>
#include <numbers>

#include "spotvol/error.hpp"

namespace spotvol {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;

void check_level(IntervalMethod method, double level) {
    if (is_one_sided(method)) {
        if (!(level > 0.5 && level < 1.0)) {
            throw DomainError("one-sided intervals need 0.5 < level < 1");
        }
    } else if (!(level > 0.0 && level < 1.0)) {
        throw DomainError("two-sided intervals need 0 < level < 1");
    }
}

void check_kn(std::int64_t kn) {
    if (kn < 1) throw DomainError("interval: kn must be >= 1");
}

} // namespace

const char* to_string(IntervalMethod method) noexcept {
    switch (method) {
        case IntervalMethod::normal_one_sided: return "normal_one_sided";
        case IntervalMethod::edgeworth_one_sided: return "edgeworth_one_sided";
        case IntervalMethod::normal_two_sided: return "normal_two_sided";
        case IntervalMethod::edgeworth_two_sided: return "edgeworth_two_sided";
    }
    return "unknown";
}

IntervalMethod interval_method_from_string(const std::string& name) {
    for (auto m : kAllIntervalMethods) {
        if (name == to_string(m)) return m;
    }
    throw ConfigError("unknown interval method '" + name + "'");
}

bool is_one_sided(IntervalMethod method) noexcept {
    return method == IntervalMethod::normal_one_sided ||
           method == IntervalMethod::edgeworth_one_sided;
}

bool IntervalResult::contains(double sigma2) const noexcept {
    if (is_one_sided(method)) return sigma2 > 0.0 && sigma2 < upper;
    return lower <= sigma2 && sigma2 <= upper;
}

IntervalFactors interval_factors(IntervalMethod method, std::int64_t kn, Probability level,
                                 const IntervalOptions& options) {
    check_kn(kn);
    check_level(method, level);
    const double k = static_cast<double>(kn);
    const double rk = std::sqrt(k);

    switch (method) {
        case IntervalMethod::normal_one_sided:
        case IntervalMethod::edgeworth_one_sided: {
            const double z = normal_quantile(1.0 - level, options.quantiles);
            double upper = 1.0 - kSqrt2 * z / rk;
            if (method == IntervalMethod::edgeworth_one_sided) upper += kSqrt2 * q1(z) / k;
            return {0.0, upper};
        }
        case IntervalMethod::normal_two_sided:
        case IntervalMethod::edgeworth_two_sided: {
            const double z = normal_quantile(0.5 * (1.0 + level), options.quantiles);
            double half = kSqrt2 * z / rk;
            if (method == IntervalMethod::edgeworth_two_sided) {
                half -= kSqrt2 * q2(z, options.q2_form) / (k * rk);
            }
            if (!(half > 0.0)) {
                throw DegenerateError("two-sided interval: correction term exceeds the normal half-width");
            }
            return {1.0 - half, 1.0 + half};
        }
    }
    throw DomainError("interval_factors: unknown method");
}

IntervalResult build_interval(IntervalMethod method, const SpotVolEstimate& est,
                              Probability level, const IntervalOptions& options) {
    if (!(est.value > 0.0)) {
        throw DegenerateError("interval: the spot variance estimate is zero");
    }
    const IntervalFactors f = interval_factors(method, est.kn, level, options);

    IntervalResult out;
    out.nominal_level = level;
    out.method = method;
    out.kn = est.kn;
    out.upper = est.value * f.upper;
    out.lower = est.value * f.lower;
    if (out.lower < 0.0) {
        out.lower = 0.0;
        out.lower_clamped = true;
    }
    assert(out.upper > 0.0);
    return out;
}

IntervalResult normal_one_sided(const SpotVolEstimate& est, Probability level,
                                const IntervalOptions& options) {
    return build_interval(IntervalMethod::normal_one_sided, est, level, options);
}

IntervalResult edgeworth_one_sided(const SpotVolEstimate& est, Probability level,
                                   const IntervalOptions& options) {
    return build_interval(IntervalMethod::edgeworth_one_sided, est, level, options);
}

IntervalResult normal_two_sided(const SpotVolEstimate& est, Probability level,
                                const IntervalOptions& options) {
    return build_interval(IntervalMethod::normal_two_sided, est, level, options);
}

IntervalResult edgeworth_two_sided(const SpotVolEstimate& est, Probability level,
                                   const IntervalOptions& options) {
    return build_interval(IntervalMethod::edgeworth_two_sided, est, level, options);
}

} // namespace spotvol
