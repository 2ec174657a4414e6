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
#include <string>

#include "spotvol/edgeworth.hpp"
#include "spotvol/estimator.hpp"
#include "spotvol/special_functions.hpp"

namespace spotvol {

enum class IntervalMethod {
    normal_one_sided,
    edgeworth_one_sided,
    normal_two_sided,
    edgeworth_two_sided,
};

inline constexpr std::array<IntervalMethod, 4> kAllIntervalMethods = {
    IntervalMethod::normal_one_sided, IntervalMethod::edgeworth_one_sided,
    IntervalMethod::normal_two_sided, IntervalMethod::edgeworth_two_sided};

const char* to_string(IntervalMethod method) noexcept;
IntervalMethod interval_method_from_string(const std::string& name);
bool is_one_sided(IntervalMethod method) noexcept;

struct IntervalOptions {
    QuantileConvention quantiles = QuantileConvention::exact;
    Q2Form q2_form = Q2Form::derived;
};

/// Confidence interval for the spot variance. One-sided intervals have
/// lower = 0. Two-sided lower bounds that would be negative are clamped to
/// zero and flagged.
struct IntervalResult {
    double lower = 0.0;
    double upper = 0.0;
    Probability nominal_level;
    IntervalMethod method = IntervalMethod::normal_one_sided;
    std::int64_t kn = 0;
    bool lower_clamped = false;

    /// Membership test; one-sided intervals are open at zero.
    bool contains(double sigma2) const noexcept;
};

// Each constructor requires est.value > 0 (DegenerateError otherwise).
// One-sided intervals require 0.5 < level < 1, two-sided 0 < level < 1;
// violations throw DomainError.

/// (0, v (1 - sqrt2 z / sqrt kn)) with z the (1 - level) normal quantile.
IntervalResult normal_one_sided(const SpotVolEstimate& est, Probability level,
                                const IntervalOptions& options = {});

/// Adds the skewness term sqrt2 v q1(z) / kn to the normal upper bound.
IntervalResult edgeworth_one_sided(const SpotVolEstimate& est, Probability level,
                                   const IntervalOptions& options = {});

/// v -/+ sqrt2 v z / sqrt kn with z the (1 + level) / 2 quantile.
IntervalResult normal_two_sided(const SpotVolEstimate& est, Probability level,
                                const IntervalOptions& options = {});

/// Half-width sqrt2 v z / sqrt kn - sqrt2 v q2(z) / kn^(3/2).
IntervalResult edgeworth_two_sided(const SpotVolEstimate& est, Probability level,
                                   const IntervalOptions& options = {});

IntervalResult build_interval(IntervalMethod method, const SpotVolEstimate& est,
                              Probability level, const IntervalOptions& options = {});

/// Multiplicative factors (lower, upper) such that the interval equals
/// (v * lower, v * upper) before clamping. These depend only on kn, level
/// and method, which is what the analytic coverage oracle inverts.
struct IntervalFactors {
    double lower;
    double upper;
};
IntervalFactors interval_factors(IntervalMethod method, std::int64_t kn, Probability level,
                                 const IntervalOptions& options = {});

} // namespace spotvol
