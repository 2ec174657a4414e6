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

namespace spotvol {

/// A probability in [0, 1]. Constructing from a value outside the unit
/// interval (or NaN) throws DomainError.
class Probability {
public:
    constexpr Probability() = default;
    explicit Probability(double value);

    constexpr double value() const noexcept { return value_; }
    constexpr operator double() const noexcept { return value_; }

private:
    double value_ = 0.0;
};

/// How normal quantiles are obtained. `paper` reproduces the rounded
/// constants z(0.05) = -1.645 and z(0.975) = 1.96 (and their mirrors); every
/// other probability falls back to the exact quantile.
enum class QuantileConvention { exact, paper };

// Standard normal distribution. All functions throw DomainError on
// non-finite input.
Probability normal_cdf(double x);
double normal_pdf(double x);

/// Inverse of normal_cdf on (0, 1). Accurate to ~1e-15 in z after one
/// Halley refinement of Acklam's rational approximation.
double normal_quantile(double p, QuantileConvention convention = QuantileConvention::exact);

/// Regularized lower incomplete gamma P(a, x), a > 0, x >= 0.
double regularized_gamma_p(double a, double x);
/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x), computed
/// without cancellation.
double regularized_gamma_q(double a, double x);

/// Chi-square CDF with `dof` degrees of freedom.
Probability chisq_cdf(double x, std::int64_t dof);
/// Chi-square survival function 1 - chisq_cdf(x, dof).
Probability chisq_sf(double x, std::int64_t dof);

} // namespace spotvol
