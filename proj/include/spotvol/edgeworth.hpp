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

#include "spotvol/special_functions.hpp"

namespace spotvol {

/// Hermite polynomial H_order(x) for order in {1, 3, 5}; any other order
/// throws DomainError.
double hermite(int order, double x);

// Correction polynomials of the second-order expansions
//   P(S <= x) = Phi(x) + p1(x) phi(x) / sqrt(kn) + p2(x) phi(x) / kn
//   P(T <= x) = Phi(x) + q1(x) phi(x) / sqrt(kn) + q2(x) phi(x) / kn
double p1(double x);
double p2(double x);
double q1(double x);

/// Which H5 sign q2 carries. `derived` follows from the T cumulants
/// (k1 = -sqrt2/sqrt kn, k2 = 1 + 8/kn, k3 = -4 sqrt2/sqrt kn, k4 = 60/kn)
/// and matches the exact constant-volatility distribution of T;
/// `as_printed` keeps +4/9 H5 as it appears in the published statement.
enum class Q2Form { derived, as_printed };

double q2(double x, Q2Form form = Q2Form::derived);

/// Leading-order cumulants of a normalized statistic at window size kn.
struct CumulantSet {
    double k1 = 0.0;
    double k2 = 1.0;
    double k3 = 0.0;
    double k4 = 0.0;
    std::int64_t kn = 1;
};

CumulantSet leading_cumulants_S(std::int64_t kn);
CumulantSet leading_cumulants_T(std::int64_t kn);

/// Value of a truncated expansion. The raw series is not a distribution
/// function; values outside [0, 1] are clamped and `clamped` is set.
struct ExpansionValue {
    Probability probability;
    double raw = 0.0;
    bool clamped = false;
};

ExpansionValue edgeworth_cdf_S(double x, std::int64_t kn);
ExpansionValue edgeworth_cdf_T(double x, std::int64_t kn, Q2Form form = Q2Form::derived);

} // namespace spotvol
