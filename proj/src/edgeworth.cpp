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

#include "spotvol/edgeworth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "spotvol/error.hpp"

namespace spotvol {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;

double h1(double x) { return x; }
double h3(double x) { return x * (x * x - 3.0); }
double h5(double x) {
    const double x2 = x * x;
    return x * ((x2 - 10.0) * x2 + 15.0);
}

void check_kn(std::int64_t kn) {
    if (kn < 1) throw DomainError("window size kn must be >= 1, got " + std::to_string(kn));
}

ExpansionValue finish(double raw) {
    ExpansionValue out;
    out.raw = raw;
    if (raw < 0.0 || raw > 1.0 || std::isnan(raw)) {
        out.clamped = true;
        raw = std::isnan(raw) ? 0.0 : std::clamp(raw, 0.0, 1.0);
    }
    out.probability = Probability(raw);
    return out;
}

} // namespace

double hermite(int order, double x) {
    switch (order) {
        case 1: return h1(x);
        case 3: return h3(x);
        case 5: return h5(x);
        default:
            throw DomainError("hermite: only orders 1, 3 and 5 are supported, got " +
                              std::to_string(order));
    }
}

double p1(double x) { return -(kSqrt2 / 3.0) * (x * x - 1.0); }

double p2(double x) { return -0.5 * h3(x) - h5(x) / 9.0; }

double q1(double x) { return kSqrt2 + (2.0 * kSqrt2 / 3.0) * (x * x - 1.0); }

double q2(double x, Q2Form form) {
    const double fifth = (form == Q2Form::derived ? -4.0 : 4.0) / 9.0;
    return -5.0 * h1(x) - (23.0 / 6.0) * h3(x) + fifth * h5(x);
}

CumulantSet leading_cumulants_S(std::int64_t kn) {
    check_kn(kn);
    const double k = static_cast<double>(kn);
    return {0.0, 1.0, 2.0 * kSqrt2 / std::sqrt(k), 12.0 / k, kn};
}

CumulantSet leading_cumulants_T(std::int64_t kn) {
    check_kn(kn);
    const double k = static_cast<double>(kn);
    const double rk = std::sqrt(k);
    return {-kSqrt2 / rk, 1.0 + 8.0 / k, -4.0 * kSqrt2 / rk, 60.0 / k, kn};
}

ExpansionValue edgeworth_cdf_S(double x, std::int64_t kn) {
    check_kn(kn);
    const double k = static_cast<double>(kn);
    const double density = normal_pdf(x);
    return finish(normal_cdf(x) + p1(x) * density / std::sqrt(k) + p2(x) * density / k);
}

ExpansionValue edgeworth_cdf_T(double x, std::int64_t kn, Q2Form form) {
    check_kn(kn);
    const double k = static_cast<double>(kn);
    const double density = normal_pdf(x);
    return finish(normal_cdf(x) + q1(x) * density / std::sqrt(k) + q2(x, form) * density / k);
}

} // namespace spotvol
