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

#include <doctest.h>

#include <cmath>
#include <random>

#include "oracle/oracle_values.hpp"
#include "spotvol/error.hpp"
#include "spotvol/intervals.hpp"

using namespace spotvol;

namespace {

SpotVolEstimate est(double value, std::int64_t kn) {
    SpotVolEstimate e;
    e.value = value;
    e.kn = kn;
    e.tau = 0.5;
    e.delta_n = 1e-3;
    return e;
}

const IntervalOptions kPaper{QuantileConvention::paper, Q2Form::derived};
const IntervalOptions kPaperPrinted{QuantileConvention::paper, Q2Form::as_printed};
const Probability k95(0.95);

} // namespace

TEST_CASE("normal one-sided") {
    const IntervalResult r = normal_one_sided(est(1.0, 100), k95, kPaper);
    CHECK(r.lower == 0.0);
    CHECK(r.upper == doctest::Approx(oracle::n1_upper_k100).epsilon(1e-14));
    CHECK(r.method == IntervalMethod::normal_one_sided);
    CHECK(r.kn == 100);
    const double excess1 = r.upper - 1.0;
    const double excess2 = normal_one_sided(est(2.0, 100), k95, kPaper).upper - 2.0;
    CHECK(excess2 == doctest::Approx(2.0 * excess1).epsilon(1e-14));
    CHECK(normal_one_sided(est(1.0, 100'000'000), k95).upper == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("edgeworth one-sided") {
    CHECK(edgeworth_one_sided(est(1.0, 100), k95, kPaper).upper ==
          doctest::Approx(oracle::e1_upper_k100).epsilon(1e-14));
    CHECK(edgeworth_one_sided(est(1.0, 76), k95, kPaper).upper ==
          doctest::Approx(oracle::e1_upper_k76).epsilon(1e-14));
    // Agreement with the rounded anchor values.
    CHECK(edgeworth_one_sided(est(1.0, 100), k95, kPaper).upper == doctest::Approx(1.27539).epsilon(1e-5));
    const std::int64_t big = 1'000'000'000;
    const double gap = edgeworth_one_sided(est(1.0, big), k95).upper - normal_one_sided(est(1.0, big), k95).upper;
    CHECK(gap > 0.0);
    CHECK(gap < 1e-8);
}

TEST_CASE("normal two-sided") {
    const IntervalResult r = normal_two_sided(est(1.0, 100), k95, kPaper);
    CHECK(r.lower == doctest::Approx(1.0 - oracle::n2_half_k100).epsilon(1e-14));
    CHECK(r.upper == doctest::Approx(1.0 + oracle::n2_half_k100).epsilon(1e-14));
    CHECK_FALSE(r.lower_clamped);
    const IntervalResult half = normal_two_sided(est(0.5, 100), k95, kPaper);
    CHECK(half.upper - 0.5 == doctest::Approx(0.5 * (r.upper - 1.0)).epsilon(1e-14));
    const IntervalResult small = normal_two_sided(est(1.0, 3), k95);
    CHECK(small.lower == 0.0);
    CHECK(small.lower_clamped);
}

TEST_CASE("edgeworth two-sided") {
    const IntervalResult printed = edgeworth_two_sided(est(1.0, 100), k95, kPaperPrinted);
    CHECK(printed.upper - 1.0 == doctest::Approx(oracle::e2_half_k100_printed).epsilon(1e-13));
    CHECK(1.0 - printed.lower == doctest::Approx(oracle::e2_half_k100_printed).epsilon(1e-13));
    CHECK(printed.upper - 1.0 == doctest::Approx(0.31066).epsilon(2e-5));
    const IntervalResult printed76 = edgeworth_two_sided(est(1.0, 76), k95, kPaperPrinted);
    CHECK(printed76.upper - 1.0 == doctest::Approx(oracle::e2_half_k76_printed).epsilon(1e-13));
    CHECK(printed76.upper - 1.0 == doctest::Approx(0.36846).epsilon(2e-5));
    const IntervalResult derived = edgeworth_two_sided(est(1.0, 100), k95, kPaper);
    CHECK(derived.upper - 1.0 == doctest::Approx(oracle::e2_half_k100_derived).epsilon(1e-13));
    const std::int64_t big = 1'000'000'000;
    CHECK(edgeworth_two_sided(est(1.0, big), k95).upper ==
          doctest::Approx(normal_two_sided(est(1.0, big), k95).upper).epsilon(1e-10));
}

TEST_CASE("precondition errors") {
    CHECK_THROWS_AS(normal_one_sided(est(1.0, 10), Probability(0.5)), DomainError);
    CHECK_THROWS_AS(edgeworth_one_sided(est(1.0, 10), Probability(0.3)), DomainError);
    CHECK_THROWS_AS(normal_two_sided(est(1.0, 10), Probability(1.0)), DomainError);
    CHECK_THROWS_AS(normal_one_sided(est(0.0, 10), k95), DegenerateError);
    CHECK_THROWS_AS(normal_two_sided(est(1.0, 0), k95), DomainError);
    CHECK_NOTHROW(normal_two_sided(est(1.0, 10), Probability(0.3)));
    CHECK_THROWS_AS(interval_method_from_string("bootstrap"), ConfigError);
    for (IntervalMethod m : kAllIntervalMethods) CHECK(interval_method_from_string(to_string(m)) == m);
}

TEST_CASE("contains") {
    const IntervalResult one = normal_one_sided(est(1.0, 100), k95);
    CHECK(one.contains(1.1));
    CHECK_FALSE(one.contains(0.0));
    CHECK_FALSE(one.contains(1.3));
    const IntervalResult two = normal_two_sided(est(1.0, 100), k95);
    CHECK(two.contains(0.8));
    CHECK_FALSE(two.contains(0.7));
}

TEST_CASE("sign facts behind the nesting property") {
    CHECK(q1(normal_quantile(0.05)) > 0.0);
    CHECK(q2(normal_quantile(0.975)) < 0.0);
    CHECK(q2(normal_quantile(0.975), Q2Form::as_printed) < 0.0);
}

TEST_CASE("property: nesting at 95%") {
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> value(1e-4, 10.0);
    std::uniform_int_distribution<std::int64_t> kn(1, 5000);
    for (int i = 0; i < 2000; ++i) {
        const SpotVolEstimate e = est(value(gen), kn(gen));
        for (const IntervalOptions& opt : {IntervalOptions{}, kPaper, kPaperPrinted}) {
            CHECK(edgeworth_one_sided(e, k95, opt).upper > normal_one_sided(e, k95, opt).upper);
            const IntervalResult en = edgeworth_two_sided(e, k95, opt);
            const IntervalResult nn = normal_two_sided(e, k95, opt);
            CHECK(en.upper > nn.upper);
            CHECK(en.lower <= nn.lower);
            if (!nn.lower_clamped) CHECK(en.lower < nn.lower);
        }
    }
}

TEST_CASE("property: scale equivariance of all bounds") {
    for (IntervalMethod m : kAllIntervalMethods) {
        const IntervalResult a = build_interval(m, est(1.0, 400), k95);
        const IntervalResult b = build_interval(m, est(7.25, 400), k95);
        CHECK(b.lower == doctest::Approx(7.25 * a.lower).epsilon(1e-14));
        CHECK(b.upper == doctest::Approx(7.25 * a.upper).epsilon(1e-14));
    }
}

TEST_CASE("property: wider at higher level") {
    for (IntervalMethod m : kAllIntervalMethods) {
        for (std::int64_t kn : {10, 50, 400}) {
            double prev_lower = 1e300, prev_upper = -1e300;
            for (double level = 0.8; level <= 0.999 + 1e-12; level += 0.001) {
                const IntervalResult r = build_interval(m, est(1.0, kn), Probability(level));
                CHECK(r.upper >= prev_upper);
                CHECK(r.lower <= prev_lower);
                prev_lower = r.lower;
                prev_upper = r.upper;
            }
        }
    }
}

TEST_CASE("property: bounds are ordered and nonnegative") {
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> level(0.8, 0.999);
    std::uniform_int_distribution<std::int64_t> kn(2, 300);
    for (int i = 0; i < 2000; ++i) {
        const SpotVolEstimate e = est(0.2, kn(gen));
        const Probability l(level(gen));
        for (IntervalMethod m : kAllIntervalMethods) {
            const IntervalResult r = build_interval(m, e, l);
            CHECK(r.lower >= 0.0);
            CHECK(r.lower <= r.upper);
            const IntervalFactors f = interval_factors(m, e.kn, l);
            CHECK(r.upper == doctest::Approx(0.2 * f.upper).epsilon(1e-14));
        }
    }
}
