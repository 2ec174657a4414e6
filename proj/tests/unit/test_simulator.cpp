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

#include <algorithm>
#include <cmath>
#include <vector>

#include "oracle/oracle_values.hpp"
#include "spotvol/error.hpp"
#include "spotvol/simulator.hpp"

using namespace spotvol;

namespace {

double correlation(const std::vector<double>& a, const std::vector<double>& b) {
    const double n = static_cast<double>(a.size());
    double ma = 0, mb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ma += a[i];
        mb += b[i];
    }
    ma /= n;
    mb /= n;
    double sab = 0, saa = 0, sbb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sab += (a[i] - ma) * (b[i] - mb);
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
    }
    return sab / std::sqrt(saa * sbb);
}

// Brownian increments of the price and of the first factor, recovered from
// a model1 path simulated with one Euler step per observation.
void recover_drivers(const ModelSpec& model, const SimulatedPath& sp, std::vector<double>& db,
                     std::vector<double>& dw) {
    const double delta = sp.path.delta_n();
    const double alpha = model.param("alpha");
    for (std::int64_t i = 1; i <= sp.path.size(); ++i) {
        const auto j = static_cast<std::size_t>(i);
        db.push_back((sp.path.increment(i) - model.drift_b * delta) / std::sqrt(sp.true_spot_vol[j - 1]));
        dw.push_back(sp.factor[j] - sp.factor[j - 1] - alpha * sp.factor[j - 1] * delta);
    }
}

} // namespace

TEST_CASE("growth function") {
    const double l = std::log(1.5);
    CHECK(growth_function_f(l) == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(growth_function_f(std::nextafter(l, 10.0)) == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(growth_function_f(0.0) == 1.0);
    CHECK(growth_function_f(1.0) == doctest::Approx(oracle::growth_f_1).epsilon(1e-14));
    for (double x = -50.0; x <= 50.0; x += 0.25) CHECK(growth_function_f(x) > 0.0);
}

TEST_CASE("default parameter sets") {
    const ModelSpec m1 = default_model1();
    CHECK(m1.kind == ModelKind::model1);
    CHECK(m1.param("beta0") == -2.5);
    CHECK(m1.param("beta1") == 0.125);
    CHECK(m1.param("alpha") == -0.025);
    CHECK(m1.drift_b == 1.0);
    CHECK(m1.v0 == 0.1);
    CHECK(m1.x0 == 0.0);
    const ModelSpec m2 = default_model2();
    CHECK(m2.param("phi") == 0.25);
    CHECK(m2.param("beta0") == -1.2);
    CHECK(m2.param("beta1") == 0.04);
    CHECK(m2.param("beta2") == 1.5);
    CHECK(m2.param("alpha1") == -0.0037);
    CHECK(m2.param("alpha2") == -1.386);
    CHECK_NOTHROW(m1.validate());
    CHECK_NOTHROW(m2.validate());
    CHECK_THROWS_AS(m1.param("phi"), ConfigError);
}

TEST_CASE("model validation") {
    ModelSpec m = default_model1();
    m.params.erase("alpha");
    CHECK_THROWS_AS(m.validate(), ConfigError);
    m = default_model1();
    m.params["phi"] = 1.0;
    CHECK_THROWS_AS(m.validate(), ConfigError);
    CHECK_THROWS_AS(constant_vol_model(0.0).validate(), ConfigError);
    m = default_model2();
    m.rho = 1.5;
    CHECK_THROWS_AS(m.validate(), ConfigError);
    CHECK_THROWS_AS(simulate(default_model1(), 1, 1.0, 10, 0), ConfigError);
    CHECK_THROWS_AS(simulate(default_model1(), 100, 1.0, 0, 0), ConfigError);
    CHECK_THROWS_AS(model_kind_from_string("heston"), ConfigError);
    CHECK(model_kind_from_string("model2") == ModelKind::model2);
}

TEST_CASE("constant volatility increments are iid normal") {
    const double sigma0 = 0.4;
    const std::int64_t n = 100000;
    const SimulatedPath sp = simulate(constant_vol_model(sigma0), n, 1.0, 1, 77);
    const double delta = sp.path.delta_n();
    double sq = 0.0;
    for (std::int64_t i = 1; i <= n; ++i) sq += sp.path.increment(i) * sp.path.increment(i);
    const double var = sq / static_cast<double>(n);
    const double target = sigma0 * sigma0 * delta;
    CHECK(std::abs(var / target - 1.0) <= 3.0 * std::sqrt(2.0 / static_cast<double>(n)));
    CHECK(sp.true_spot_vol.size() == static_cast<std::size_t>(n + 1));
    CHECK(sp.factor.empty());
}

TEST_CASE("drift-only limit") {
    ModelSpec m = constant_vol_model(1e-6, 1.0);
    m.x0 = 2.0;
    const SimulatedPath sp = simulate(m, 500, 1.0, 4, 3);
    const auto x = sp.path.log_prices();
    for (std::size_t i = 0; i < x.size(); ++i) {
        CHECK(std::abs(x[i] - 2.0 - static_cast<double>(i) * sp.path.delta_n()) < 1e-4);
    }
}

TEST_CASE("simulation is deterministic") {
    for (const ModelSpec& m : {default_model1(), default_model2()}) {
        const SimulatedPath a = simulate(m, 780, 1.0, 10, 123);
        const SimulatedPath b = simulate(m, 780, 1.0, 10, 123);
        const auto xa = a.path.log_prices();
        const auto xb = b.path.log_prices();
        CHECK(std::equal(xa.begin(), xa.end(), xb.begin(), xb.end()));
        CHECK(a.true_spot_vol == b.true_spot_vol);
        CHECK(a.factor == b.factor);
        const SimulatedPath c = simulate(m, 780, 1.0, 10, 124);
        CHECK(c.path.log_prices()[400] != xa[400]);
    }
}

TEST_CASE("property: positive spot variance") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        for (const ModelSpec& m : {default_model1(), default_model2()}) {
            const SimulatedPath sp = simulate(m, 2000, 1.0, 5, seed);
            CHECK(*std::min_element(sp.true_spot_vol.begin(), sp.true_spot_vol.end()) > 0.0);
        }
    }
}

TEST_CASE("property: refinement convergence on a shared Brownian path") {
    const std::int64_t n = 200;
    const std::int64_t finest = 64;  // Brownian draws per observation interval
    ModelSpec m = default_model1();
    m.params["beta1"] = 1.0;  // stronger volatility of volatility makes the scheme error visible
    std::vector<double> gaps;
    for (int r = 1; r < finest; r *= 2) {
        double gap = 0.0;
        for (std::uint64_t seed = 0; seed < 32; ++seed) {
            SimulationGrid coarse{n, 1.0, r, finest / r};
            SimulationGrid fine{n, 1.0, 2 * r, finest / (2 * r)};
            const SimulatedPath pa = simulate(m, coarse, seed);
            const SimulatedPath pb = simulate(m, fine, seed);
            const auto a = pa.path.log_prices();
            const auto b = pb.path.log_prices();
            double worst = 0.0;
            for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
            gap += worst / 32.0;
        }
        gaps.push_back(gap);
    }
    // Strong order 1/2: the gap times sqrt(r) stays bounded.
    const double c = gaps.front() * 2.0;
    for (std::size_t j = 0; j < gaps.size(); ++j) {
        const double r = std::pow(2.0, static_cast<double>(j));
        CHECK(gaps[j] <= c / std::sqrt(r));
    }
    CHECK(gaps.back() < 0.5 * gaps.front());
}

TEST_CASE("property: drivers are independent without leverage") {
    const ModelSpec m = default_model1();
    const SimulatedPath sp = simulate(m, 100000, 1.0, 1, 8);
    std::vector<double> db, dw;
    recover_drivers(m, sp, db, dw);
    CHECK(std::abs(correlation(db, dw)) < 3.0 / std::sqrt(1e5));
}

TEST_CASE("leverage correlates the drivers") {
    ModelSpec m = default_model1();
    m.rho = -0.6;
    const SimulatedPath sp = simulate(m, 100000, 1.0, 1, 8);
    std::vector<double> db, dw;
    recover_drivers(m, sp, db, dw);
    CHECK(correlation(db, dw) == doctest::Approx(-0.6).epsilon(0.02));
}

TEST_CASE("property: Hoelder-1/2 scaling of sigma in model1") {
    const std::int64_t n = 4000;
    std::vector<double> ratio(3, 0.0);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const SimulatedPath sp = simulate(default_model1(), n, 1.0, 4, seed);
        std::vector<double> sigma;
        for (double v : sp.true_spot_vol) sigma.push_back(std::sqrt(v));
        for (int j = 0; j < 3; ++j) {
            const std::size_t lag = std::size_t{1} << j;
            double s = 0.0;
            for (std::size_t i = lag; i < sigma.size(); ++i) {
                s += (sigma[i] - sigma[i - lag]) * (sigma[i] - sigma[i - lag]);
            }
            const double h = static_cast<double>(lag) * sp.path.delta_n();
            ratio[static_cast<std::size_t>(j)] += s / static_cast<double>(sigma.size() - lag) / h;
        }
    }
    const auto [lo, hi] = std::minmax_element(ratio.begin(), ratio.end());
    CHECK(*hi < 1.5 * *lo);
}
