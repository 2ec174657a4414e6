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

// Shared Euler machinery for simulate() and the coverage harness. Both walk
// the same substep loop so a harness window reproduces the corresponding
// stretch of a full simulated path.

#include <cmath>
#include <cstdint>
#include <span>

#include "spotvol/rng.hpp"
#include "spotvol/simulator.hpp"

namespace spotvol::detail {

enum Stream : std::uint64_t { price_stream = 0, factor1_stream = 1, factor2_stream = 2 };

class VolatilityDynamics {
public:
    struct State {
        double v1 = 0.0;
        double v2 = 0.0;
    };

    explicit VolatilityDynamics(const ModelSpec& model);

    State initial() const noexcept { return {v0_, v0_}; }
    int factor_count() const noexcept { return factors_; }

    double sigma(const State& s) const noexcept {
        switch (kind_) {
            case ModelKind::model1: return std::exp(beta0_ + beta1_ * s.v1);
            case ModelKind::model2: return growth_function_f(beta0_ + beta1_ * s.v1 + beta2_ * s.v2);
            case ModelKind::constant_vol: break;
        }
        return sigma_;
    }

    void step(State& s, double dt, double dw1, double dw2) const noexcept {
        switch (kind_) {
            case ModelKind::model1:
                s.v1 += alpha1_ * s.v1 * dt + dw1;
                break;
            case ModelKind::model2: {
                const double v2 = s.v2;
                s.v1 += alpha1_ * s.v1 * dt + dw1;
                s.v2 += alpha2_ * v2 * dt + (1.0 + phi_ * v2) * dw2;
                break;
            }
            case ModelKind::constant_vol: break;
        }
    }

    /// Price increment over one substep given the independent price draw.
    double price_increment(double sigma, double dt, double db_perp, double dw1) const noexcept {
        return drift_ * dt + sigma * (rho_ * dw1 + rho_perp_ * db_perp);
    }

private:
    ModelKind kind_;
    int factors_ = 0;
    double beta0_ = 0, beta1_ = 0, beta2_ = 0;
    double alpha1_ = 0, alpha2_ = 0, phi_ = 0;
    double sigma_ = 0;
    double v0_ = 0;
    double drift_ = 0;
    double rho_ = 0;
    double rho_perp_ = 1;
};

/// Brownian increment of one substep made of `draws` master normals.
inline double aggregate(const double* z, std::int64_t draws, double sqrt_dt_master) noexcept {
    double sum = 0.0;
    for (std::int64_t l = 0; l < draws; ++l) sum += z[l];
    return sqrt_dt_master * sum;
}

} // namespace spotvol::detail
