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
#include <map>
#include <string>
#include <vector>

#include "spotvol/estimator.hpp"

namespace spotvol {

enum class ModelKind { model1, model2, constant_vol };

const char* to_string(ModelKind kind) noexcept;
ModelKind model_kind_from_string(const std::string& name);

/// Data-generating process dX = b dt + sigma_t dB.
///
///   model1:        sigma = exp(beta0 + beta1 v),  dv = alpha v dt + dW
///   model2:        sigma = f(beta0 + beta1 v1 + beta2 v2),
///                  dv1 = alpha1 v1 dt + dW1,
///                  dv2 = alpha2 v2 dt + (1 + phi v2) dW2
///   constant_vol:  sigma constant
///
/// W, W1, W2 are independent of each other. B is independent of them
/// unless rho != 0, in which case corr(dB, dW) = rho (dW1 for model2).
struct ModelSpec {
    ModelKind kind = ModelKind::constant_vol;
    std::map<std::string, double> params;
    double drift_b = 0.0;
    double x0 = 0.0;
    double v0 = 0.1;  // initial value of every latent factor
    double rho = 0.0;

    /// Named parameter; throws ConfigError when absent.
    double param(const std::string& name) const;
    /// Checks that exactly the parameters required by `kind` are present
    /// and admissible; throws ConfigError otherwise.
    void validate() const;
};

/// beta1 = 0.125, alpha = -0.025, beta0 = beta1 / (2 alpha) = -2.5,
/// drift 1, v0 = 0.1, x0 = 0.
ModelSpec default_model1();
/// beta0 = -1.2, beta1 = 0.04, beta2 = 1.5, alpha1 = -0.0037,
/// alpha2 = -1.386, phi = 0.25, drift 1, v0 = 0.1, x0 = 0.
ModelSpec default_model2();
ModelSpec constant_vol_model(double sigma, double drift_b = 0.0);

/// Piecewise volatility link of model2: exp(x) up to log 1.5, then
/// 1.5 sqrt(1 - log 1.5 + x^2 / log 1.5). Continuous, strictly positive.
double growth_function_f(double x);

struct SimulationGrid {
    std::int64_t n = 0;
    double horizon = 1.0;
    int refinement = 10;  // Euler substeps per observation interval
    /// Brownian draws aggregated into one Euler substep. Paths simulated on
    /// different grids with the same seed share one Brownian path when their
    /// n * refinement * draws_per_substep agree.
    std::int64_t draws_per_substep = 1;

    void validate() const;
};

struct SimulatedPath {
    PricePath path;
    std::vector<double> true_spot_vol;  // sigma^2 at t = i * delta, i = 0..n
    std::vector<double> factor;         // first latent factor at t = i * delta (empty for constant_vol)
    std::uint64_t seed = 0;
    int refinement = 1;
};

/// Euler-Maruyama simulation. A pure function of its arguments.
SimulatedPath simulate(const ModelSpec& model, std::int64_t n, double horizon, int refinement,
                       std::uint64_t seed);
SimulatedPath simulate(const ModelSpec& model, const SimulationGrid& grid, std::uint64_t seed);

} // namespace spotvol
