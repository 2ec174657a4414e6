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

#include "spotvol/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "path_engine.hpp"
#include "spotvol/error.hpp"
#include "spotvol/rng.hpp"

namespace spotvol {

namespace {

const std::vector<std::string>& required_params(ModelKind kind) {
    static const std::vector<std::string> m1 = {"alpha", "beta0", "beta1"};
    static const std::vector<std::string> m2 = {"alpha1", "alpha2", "beta0", "beta1", "beta2", "phi"};
    static const std::vector<std::string> cv = {"sigma"};
    switch (kind) {
        case ModelKind::model1: return m1;
        case ModelKind::model2: return m2;
        case ModelKind::constant_vol: break;
    }
    return cv;
}

} // namespace

const char* to_string(ModelKind kind) noexcept {
    switch (kind) {
        case ModelKind::model1: return "model1";
        case ModelKind::model2: return "model2";
        case ModelKind::constant_vol: return "constant_vol";
    }
    return "unknown";
}

ModelKind model_kind_from_string(const std::string& name) {
    if (name == "model1") return ModelKind::model1;
    if (name == "model2") return ModelKind::model2;
    if (name == "constant_vol") return ModelKind::constant_vol;
    throw ConfigError("unknown model '" + name + "' (expected model1, model2 or constant_vol)");
}

double ModelSpec::param(const std::string& name) const {
    auto it = params.find(name);
    if (it == params.end()) {
        throw ConfigError(std::string("model ") + to_string(kind) + " has no parameter '" + name + "'");
    }
    return it->second;
}

void ModelSpec::validate() const {
    const auto& required = required_params(kind);
    for (const auto& name : required) {
        if (!params.count(name)) {
            throw ConfigError(std::string("model ") + to_string(kind) + " requires parameter '" +
                              name + "'");
        }
    }
    for (const auto& [name, value] : params) {
        if (std::find(required.begin(), required.end(), name) == required.end()) {
            throw ConfigError(std::string("model ") + to_string(kind) + " does not take parameter '" +
                              name + "'");
        }
        if (!std::isfinite(value)) throw ConfigError("model parameter '" + name + "' is not finite");
    }
    if (kind == ModelKind::constant_vol && !(param("sigma") > 0.0)) {
        throw ConfigError("constant_vol requires sigma > 0");
    }
    if (!std::isfinite(drift_b) || !std::isfinite(x0) || !std::isfinite(v0)) {
        throw ConfigError("drift, x0 and v0 must be finite");
    }
    if (!(rho >= -1.0 && rho <= 1.0)) throw ConfigError("rho must lie in [-1, 1]");
}

ModelSpec default_model1() {
    ModelSpec m;
    m.kind = ModelKind::model1;
    const double beta1 = 0.125;
    const double alpha = -0.025;
    m.params = {{"alpha", alpha}, {"beta0", beta1 / (2.0 * alpha)}, {"beta1", beta1}};
    m.drift_b = 1.0;
    m.x0 = 0.0;
    m.v0 = 0.1;
    return m;
}

ModelSpec default_model2() {
    ModelSpec m;
    m.kind = ModelKind::model2;
    m.params = {{"alpha1", -0.0037}, {"alpha2", -1.386}, {"beta0", -1.2},
                {"beta1", 0.04},     {"beta2", 1.5},     {"phi", 0.25}};
    m.drift_b = 1.0;
    m.x0 = 0.0;
    m.v0 = 0.1;
    return m;
}

ModelSpec constant_vol_model(double sigma, double drift_b) {
    ModelSpec m;
    m.kind = ModelKind::constant_vol;
    m.params = {{"sigma", sigma}};
    m.drift_b = drift_b;
    return m;
}

double growth_function_f(double x) {
    static const double log15 = std::log(1.5);
    if (x <= log15) return std::exp(x);
    return 1.5 * std::sqrt(1.0 - log15 + x * x / log15);
}

void SimulationGrid::validate() const {
    if (n < 2) throw ConfigError("simulation needs n >= 2 observation intervals");
    if (refinement < 1) throw ConfigError("refinement must be >= 1");
    if (draws_per_substep < 1) throw ConfigError("draws_per_substep must be >= 1");
    if (!(horizon > 0.0) || !std::isfinite(horizon)) throw ConfigError("horizon must be positive");
}

namespace detail {

VolatilityDynamics::VolatilityDynamics(const ModelSpec& model) : kind_(model.kind) {
    model.validate();
    v0_ = model.v0;
    drift_ = model.drift_b;
    switch (kind_) {
        case ModelKind::model1:
            factors_ = 1;
            beta0_ = model.param("beta0");
            beta1_ = model.param("beta1");
            alpha1_ = model.param("alpha");
            break;
        case ModelKind::model2:
            factors_ = 2;
            beta0_ = model.param("beta0");
            beta1_ = model.param("beta1");
            beta2_ = model.param("beta2");
            alpha1_ = model.param("alpha1");
            alpha2_ = model.param("alpha2");
            phi_ = model.param("phi");
            break;
        case ModelKind::constant_vol:
            sigma_ = model.param("sigma");
            break;
    }
    if (factors_ > 0) {
        rho_ = model.rho;
        rho_perp_ = std::sqrt(1.0 - rho_ * rho_);
    }
}

} // namespace detail

SimulatedPath simulate(const ModelSpec& model, std::int64_t n, double horizon, int refinement,
                       std::uint64_t seed) {
    SimulationGrid grid;
    grid.n = n;
    grid.horizon = horizon;
    grid.refinement = refinement;
    return simulate(model, grid, seed);
}

SimulatedPath simulate(const ModelSpec& model, const SimulationGrid& grid, std::uint64_t seed) {
    grid.validate();
    const detail::VolatilityDynamics dyn(model);

    const std::int64_t r = grid.refinement;
    const std::int64_t substeps = grid.n * r;
    const std::int64_t draws = grid.draws_per_substep;
    const double dt = grid.horizon / static_cast<double>(substeps);
    const double sqrt_dt_master = std::sqrt(dt / static_cast<double>(draws));

    const NormalStream price(seed, detail::price_stream);
    const NormalStream factor1(seed, detail::factor1_stream);
    const NormalStream factor2(seed, detail::factor2_stream);

    const auto obs = static_cast<std::size_t>(grid.n + 1);
    std::vector<double> x(obs);
    std::vector<double> tsv(obs);
    std::vector<double> factor;
    if (dyn.factor_count() > 0) factor.resize(obs);

    auto state = dyn.initial();
    double level = model.x0;
    x[0] = level;
    tsv[0] = std::pow(dyn.sigma(state), 2);
    if (!factor.empty()) factor[0] = state.v1;

    constexpr std::int64_t chunk = 4096;
    std::vector<double> zb, z1, z2;
    for (std::int64_t s0 = 0; s0 < substeps; s0 += chunk) {
        const std::int64_t count = std::min(chunk, substeps - s0);
        const auto len = static_cast<std::size_t>(count * draws);
        const auto first = static_cast<std::uint64_t>(s0 * draws);
        zb.resize(len);
        price.fill(first, zb);
        if (dyn.factor_count() >= 1) {
            z1.resize(len);
            factor1.fill(first, z1);
        }
        if (dyn.factor_count() >= 2) {
            z2.resize(len);
            factor2.fill(first, z2);
        }
        for (std::int64_t j = 0; j < count; ++j) {
            const std::size_t off = static_cast<std::size_t>(j * draws);
            const double sigma = dyn.sigma(state);
            const double dw1 =
                dyn.factor_count() >= 1 ? detail::aggregate(&z1[off], draws, sqrt_dt_master) : 0.0;
            const double dw2 =
                dyn.factor_count() >= 2 ? detail::aggregate(&z2[off], draws, sqrt_dt_master) : 0.0;
            const double db = detail::aggregate(&zb[off], draws, sqrt_dt_master);
            level += dyn.price_increment(sigma, dt, db, dw1);
            dyn.step(state, dt, dw1, dw2);

            const std::int64_t s = s0 + j + 1;
            if (s % r == 0) {
                const auto i = static_cast<std::size_t>(s / r);
                x[i] = level;
                tsv[i] = std::pow(dyn.sigma(state), 2);
                if (!factor.empty()) factor[i] = state.v1;
            }
        }
    }

    const double delta = grid.horizon / static_cast<double>(grid.n);
    return SimulatedPath{PricePath(std::move(x), delta, grid.horizon), std::move(tsv),
                         std::move(factor), seed, grid.refinement};
}

} // namespace spotvol
