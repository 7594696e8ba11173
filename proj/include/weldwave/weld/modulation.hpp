/*
 * Copyright 2026 The Weldwave Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "weldwave/core/error.hpp"
#include "weldwave/core/grid.hpp"

namespace weldwave {

struct ModeScaling {
    double alpha = 1.0;
    double beta = 0.5;
};

using ScalingTable = std::map<std::string, ModeScaling>;

inline ScalingTable default_scaling_table() {
    return {{"A0", {1.1, 0.5}}, {"S0", {1.3, 0.5}}, {"A1", {1.0, 0.5}}};
}

struct ModulationField {
    std::map<std::string, Grid2D<double>> phi;
    ScalingTable constants;

    const Grid2D<double>& at(const std::string& label) const {
        const auto it = phi.find(label);
        if (it == phi.end()) throw MissingMode("no modulation field for " + label);
        return it->second;
    }
};

/// Phi = ((E/E0) (H/h0)^alpha)^beta per cell for each requested mode.
inline ModulationField impedance_modulation(const Grid2D<double>& stiffness, const Grid2D<double>& thickness,
                                            double h0, const std::vector<std::string>& modes,
                                            const ScalingTable& table = default_scaling_table()) {
    if (!stiffness.same_shape(thickness)) throw ShapeMismatch("stiffness and thickness grids differ");
    if (!(h0 > 0.0)) throw InvalidArgument("nominal thickness must be positive");
    ModulationField out;
    for (const auto& label : modes) {
        const auto it = table.find(label);
        if (it == table.end()) throw MissingMode("no scaling constants for " + label);
        const ModeScaling c = it->second;
        out.constants[label] = c;
        auto g = Grid2D<double>::like(stiffness, 1.0);
        for (std::size_t k = 0; k < g.size(); ++k) {
            if (!(stiffness[k] > 0.0) || !(thickness[k] > 0.0)) throw SingularCoefficient("non-positive E or H");
            g[k] = std::pow(stiffness[k] * std::pow(thickness[k] / h0, c.alpha), c.beta);
        }
        out.phi.emplace(label, std::move(g));
    }
    return out;
}

}  // namespace weldwave
