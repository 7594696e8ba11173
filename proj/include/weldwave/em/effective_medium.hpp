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

#include <chrono>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "weldwave/dispersion/lamb.hpp"
#include "weldwave/fem/helmholtz.hpp"
#include "weldwave/weld/crack.hpp"
#include "weldwave/weld/modulation.hpp"

namespace weldwave {

struct EffectiveMediumConfig {
    std::vector<std::string> modes{"A0", "S0"};
    double pml_wavelengths = 3.0;
    int elements_per_wavelength = 6;
    double reflection_db = 60.0;
    LUOptions lu;
    MeshOptions mesh;
    ScalingTable scaling = default_scaling_table();
};

/// Inputs on the physical-region label grid.
struct EffectiveMediumInputs {
    BcClass bc = BcClass::Scattering;
    double Lx = 0.0;
    double Ly = 0.0;
    double h0 = 0.0;
    DispersionTable table;
    Grid2D<double> stiffness;
    Grid2D<double> thickness;
    Grid2D<double> crack_mask;
    CrackSpec crack;
    SurfaceForce force;
};

struct ModeContribution {
    LambMode mode;
    double amplitude = 0.0;
    double p_max = 0.0;
    ComplexField field;
};

struct EffectiveMediumSolution {
    DomainSpec domain;
    std::shared_ptr<const Mesh2D> mesh;
    std::vector<ModeContribution> modes;
    ComplexField total;
    nlohmann::json diagnostics;
};

/// Solves one Helmholtz problem per selected mode on a shared mesh and sums
/// them with the projected mode amplitudes.
inline EffectiveMediumSolution solve_effective_medium(const EffectiveMediumInputs& in,
                                                      const EffectiveMediumConfig& cfg = {}) {
    DispersionTable selected = in.table;
    selected.modes.clear();
    for (const auto& label : cfg.modes) {
        const LambMode* m = nullptr;
        for (const auto& cand : in.table.modes) {
            if (cand.label() == label) m = &cand;
        }
        if (!m) throw MissingMode(label + " does not propagate at this frequency-thickness");
        selected.modes.push_back(*m);
    }
    if (selected.modes.empty()) throw InvalidArgument("no modes selected");
    const auto proj = amplitude_projection(selected, in.force);

    double k_max = 0.0;
    for (const auto& m : selected.modes) k_max = std::max(k_max, m.k);
    EffectiveMediumSolution out;
    out.domain = DomainSpec::make(in.bc, in.Lx, in.Ly, in.h0, k_max, cfg.pml_wavelengths, cfg.elements_per_wavelength);
    out.domain.validate(k_max);
    out.mesh = std::make_shared<const Mesh2D>(build_mesh(out.domain, k_max, &in.crack, cfg.mesh));

    std::vector<std::string> labels;
    for (const auto& m : selected.modes) labels.push_back(m.label());
    const auto modulation = impedance_modulation(in.stiffness, in.thickness, in.h0, labels, cfg.scaling);
    const ComplexVector F = force_load(*out.mesh, in.force);

    out.diagnostics = {{"dofs", out.mesh->n_dofs}, {"nodes", out.mesh->nodes.size()},
                       {"triangles", out.mesh->tris.size()}, {"k_max", k_max}};
    nlohmann::json per_mode = nlohmann::json::array();
    std::vector<std::pair<double, const ComplexField*>> terms;
    out.modes.reserve(selected.modes.size());
    for (std::size_t i = 0; i < selected.modes.size(); ++i) {
        const auto& mode = selected.modes[i];
        const auto t0 = std::chrono::steady_clock::now();
        const auto pml = PMLProfile::for_domain(out.domain, mode.vp, cfg.reflection_db);
        const auto sys = assemble(out.mesh, modulation.at(mode.label()), in.crack_mask, mode.vp, in.table.omega, pml);
        const ModeSolver solver(sys, cfg.lu);
        auto field = solver.solve(F);
        ComplexVector U(static_cast<Eigen::Index>(out.mesh->n_dofs));
        for (std::size_t n = 0; n < out.mesh->nodes.size(); ++n) U[static_cast<Eigen::Index>(out.mesh->dof[n])] = field.values[n];
        const double residual = (sys.matrix() * U - F).norm() / std::max(F.norm(), 1e-300);
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        per_mode.push_back({{"mode", mode.label()},
                            {"k", mode.k},
                            {"vp", mode.vp},
                            {"amplitude", proj.amplitudes[i]},
                            {"p_max", pml.p_max},
                            {"rcond", solver.stats().rcond},
                            {"relative_residual", residual},
                            {"seconds", seconds}});
        out.modes.push_back({mode, proj.amplitudes[i], pml.p_max, std::move(field)});
    }
    for (const auto& m : out.modes) terms.emplace_back(m.amplitude, &m.field);
    out.total = superpose(terms);
    out.diagnostics["modes"] = per_mode;
    return out;
}

}  // namespace weldwave
