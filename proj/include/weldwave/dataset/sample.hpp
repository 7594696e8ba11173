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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <string>

#include <json.hpp>

#include "weldwave/dataset/params.hpp"
#include "weldwave/em/effective_medium.hpp"
#include "weldwave/nl/elastic3d.hpp"
#include "weldwave/wavefield/channels.hpp"
#include "weldwave/wavefield/resample.hpp"
#include "weldwave/weld/crack.hpp"
#include "weldwave/weld/stiffness.hpp"

namespace weldwave {

enum class SolverModel { EM, NL };

inline std::string to_string(SolverModel m) { return m == SolverModel::EM ? "em" : "nl"; }

inline SolverModel parse_solver_model(const std::string& s) {
    if (s == "em" || s == "EM") return SolverModel::EM;
    if (s == "nl" || s == "NL") return SolverModel::NL;
    throw InvalidArgument("unknown solver model '" + s + "'");
}

inline constexpr std::uint32_t wfs_format_version = 1;

struct GenerateOptions {
    std::size_t grid = 128;
    double freq_hz = 225e3;
    Material material = steel_like();
    double force_radius = 0.0;           ///< Gaussian load radius (m); <= 0 means a quarter of the shortest wavelength
    double crack_step = 0.0;             ///< walk step (m); <= 0 means R / 4
    double crack_sigma_cells = 1.0;      ///< mask smoothing in label cells
    CrackThreshold threshold = CrackThreshold::half_contrast;
    EffectiveMediumConfig em;
    Mesh3DOptions nl_mesh{10, 4, 150'000};
    double nl_pml_wavelengths = 1.5;
    LUOptions nl_lu;
};

inline void to_json(nlohmann::json& j, const GenerateOptions& o) {
    j = {{"grid", o.grid},
         {"freq_hz", o.freq_hz},
         {"material", o.material.to_json()},
         {"force_radius_m", o.force_radius},
         {"crack_step_m", o.crack_step},
         {"crack_sigma_cells", o.crack_sigma_cells},
         {"threshold", o.threshold == CrackThreshold::half_contrast ? "half_contrast" : "half_depth"},
         {"em", {{"modes", o.em.modes},
                 {"pml_wavelengths", o.em.pml_wavelengths},
                 {"elements_per_wavelength", o.em.elements_per_wavelength},
                 {"reflection_db", o.em.reflection_db}}},
         {"nl", {{"nodes_per_wavelength", o.nl_mesh.nodes_per_wavelength},
                 {"min_thickness_elements", o.nl_mesh.min_thickness_elements},
                 {"dof_cap", o.nl_mesh.dof_cap},
                 {"pml_wavelengths", o.nl_pml_wavelengths}}}};
}

inline void from_json(const nlohmann::json& j, GenerateOptions& o) {
    o.grid = j.value("grid", o.grid);
    o.freq_hz = j.value("freq_hz", o.freq_hz);
    if (j.contains("material")) o.material = Material::from_json(j.at("material"));
    o.force_radius = j.value("force_radius_m", o.force_radius);
    o.crack_step = j.value("crack_step_m", o.crack_step);
    o.crack_sigma_cells = j.value("crack_sigma_cells", o.crack_sigma_cells);
    if (j.contains("threshold")) {
        const std::string t = j.at("threshold");
        if (t != "half_contrast" && t != "half_depth") throw InvalidArgument("unknown threshold rule '" + t + "'");
        o.threshold = t == "half_contrast" ? CrackThreshold::half_contrast : CrackThreshold::half_depth;
    }
    if (j.contains("em")) {
        const auto& e = j.at("em");
        o.em.modes = e.value("modes", o.em.modes);
        o.em.pml_wavelengths = e.value("pml_wavelengths", o.em.pml_wavelengths);
        o.em.elements_per_wavelength = e.value("elements_per_wavelength", o.em.elements_per_wavelength);
        o.em.reflection_db = e.value("reflection_db", o.em.reflection_db);
    }
    if (j.contains("nl")) {
        const auto& n = j.at("nl");
        o.nl_mesh.nodes_per_wavelength = n.value("nodes_per_wavelength", o.nl_mesh.nodes_per_wavelength);
        o.nl_mesh.min_thickness_elements = n.value("min_thickness_elements", o.nl_mesh.min_thickness_elements);
        o.nl_mesh.dof_cap = n.value("dof_cap", o.nl_mesh.dof_cap);
        o.nl_pml_wavelengths = n.value("pml_wavelengths", o.nl_pml_wavelengths);
    }
}

/// One training example: network input, both labels and the draws that
/// produced them.
struct SampleRecord {
    std::uint32_t format_version = wfs_format_version;
    Provenance provenance = Provenance::EM;
    double dx = 0.0, dy = 0.0;
    double freq_hz = 0.0;
    ChannelStack input;
    Grid2D<float> label_stiffness;
    Grid2D<std::uint8_t> label_crack;
    SampleParams params;
    /// Weld and crack geometry, normalisation and solver summary.
    nlohmann::json metadata;

    std::size_t nx() const noexcept { return label_stiffness.nx(); }
    std::size_t ny() const noexcept { return label_stiffness.ny(); }
};

/// Weld, stiffness, crack and thickness fields of one sample, on the label
/// grid.
struct SampleGeometry {
    Grid2D<double> grid;
    WeldPath path;
    WeldSpec weld;
    Grid2D<double> stiffness;  ///< float-representable, shared by solver and label
    Grid2D<double> thickness;
    CrackSpec crack;
    Grid2D<double> crack_mask;
};

inline SampleGeometry build_sample_geometry(const SampleParams& p, const GenerateOptions& opt) {
    SampleGeometry g;
    g.grid = cell_centred_grid<double>(p.plate.Lx, p.plate.Ly, opt.grid, opt.grid);
    const double R = p.weld_radius;
    const Point2 centre{0.5 * p.plate.Lx, 0.5 * p.plate.Ly};
    g.path = WeldPath::straight(centre, p.weld_angle, 0.5 * std::hypot(p.plate.Lx, p.plate.Ly) + R);
    g.weld = WeldSpec::with_radius(R);
    g.weld.depth = p.weld_depth;
    g.weld.nominal_reduction = p.nominal_reduction;
    g.weld.variation_amplitude = p.variation_amplitude;

    RandomStream bead_rng(derive_seed(p.seed, 0, Substream::bead));
    RandomStream var_rng(derive_seed(p.seed, 0, Substream::variation));
    g.stiffness = compose_stiffness(g.grid, g.path, g.weld, bead_rng, var_rng);
    for (double& v : g.stiffness.values()) v = static_cast<double>(static_cast<float>(v));
    g.thickness = thickness_field(g.grid, g.path, g.weld, p.plate.h0);

    g.crack.present = p.cracked;
    g.crack.length = p.crack_length;
    g.crack.depth_ratio = p.depth_ratio();
    if (p.cracked) {
        RandomStream crack_rng(derive_seed(p.seed, 0, Substream::crack));
        // Start on the weld centreline within the middle half of the plate.
        const double s_mid = g.path.project(centre).s_star;
        const double span = 0.25 * p.plate.L();
        g.crack.start = g.path.at(s_mid + crack_rng.uniform(-span, span));
        const double step = opt.crack_step > 0.0 ? opt.crack_step : 0.25 * R;
        const double margin = 0.5 * std::max(g.grid.dx(), g.grid.dy());
        g.crack = crack_walk(g.crack, g.path, R, step, crack_rng,
                             Box{margin, margin, p.plate.Lx - margin, p.plate.Ly - margin});
    }
    g.crack_mask = crack_mask(g.grid, g.crack, opt.crack_sigma_cells * std::max(g.grid.dx(), g.grid.dy()));
    return g;
}

namespace detail {

inline WavefieldGrid solve_em_sample(const SampleParams& p, const SampleGeometry& g, const DispersionTable& table,
                                     const SurfaceForce& force, const GenerateOptions& opt, nlohmann::json& summary) {
    EffectiveMediumInputs in;
    in.bc = p.bc;
    in.Lx = p.plate.Lx;
    in.Ly = p.plate.Ly;
    in.h0 = p.plate.h0;
    in.table = table;
    in.stiffness = g.stiffness;
    in.thickness = g.thickness;
    in.crack_mask = g.crack_mask;
    in.crack = g.crack;
    in.force = force;
    const auto sol = solve_effective_medium(in, opt.em);
    nlohmann::json modes = nlohmann::json::array();
    for (const auto& m : sol.modes) modes.push_back({{"mode", m.mode.label()}, {"k", m.mode.k}, {"amplitude", m.amplitude}});
    summary = {{"model", "em"}, {"dofs", sol.mesh->n_dofs}, {"modes", modes}};
    return resample_to_grid(sol.total, g.grid);
}

inline WavefieldGrid solve_nl_sample(const SampleParams& p, const SampleGeometry& g, const DispersionTable& table,
                                     const SurfaceForce& force, const GenerateOptions& opt, nlohmann::json& summary) {
    const LambMode* a0 = table.find(Symmetry::A, 0);
    const LambMode* s0 = table.find(Symmetry::S, 0);
    if (!a0 || !s0) throw MissingMode("A0 and S0 are needed to size the elastic mesh");
    double k_max = 0.0;
    for (const auto& m : table.modes) k_max = std::max(k_max, m.k);
    const auto d = DomainSpec::make(p.bc, p.plate.Lx, p.plate.Ly, p.plate.h0, k_max, opt.nl_pml_wavelengths);
    auto mesh = std::make_shared<const Mesh3D>(build_mesh3d(d, k_max, opt.nl_mesh));
    const auto pml = PMLProfile::for_domain(mesh->domain, s0->vp, opt.em.reflection_db);
    ElasticField u;
    {
        const auto sys = assemble_nl(mesh, &g.stiffness, opt.material, table.omega, pml, p.cracked ? &g.crack : nullptr);
        const ElasticSolver solver(sys, opt.nl_lu);
        u = solver.solve(surface_load(*mesh, force));
    }
    summary = {{"model", "nl"}, {"dofs", mesh->dof_count()}, {"cells", {mesh->ex, mesh->ey, mesh->ez}}};
    return resample_to_grid(u, g.grid);
}

}  // namespace detail

/// Load radius actually used for a table.
inline double source_radius(const DispersionTable& table, const GenerateOptions& opt) {
    if (opt.force_radius > 0.0) return opt.force_radius;
    double k_max = 0.0;
    for (const auto& m : table.modes) k_max = std::max(k_max, m.k);
    if (!(k_max > 0.0)) throw MissingMode("no propagating modes");
    return 0.25 * two_pi / k_max;
}

/// Builds the weld, runs the chosen solver and packages input and labels.
/// Pure function of (params, model, options).
inline SampleRecord generate_sample(const SampleParams& p, SolverModel model, const GenerateOptions& opt = {}) {
    if (opt.grid < 8) throw InvalidArgument("label grid needs at least 8 x 8 cells");
    const SampleGeometry g = build_sample_geometry(p, opt);
    const double omega = units::angular(opt.freq_hz);
    const DispersionTable table = make_dispersion_table(opt.material, omega, 0.5 * p.plate.h0);
    const double radius = source_radius(table, opt);
    const SurfaceForce force = SurfaceForce::gaussian(p.force.x, p.force.y, radius);

    nlohmann::json summary;
    const WavefieldGrid wave = model == SolverModel::EM ? detail::solve_em_sample(p, g, table, force, opt, summary)
                                                        : detail::solve_nl_sample(p, g, table, force, opt, summary);

    SampleRecord r;
    r.provenance = model == SolverModel::EM ? Provenance::EM : Provenance::NL;
    r.dx = g.grid.dx();
    r.dy = g.grid.dy();
    r.freq_hz = opt.freq_hz;
    r.input = build_channel_stack(wave, table);
    r.label_stiffness = Grid2D<float>::like(g.grid);
    for (std::size_t k = 0; k < g.stiffness.size(); ++k) r.label_stiffness[k] = static_cast<float>(g.stiffness[k]);
    r.label_crack = crack_label(g.crack_mask, g.crack, opt.threshold);
    r.params = p;
    r.metadata = {{"weld", g.weld},
                  {"weld_path_m", {{g.path.points().front().x, g.path.points().front().y},
                                   {g.path.points().back().x, g.path.points().back().y}}},
                  {"crack", g.crack},
                  {"threshold", {{"rule", opt.threshold == CrackThreshold::half_contrast ? "half_contrast" : "half_depth"},
                                 {"tau", crack_threshold(g.crack.depth_ratio, opt.threshold)}}},
                  {"normalization", {{"scale", r.input.scale}}},
                  {"source", {{"center_m", {p.force.x, p.force.y}}, {"radius_m", radius}}},
                  {"solver", summary}};
    return r;
}

}  // namespace weldwave
