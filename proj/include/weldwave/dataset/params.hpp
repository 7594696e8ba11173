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
#include <limits>

#include <json.hpp>

#include "weldwave/core/rng.hpp"
#include "weldwave/core/units.hpp"
#include "weldwave/fem/mesh2d.hpp"
#include "weldwave/weld/path.hpp"

namespace weldwave {

/// Plate dimensions of a boundary-condition class.
struct PlateDims {
    double Lx = 0.0;
    double Ly = 0.0;
    double h0 = 0.0;

    /// Length scale L of the crack-length distribution.
    double L() const { return std::min(Lx, Ly); }
};

inline PlateDims plate_for(BcClass bc) {
    const double h0 = units::inches(0.25);
    if (bc == BcClass::FreeFree) return {units::inches(4.0), units::inches(8.0), h0};
    return {units::inches(8.0), units::inches(8.0), h0};
}

/// Normal draw with its clamp interval.
struct ClampedNormal {
    double mean = 0.0;
    double sd = 0.0;
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();

    double draw(RandomStream& rng) const { return std::clamp(rng.normal(mean, sd), lo, hi); }
};

inline void to_json(nlohmann::json& j, const ClampedNormal& n) {
    j = {{"mean", n.mean}, {"sd", n.sd}, {"lo", n.lo}, {"hi", n.hi}};
}

inline void from_json(const nlohmann::json& j, ClampedNormal& n) {
    j.at("mean").get_to(n.mean);
    j.at("sd").get_to(n.sd);
    n.lo = j.value("lo", -std::numeric_limits<double>::infinity());
    n.hi = j.value("hi", std::numeric_limits<double>::infinity());
}

/// Draw settings that the distribution table leaves open.
struct DistributionConfig {
    double crack_probability = 0.5;
    ClampedNormal nominal_reduction{0.3, 0.05, 0.0, 0.95};
    ClampedNormal variation_amplitude{0.05, 0.01, 0.0, 0.5};
    double weld_radius = units::inches(0.25);
    /// Force-location margin from the plate edge (m).
    double force_margin = 0.0;
};

inline void to_json(nlohmann::json& j, const DistributionConfig& c) {
    j = {{"crack_probability", c.crack_probability}, {"nominal_reduction", c.nominal_reduction},
         {"variation_amplitude", c.variation_amplitude}, {"weld_radius_m", c.weld_radius},
         {"force_margin_m", c.force_margin}};
}

inline void from_json(const nlohmann::json& j, DistributionConfig& c) {
    c.crack_probability = j.value("crack_probability", c.crack_probability);
    if (j.contains("nominal_reduction")) j.at("nominal_reduction").get_to(c.nominal_reduction);
    if (j.contains("variation_amplitude")) j.at("variation_amplitude").get_to(c.variation_amplitude);
    c.weld_radius = j.value("weld_radius_m", c.weld_radius);
    c.force_margin = j.value("force_margin_m", c.force_margin);
}

/// One set of design variables.
struct SampleParams {
    BcClass bc = BcClass::Scattering;
    PlateDims plate;
    double crack_length = 0.0;    ///< L_c
    double crack_depth = 0.0;     ///< d_c
    bool cracked = false;         ///< P_c
    double weld_angle = 0.0;      ///< theta_w
    double weld_depth = 0.0;      ///< d_w
    Point2 force;                 ///< x_f
    double nominal_reduction = 0.3;
    double variation_amplitude = 0.05;
    double weld_radius = units::inches(0.25);
    std::uint64_t seed = 0;       ///< root of the sample's own streams

    double depth_ratio() const { return crack_depth / plate.h0; }
};

inline void to_json(nlohmann::json& j, const SampleParams& p) {
    j = {{"bc_class", to_string(p.bc)},
         {"plate_m", {p.plate.Lx, p.plate.Ly, p.plate.h0}},
         {"crack_length_m", p.crack_length},
         {"crack_depth_m", p.crack_depth},
         {"depth_ratio", p.depth_ratio()},
         {"cracked", p.cracked},
         {"weld_angle_rad", p.weld_angle},
         {"weld_depth_m", p.weld_depth},
         {"force_m", {p.force.x, p.force.y}},
         {"nominal_reduction", p.nominal_reduction},
         {"variation_amplitude", p.variation_amplitude},
         {"weld_radius_m", p.weld_radius},
         {"seed", p.seed}};
}

inline void from_json(const nlohmann::json& j, SampleParams& p) {
    p.bc = parse_bc_class(j.at("bc_class").get<std::string>());
    p.plate = {j.at("plate_m")[0], j.at("plate_m")[1], j.at("plate_m")[2]};
    j.at("crack_length_m").get_to(p.crack_length);
    j.at("crack_depth_m").get_to(p.crack_depth);
    j.at("cracked").get_to(p.cracked);
    j.at("weld_angle_rad").get_to(p.weld_angle);
    j.at("weld_depth_m").get_to(p.weld_depth);
    p.force = {j.at("force_m")[0], j.at("force_m")[1]};
    j.at("nominal_reduction").get_to(p.nominal_reduction);
    j.at("variation_amplitude").get_to(p.variation_amplitude);
    j.at("weld_radius_m").get_to(p.weld_radius);
    j.at("seed").get_to(p.seed);
}

/// One draw of every design variable. Normals are clamped to physically
/// valid ranges; the periodic class keeps the weld parallel to x.
inline SampleParams sample_params(BcClass bc, RandomStream& rng, const DistributionConfig& cfg = {}) {
    SampleParams p;
    p.bc = bc;
    p.plate = plate_for(bc);
    const double L = p.plate.L(), H = p.plate.h0;
    const double half_pi_open = std::nextafter(0.5 * pi, 0.0);
    p.crack_length = rng.uniform(L / 50.0, L / 2.0);
    p.crack_depth = rng.uniform(H / 10.0, H);
    p.cracked = rng.bernoulli(cfg.crack_probability);
    p.weld_angle = std::clamp(rng.normal(0.0, pi / 4.0), -half_pi_open, half_pi_open);
    p.weld_depth = std::clamp(rng.normal(H / 5.0, H / 20.0), std::numeric_limits<double>::min(), H / 2.0);
    const double margin = cfg.force_margin;
    const double fx = rng.normal(0.5 * p.plate.Lx, p.plate.Lx / 4.0);
    const double fy = rng.normal(0.25 * p.plate.Ly, p.plate.Ly / 6.0);
    p.force = {std::clamp(fx, margin, p.plate.Lx - margin), std::clamp(fy, margin, p.plate.Ly - margin)};
    p.nominal_reduction = cfg.nominal_reduction.draw(rng);
    p.variation_amplitude = cfg.variation_amplitude.draw(rng);
    p.weld_radius = cfg.weld_radius;
    p.seed = rng.next_u64();
    if (bc == BcClass::Periodic) p.weld_angle = 0.0;
    return p;
}

}  // namespace weldwave
