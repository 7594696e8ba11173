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
#include <vector>

#include <json.hpp>

#include "weldwave/core/error.hpp"
#include "weldwave/core/grid.hpp"
#include "weldwave/core/rng.hpp"
#include "weldwave/weld/path.hpp"

namespace weldwave {

using StiffnessField = Grid2D<double>;

inline constexpr double stiffness_floor = 0.05;

struct BeadSpec {
    double height = 0.1;      ///< a
    double spacing = 0.0;     ///< s0 (m)
    double half_width = 0.0;  ///< sigma_b (m)
    double exponent = 2.0;    ///< p
    double jitter = 0.3;      ///< beta

    /// Spacing R and half-width R/2.
    static BeadSpec defaults_for_radius(double R) { return {0.1, R, 0.5 * R, 2.0, 0.3}; }
};

struct WeldSpec {
    double radius = units::inches(0.25);  ///< R
    double fillet_ratio = 0.2;            ///< alpha, r_f = alpha R
    double depth = 0.0;                   ///< d_w (m), thickness added on the centreline
    double nominal_reduction = 0.3;       ///< W0
    double variation_amplitude = 0.05;    ///< eps_V
    double variation_bandwidth = 0.0;     ///< Gaussian kernel sigma (m); <= 0 means R/2
    double boundary_r0 = 0.0;             ///< f_b onset radius (m); <= 0 means R
    double boundary_width = 0.0;          ///< f_b ramp width (m); <= 0 means R/4
    BeadSpec bead = BeadSpec::defaults_for_radius(units::inches(0.25));

    static WeldSpec with_radius(double R) {
        WeldSpec w;
        w.radius = R;
        w.bead = BeadSpec::defaults_for_radius(R);
        return w;
    }

    double r0() const { return boundary_r0 > 0.0 ? boundary_r0 : radius; }
    double ramp() const { return boundary_width > 0.0 ? boundary_width : 0.25 * radius; }
    double kernel_sigma() const { return variation_bandwidth > 0.0 ? variation_bandwidth : 0.5 * radius; }

    void validate() const {
        if (!(radius > 0.0)) throw InvalidArgument("weld radius must be positive");
        if (!(fillet_ratio > 0.0 && fillet_ratio < 1.0)) throw InvalidArgument("fillet ratio must be in (0,1)");
        if (!(nominal_reduction >= 0.0 && nominal_reduction < 1.0)) throw InvalidArgument("W0 must be in [0,1)");
        if (!(variation_amplitude >= 0.0)) throw InvalidArgument("eps_V must be non-negative");
        if (!(bead.half_width > 0.0) || !(bead.exponent > 0.0) || !(bead.spacing > 0.0)) {
            throw InvalidArgument("bead spacing, half-width and exponent must be positive");
        }
        if (!(bead.jitter >= 0.0 && bead.jitter < 1.0)) throw InvalidArgument("bead jitter must be in [0,1)");
        if (depth < 0.0) throw InvalidArgument("weld depth must be non-negative");
    }
};

inline void to_json(nlohmann::json& j, const BeadSpec& b) {
    j = {{"height", b.height}, {"spacing_m", b.spacing}, {"half_width_m", b.half_width},
         {"exponent", b.exponent}, {"jitter", b.jitter}};
}

inline void from_json(const nlohmann::json& j, BeadSpec& b) {
    b.height = j.at("height");
    b.spacing = j.at("spacing_m");
    b.half_width = j.at("half_width_m");
    b.exponent = j.at("exponent");
    b.jitter = j.at("jitter");
}

inline void to_json(nlohmann::json& j, const WeldSpec& w) {
    j = {{"radius_m", w.radius},
         {"fillet_ratio", w.fillet_ratio},
         {"depth_m", w.depth},
         {"nominal_reduction", w.nominal_reduction},
         {"variation_amplitude", w.variation_amplitude},
         {"variation_bandwidth_m", w.kernel_sigma()},
         {"boundary_r0_m", w.r0()},
         {"boundary_width_m", w.ramp()},
         {"bead", w.bead}};
}

inline void from_json(const nlohmann::json& j, WeldSpec& w) {
    w.radius = j.at("radius_m");
    w.fillet_ratio = j.at("fillet_ratio");
    w.depth = j.at("depth_m");
    w.nominal_reduction = j.at("nominal_reduction");
    w.variation_amplitude = j.at("variation_amplitude");
    w.variation_bandwidth = j.at("variation_bandwidth_m");
    w.boundary_r0 = j.at("boundary_r0_m");
    w.boundary_width = j.at("boundary_width_m");
    w.bead = j.at("bead").get<BeadSpec>();
}

/// Bead centres and heights along a path of given length.
class BeadLine {
public:
    BeadLine() = default;

    BeadLine(double path_length, const BeadSpec& spec, RandomStream& rng) : spec_(spec) {
        if (!(spec.half_width > 0.0) || !(spec.exponent > 0.0)) throw InvalidArgument("bead needs sigma_b, p > 0");
        if (!(spec.spacing > 0.0)) throw InvalidArgument("bead spacing must be positive");
        double s = -spec.half_width + spec.spacing * rng.uniform();
        while (s <= path_length + spec.half_width) {
            centres_.push_back(s);
            heights_.push_back(spec.height * (1.0 + rng.uniform(-spec.jitter, spec.jitter)));
            s += spec.spacing * (1.0 + rng.uniform(-spec.jitter, spec.jitter));
        }
    }

    const std::vector<double>& centres() const noexcept { return centres_; }
    const std::vector<double>& heights() const noexcept { return heights_; }

    double operator()(double s) const {
        double acc = 0.0;
        const auto lo = std::lower_bound(centres_.begin(), centres_.end(), s - spec_.half_width);
        for (auto it = lo; it != centres_.end() && *it <= s + spec_.half_width; ++it) {
            const double u = (s - *it) / spec_.half_width;
            acc += heights_[it - centres_.begin()] * std::pow(std::max(0.0, 1.0 - u * u), spec_.exponent);
        }
        return acc;
    }

private:
    BeadSpec spec_;
    std::vector<double> centres_;
    std::vector<double> heights_;
};

/// Single-point bead evaluation; builds the bead line from `rng` first.
inline double bead_profile(double s, double path_length, const BeadSpec& spec, RandomStream& rng) {
    return BeadLine(path_length, spec, rng)(s);
}

/// i.i.d. standard normals on the grid geometry, Gaussian-smoothed with
/// bandwidth `sigma_m` and scaled by eps_V.
inline Grid2D<double> variation_field(const Grid2D<double>& geometry, double eps_v, double sigma_m,
                                      RandomStream& rng) {
    if (eps_v < 0.0) throw InvalidArgument("eps_V must be non-negative");
    auto g = Grid2D<double>::like(geometry, 0.0);
    if (eps_v == 0.0) return g;
    for (auto& v : g.values()) v = rng.normal();
    g = gaussian_smooth(std::move(g), sigma_m);
    for (auto& v : g.values()) v *= eps_v;
    return g;
}

/// E/E0 = W * B * V on the grid geometry. The bead and variation draw from
/// separate streams.
inline StiffnessField compose_stiffness(const Grid2D<double>& geometry, const WeldPath& path,
                                        const WeldSpec& weld, RandomStream& bead_rng, RandomStream& variation_rng) {
    weld.validate();
    const double extent = std::min(geometry.dx() * geometry.nx(), geometry.dy() * geometry.ny());
    if (2.0 * weld.radius >= extent) throw DomainTooSmall("weld width exceeds the domain");

    const BeadLine beads(path.length(), weld.bead, bead_rng);
    const double eps = weld.variation_amplitude;
    const auto variation = variation_field(geometry, eps, weld.kernel_sigma(), variation_rng);

    auto out = Grid2D<double>::like(geometry, 1.0);
    for (std::size_t j = 0; j < geometry.ny(); ++j) {
        for (std::size_t i = 0; i < geometry.nx(); ++i) {
            const auto pr = path.project({geometry.x(i), geometry.y(j)});
            const double f = nominal_profile(pr.d_perp, weld.radius, weld.fillet_ratio);
            if (f == 0.0) continue;
            const double W = 1.0 - weld.nominal_reduction * f * boundary_reduction(std::abs(pr.d_perp), weld.r0(), weld.ramp());
            const double B = 1.0 - f * beads(pr.s_star);
            const double V = 1.0 + f * std::clamp(variation(i, j), -5.0 * eps, 5.0 * eps);
            out(i, j) = std::max(stiffness_floor, W * B * V);
        }
    }
    return out;
}

inline StiffnessField compose_stiffness(const Grid2D<double>& geometry, const WeldPath& path,
                                        const WeldSpec& weld, RandomStream& rng) {
    return compose_stiffness(geometry, path, weld, rng, rng);
}

/// Local plate thickness h0 + d_w * f(d_perp).
inline Grid2D<double> thickness_field(const Grid2D<double>& geometry, const WeldPath& path, const WeldSpec& weld,
                                      double h0) {
    auto out = Grid2D<double>::like(geometry, h0);
    for (std::size_t j = 0; j < geometry.ny(); ++j) {
        for (std::size_t i = 0; i < geometry.nx(); ++i) {
            const auto pr = path.project({geometry.x(i), geometry.y(j)});
            out(i, j) = h0 + weld.depth * nominal_profile(pr.d_perp, weld.radius, weld.fillet_ratio);
        }
    }
    return out;
}

}  // namespace weldwave
