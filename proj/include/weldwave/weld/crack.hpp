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
#include <optional>
#include <vector>

#include <json.hpp>

#include "weldwave/core/error.hpp"
#include "weldwave/core/grid.hpp"
#include "weldwave/core/rng.hpp"
#include "weldwave/weld/path.hpp"

namespace weldwave {

inline constexpr double max_crack_width = 0.254e-3;

struct CrackSpec {
    bool present = false;
    Point2 start;
    double length = 0.0;       ///< L_c (m)
    double depth_ratio = 1.0;  ///< c_d in (0, 1]
    double width = max_crack_width;
    std::vector<Point2> path;

    double path_length() const {
        double l = 0.0;
        for (std::size_t i = 1; i < path.size(); ++i) l += std::hypot(path[i].x - path[i - 1].x, path[i].y - path[i - 1].y);
        return l;
    }
};

inline void to_json(nlohmann::json& j, const CrackSpec& c) {
    nlohmann::json pts = nlohmann::json::array();
    for (const auto& p : c.path) pts.push_back({p.x, p.y});
    j = {{"present", c.present},       {"start_m", {c.start.x, c.start.y}}, {"length_m", c.length},
         {"depth_ratio", c.depth_ratio}, {"width_m", c.width},                {"path_m", pts}};
}

inline void from_json(const nlohmann::json& j, CrackSpec& c) {
    c.present = j.at("present");
    c.start = {j.at("start_m")[0], j.at("start_m")[1]};
    c.length = j.at("length_m");
    c.depth_ratio = j.at("depth_ratio");
    c.width = j.at("width_m");
    c.path.clear();
    for (const auto& p : j.at("path_m")) c.path.push_back({p[0], p[1]});
}

/// Axis-aligned clamp box for walk points.
struct Box {
    double x0, y0, x1, y1;
};

/// Fixed-step isotropic random walk from `seed.start` confined to
/// |d_perp| <= R by reflection. The step is shrunk slightly so that the
/// ceil(L_c / step) steps add up to L_c; reflected steps contribute their
/// bounce point to the path.
inline CrackSpec crack_walk(const CrackSpec& seed, const WeldPath& path, double R, double step, RandomStream& rng,
                            std::optional<Box> bounds = std::nullopt) {
    CrackSpec out = seed;
    out.path.clear();
    if (!seed.present) return out;
    if (!(seed.length > 0.0)) throw InvalidArgument("crack length must be positive");
    if (!(step > 0.0) || !(R > 0.0)) throw InvalidArgument("crack step and weld radius must be positive");
    if (!(seed.depth_ratio > 0.0 && seed.depth_ratio <= 1.0)) throw InvalidArgument("c_d must be in (0,1]");

    const auto n = static_cast<std::size_t>(std::max(1.0, std::ceil(seed.length / step - 1e-9)));
    const double h = seed.length / static_cast<double>(n);

    auto confine = [&](Point2 p) {
        for (int pass = 0; pass < 4; ++pass) {
            const auto pr = path.project(p);
            const double excess = std::abs(pr.d_perp) - R;
            if (excess <= 0.0) break;
            const double sgn = pr.d_perp > 0.0 ? 1.0 : -1.0;
            p.x -= 2.0 * excess * sgn * pr.normal.x;
            p.y -= 2.0 * excess * sgn * pr.normal.y;
        }
        const auto pr = path.project(p);
        if (std::abs(pr.d_perp) > R) {
            const double sgn = pr.d_perp > 0.0 ? 1.0 : -1.0;
            p = {pr.foot.x + sgn * R * pr.normal.x, pr.foot.y + sgn * R * pr.normal.y};
        }
        if (bounds) {
            p.x = std::clamp(p.x, bounds->x0, bounds->x1);
            p.y = std::clamp(p.y, bounds->y0, bounds->y1);
        }
        return p;
    };

    Point2 p = confine(seed.start);
    out.start = p;
    out.path.push_back(p);
    for (std::size_t i = 0; i < n; ++i) {
        const double a = two_pi * rng.uniform();
        const Point2 q{p.x + h * std::cos(a), p.y + h * std::sin(a)};
        const double dp = path.project(p).d_perp, dq = path.project(q).d_perp;
        if (std::abs(dq) > R && dq != dp) {
            // Keep the bounce point so the polyline length stays h per step.
            const double t = std::clamp((std::copysign(R, dq) - dp) / (dq - dp), 0.0, 1.0);
            Point2 bounce{p.x + t * (q.x - p.x), p.y + t * (q.y - p.y)};
            if (bounds) {
                bounce.x = std::clamp(bounce.x, bounds->x0, bounds->x1);
                bounce.y = std::clamp(bounce.y, bounds->y0, bounds->y1);
            }
            out.path.push_back(bounce);
        }
        p = confine(q);
        out.path.push_back(p);
    }
    return out;
}

namespace detail {

inline double segment_distance(Point2 q, Point2 a, Point2 b) {
    const double ex = b.x - a.x, ey = b.y - a.y;
    const double l2 = ex * ex + ey * ey;
    const double t = l2 > 0.0 ? std::clamp(((q.x - a.x) * ex + (q.y - a.y) * ey) / l2, 0.0, 1.0) : 0.0;
    return std::hypot(q.x - a.x - t * ex, q.y - a.y - t * ey);
}

}  // namespace detail

/// Binary ribbon mask: 1 - c_d^2 on cells whose centre lies within
/// max(w_c / 2, one cell) of the crack path, 1 elsewhere.
inline Grid2D<double> crack_ribbon(const Grid2D<double>& geometry, const CrackSpec& crack) {
    auto m = Grid2D<double>::like(geometry, 1.0);
    if (!crack.present || crack.path.size() < 2) return m;
    const double reach = std::max(0.5 * crack.width, std::max(geometry.dx(), geometry.dy()));
    const double value = 1.0 - crack.depth_ratio * crack.depth_ratio;
    for (std::size_t s = 1; s < crack.path.size(); ++s) {
        const Point2 a = crack.path[s - 1], b = crack.path[s];
        auto index_range = [&](double lo, double hi, double origin, double d, std::size_t n) {
            const double i0 = std::ceil((lo - reach - origin) / d), i1 = std::floor((hi + reach - origin) / d);
            const auto first = static_cast<std::ptrdiff_t>(std::max(0.0, i0));
            const auto last = static_cast<std::ptrdiff_t>(std::min(static_cast<double>(n) - 1.0, i1));
            return std::pair{first, last};
        };
        const auto [i0, i1] = index_range(std::min(a.x, b.x), std::max(a.x, b.x), geometry.x0(), geometry.dx(), geometry.nx());
        const auto [j0, j1] = index_range(std::min(a.y, b.y), std::max(a.y, b.y), geometry.y0(), geometry.dy(), geometry.ny());
        for (auto j = j0; j <= j1; ++j) {
            for (auto i = i0; i <= i1; ++i) {
                const Point2 q{geometry.x(i), geometry.y(j)};
                if (detail::segment_distance(q, a, b) <= reach) m(i, j) = value;
            }
        }
    }
    return m;
}

/// Gaussian-smoothed ribbon mask, values in (0, 1].
inline Grid2D<double> crack_mask(const Grid2D<double>& geometry, const CrackSpec& crack, double sigma_m) {
    if (!(sigma_m > 0.0)) throw InvalidArgument("crack mask sigma must be positive");
    return gaussian_smooth(crack_ribbon(geometry, crack), sigma_m);
}

enum class CrackThreshold {
    half_contrast,  ///< tau = 1 - c_d^2 / 2
    half_depth,     ///< tau = 1 - (c_d / 2)^2
};

inline double crack_threshold(double depth_ratio, CrackThreshold rule) {
    return rule == CrackThreshold::half_contrast ? 1.0 - 0.5 * depth_ratio * depth_ratio
                                                 : 1.0 - 0.25 * depth_ratio * depth_ratio;
}

/// Binary crack label: 1 where the smoothed mask falls below tau.
inline Grid2D<std::uint8_t> crack_label(const Grid2D<double>& mask, const CrackSpec& crack,
                                        CrackThreshold rule = CrackThreshold::half_contrast) {
    auto out = Grid2D<std::uint8_t>::like(mask, 0);
    if (!crack.present) return out;
    const double tau = crack_threshold(crack.depth_ratio, rule);
    for (std::size_t k = 0; k < mask.size(); ++k) out[k] = mask[k] < tau ? 1 : 0;
    return out;
}

}  // namespace weldwave
