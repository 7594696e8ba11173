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
#include <limits>
#include <vector>

#include "weldwave/core/error.hpp"
#include "weldwave/core/units.hpp"

namespace weldwave {

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

/// Nearest-point data of a query relative to a path.
struct PathProjection {
    double s_star = 0.0;  ///< arc length of the nearest path point
    double d_perp = 0.0;  ///< signed distance along the left normal
    Point2 foot;          ///< nearest path point
    Point2 normal;        ///< unit left normal at the foot
};

/// Arc-length parameterised polyline.
class WeldPath {
public:
    WeldPath() = default;

    explicit WeldPath(std::vector<Point2> pts, double theta = 0.0) : pts_(std::move(pts)), theta_(theta) {
        if (pts_.size() < 2) throw InvalidArgument("weld path needs at least two points");
        cum_.assign(pts_.size(), 0.0);
        for (std::size_t i = 1; i < pts_.size(); ++i) {
            const double l = std::hypot(pts_[i].x - pts_[i - 1].x, pts_[i].y - pts_[i - 1].y);
            if (!(l > 0.0)) throw InvalidArgument("weld path has repeated points");
            cum_[i] = cum_[i - 1] + l;
        }
        if (!is_simple()) throw InvalidArgument("weld path self-intersects");
    }

    /// Straight path through `centre` at angle `theta` extending
    /// `half_length` either side.
    static WeldPath straight(Point2 centre, double theta, double half_length) {
        const double c = std::cos(theta), s = std::sin(theta);
        return WeldPath({{centre.x - half_length * c, centre.y - half_length * s},
                         {centre.x + half_length * c, centre.y + half_length * s}},
                        theta);
    }

    double length() const noexcept { return cum_.empty() ? 0.0 : cum_.back(); }
    double theta() const noexcept { return theta_; }
    const std::vector<Point2>& points() const noexcept { return pts_; }

    Point2 at(double s) const {
        s = std::clamp(s, 0.0, length());
        const auto it = std::upper_bound(cum_.begin(), cum_.end(), s);
        const std::size_t i = std::min<std::size_t>(std::max<std::ptrdiff_t>(it - cum_.begin(), 1), pts_.size() - 1);
        const double t = (s - cum_[i - 1]) / (cum_[i] - cum_[i - 1]);
        return {pts_[i - 1].x + t * (pts_[i].x - pts_[i - 1].x), pts_[i - 1].y + t * (pts_[i].y - pts_[i - 1].y)};
    }

    PathProjection project(Point2 q) const {
        PathProjection best;
        double best_d2 = std::numeric_limits<double>::infinity();
        for (std::size_t i = 1; i < pts_.size(); ++i) {
            const Point2 a = pts_[i - 1], b = pts_[i];
            const double len = cum_[i] - cum_[i - 1];
            const double tx = (b.x - a.x) / len, ty = (b.y - a.y) / len;
            const double t = std::clamp((q.x - a.x) * tx + (q.y - a.y) * ty, 0.0, len);
            const Point2 f{a.x + t * tx, a.y + t * ty};
            const double d2 = (q.x - f.x) * (q.x - f.x) + (q.y - f.y) * (q.y - f.y);
            if (d2 < best_d2) {
                best_d2 = d2;
                best.s_star = cum_[i - 1] + t;
                best.foot = f;
                best.normal = {-ty, tx};
            }
        }
        best.d_perp = (q.x - best.foot.x) * best.normal.x + (q.y - best.foot.y) * best.normal.y;
        // Past the ends the normal offset underestimates the distance.
        if (best.s_star <= 0.0 || best.s_star >= length()) best.d_perp = std::copysign(std::sqrt(best_d2), best.d_perp);
        return best;
    }

private:
    bool is_simple() const {
        auto cross = [](Point2 o, Point2 a, Point2 b) { return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x); };
        for (std::size_t i = 1; i < pts_.size(); ++i) {
            for (std::size_t j = i + 2; j < pts_.size(); ++j) {
                const Point2 a = pts_[i - 1], b = pts_[i], c = pts_[j - 1], d = pts_[j];
                const double d1 = cross(a, b, c), d2 = cross(a, b, d), d3 = cross(c, d, a), d4 = cross(c, d, b);
                if (((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0))) return false;
            }
        }
        return true;
    }

    std::vector<Point2> pts_;
    std::vector<double> cum_;
    double theta_ = 0.0;
};

/// Semicircular weld profile with a cosine fillet of radius alpha*R at the
/// toes. 1 on the centreline, 0 for |d_perp| >= R.
inline double nominal_profile(double d_perp, double R, double alpha) {
    if (!(R > 0.0) || !(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("need R > 0 and 0 < alpha < 1");
    const double d = std::abs(d_perp);
    if (d > R) return 0.0;
    const double r_f = alpha * R;
    const double arc = std::sqrt(std::max(0.0, 1.0 - (d / R) * (d / R)));
    if (d <= R - r_f) return arc;
    return arc * 0.5 * (1.0 + std::cos(pi * (d - (R - r_f)) / r_f));
}

/// Boundary ramp: 1 up to r0-w, raised-cosine down to 0 at r0.
inline double boundary_reduction(double d_i, double r0, double w) {
    if (!(w > 0.0) || !(r0 > w)) throw InvalidArgument("need r0 > w > 0");
    if (d_i <= r0 - w) return 1.0;
    if (d_i > r0) return 0.0;
    return 0.5 * (1.0 + std::cos(pi * (d_i - (r0 - w)) / w));
}

}  // namespace weldwave
