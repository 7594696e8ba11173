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
#include <array>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "weldwave/core/error.hpp"
#include "weldwave/core/units.hpp"
#include "weldwave/weld/crack.hpp"
#include "weldwave/weld/path.hpp"

namespace weldwave {

enum class BcClass { Scattering, Periodic, FreeFree };

inline std::string to_string(BcClass c) {
    switch (c) {
        case BcClass::Scattering: return "scattering";
        case BcClass::Periodic: return "periodic";
        case BcClass::FreeFree: return "coupon";
    }
    return "?";
}

inline BcClass parse_bc_class(const std::string& s) {
    if (s == "scattering") return BcClass::Scattering;
    if (s == "periodic") return BcClass::Periodic;
    if (s == "coupon" || s == "freefree" || s == "free-free") return BcClass::FreeFree;
    throw InvalidArgument("unknown boundary class '" + s + "'");
}

/// Physical region [0, Lx] x [0, Ly]; absorbing layers of width pml_x /
/// pml_y are appended outside it.
struct DomainSpec {
    double Lx = 0.0;
    double Ly = 0.0;
    double H = 0.0;
    BcClass bc = BcClass::Scattering;
    double pml_x = 0.0;
    double pml_y = 0.0;
    int elements_per_wavelength = 6;

    /// Layer widths set to `pml_wavelengths` shortest wavelengths where the
    /// class calls for them.
    static DomainSpec make(BcClass bc, double Lx, double Ly, double H, double k_max, double pml_wavelengths = 3.0,
                           int elements_per_wavelength = 6) {
        const double chi = pml_wavelengths * two_pi / k_max;
        DomainSpec d{Lx, Ly, H, bc, 0.0, 0.0, elements_per_wavelength};
        if (bc == BcClass::Scattering) d.pml_x = d.pml_y = chi;
        if (bc == BcClass::Periodic) d.pml_y = chi;
        return d;
    }

    void validate(double k_max) const {
        if (!(Lx > 0.0 && Ly > 0.0 && H > 0.0)) throw InvalidArgument("domain dimensions must be positive");
        if (elements_per_wavelength < 6) throw InvalidArgument("need at least 6 elements per wavelength");
        if (!(k_max > 0.0)) throw InvalidArgument("k_max must be positive");
        const double chi_min = 3.0 * two_pi / k_max * (1.0 - 1e-12);
        const bool want_x = bc == BcClass::Scattering, want_y = bc != BcClass::FreeFree;
        if (want_x != (pml_x > 0.0) || want_y != (pml_y > 0.0)) {
            throw InvalidArgument("absorbing layers do not match the boundary class");
        }
        if ((want_x && pml_x < chi_min) || (want_y && pml_y < chi_min)) {
            throw DomainTooSmall("absorbing layer thinner than three wavelengths");
        }
    }

    double x_lo() const { return -pml_x; }
    double x_hi() const { return Lx + pml_x; }
    double y_lo() const { return -pml_y; }
    double y_hi() const { return Ly + pml_y; }
};

struct MeshOptions {
    std::size_t max_nodes = 3'000'000;
    bool refine_near_crack = true;
};

/// Barycentric location of a point in a mesh triangle.
struct MeshLocation {
    std::size_t tri;
    std::array<double, 3> bary;
};

/// Six-node triangle mesh. Connectivity per triangle is
/// (v0, v1, v2, m01, m12, m20) with counter-clockwise vertices.
class Mesh2D {
public:
    std::vector<Point2> nodes;
    std::vector<std::array<std::size_t, 6>> tris;
    std::vector<std::size_t> dof;  ///< node -> equation index (periodic images share one)
    std::size_t n_dofs = 0;
    DomainSpec domain;
    double h_far = 0.0;  ///< base grid spacing (max of the two axes)

    std::size_t vertex_count() const { return n_vertices_; }

    /// Shortest triangle edge inside the given disc; the whole mesh when
    /// radius is infinite.
    double min_edge_length(Point2 c = {}, double radius = INFINITY) const {
        double best = INFINITY;
        for (const auto& t : tris) {
            const Point2 g{(nodes[t[0]].x + nodes[t[1]].x + nodes[t[2]].x) / 3,
                           (nodes[t[0]].y + nodes[t[1]].y + nodes[t[2]].y) / 3};
            if (std::hypot(g.x - c.x, g.y - c.y) > radius) continue;
            for (int e = 0; e < 3; ++e) {
                const auto& a = nodes[t[e]];
                const auto& b = nodes[t[(e + 1) % 3]];
                best = std::min(best, std::hypot(a.x - b.x, a.y - b.y));
            }
        }
        return best;
    }

    double max_edge_length() const {
        double worst = 0.0;
        for (const auto& t : tris) {
            for (int e = 0; e < 3; ++e) {
                const auto& a = nodes[t[e]];
                const auto& b = nodes[t[(e + 1) % 3]];
                worst = std::max(worst, std::hypot(a.x - b.x, a.y - b.y));
            }
        }
        return worst;
    }

    /// Smallest 4*sqrt(3)*area / sum(edge^2) over the mesh (1 = equilateral).
    double min_quality() const {
        double q = 1.0;
        for (std::size_t t = 0; t < tris.size(); ++t) {
            double s = 0.0;
            for (int e = 0; e < 3; ++e) {
                const auto& a = nodes[tris[t][e]];
                const auto& b = nodes[tris[t][(e + 1) % 3]];
                s += (a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y);
            }
            q = std::min(q, 4.0 * std::sqrt(3.0) * area(t) / s);
        }
        return q;
    }

    double area(std::size_t t) const {
        const auto& a = nodes[tris[t][0]];
        const auto& b = nodes[tris[t][1]];
        const auto& c = nodes[tris[t][2]];
        return 0.5 * ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
    }

    std::optional<MeshLocation> locate(Point2 p) const {
        const double tol = 1e-10;
        const auto ci = cell_index(p);
        if (!ci) return std::nullopt;
        for (std::size_t t : buckets_[*ci]) {
            const auto b = barycentric(t, p);
            if (b[0] >= -tol && b[1] >= -tol && b[2] >= -tol) return MeshLocation{t, b};
        }
        return std::nullopt;
    }

    std::array<double, 3> barycentric(std::size_t t, Point2 p) const {
        const auto& a = nodes[tris[t][0]];
        const auto& b = nodes[tris[t][1]];
        const auto& c = nodes[tris[t][2]];
        const double det = (b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y);
        const double l1 = ((p.x - a.x) * (c.y - a.y) - (c.x - a.x) * (p.y - a.y)) / det;
        const double l2 = ((b.x - a.x) * (p.y - a.y) - (p.x - a.x) * (b.y - a.y)) / det;
        return {1.0 - l1 - l2, l1, l2};
    }

    /// Quadratic Lagrange basis at barycentric coordinates, node order as in tris.
    static std::array<double, 6> basis(const std::array<double, 3>& L) {
        return {L[0] * (2 * L[0] - 1), L[1] * (2 * L[1] - 1), L[2] * (2 * L[2] - 1),
                4 * L[0] * L[1],       4 * L[1] * L[2],       4 * L[2] * L[0]};
    }

    friend Mesh2D build_mesh(const DomainSpec&, double, const CrackSpec*, const MeshOptions&);

private:
    std::optional<std::size_t> cell_index(Point2 p) const {
        const double fx = (p.x - bx0_) / bhx_, fy = (p.y - by0_) / bhy_;
        if (fx < -1e-9 || fy < -1e-9 || fx > bcx_ + 1e-9 || fy > bcy_ + 1e-9) return std::nullopt;
        const auto i = std::min(bcx_ - 1, static_cast<std::size_t>(std::max(0.0, fx)));
        const auto j = std::min(bcy_ - 1, static_cast<std::size_t>(std::max(0.0, fy)));
        return j * bcx_ + i;
    }

    void build_buckets() {
        buckets_.assign(bcx_ * bcy_, {});
        for (std::size_t t = 0; t < tris.size(); ++t) {
            double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
            for (int v = 0; v < 3; ++v) {
                x0 = std::min(x0, nodes[tris[t][v]].x);
                x1 = std::max(x1, nodes[tris[t][v]].x);
                y0 = std::min(y0, nodes[tris[t][v]].y);
                y1 = std::max(y1, nodes[tris[t][v]].y);
            }
            auto clampi = [](double f, std::size_t n) {
                return std::min(n - 1, static_cast<std::size_t>(std::max(0.0, std::floor(f))));
            };
            const auto i0 = clampi((x0 - bx0_) / bhx_ - 1e-9, bcx_), i1 = clampi((x1 - bx0_) / bhx_ + 1e-9, bcx_);
            const auto j0 = clampi((y0 - by0_) / bhy_ - 1e-9, bcy_), j1 = clampi((y1 - by0_) / bhy_ + 1e-9, bcy_);
            for (auto j = j0; j <= j1; ++j) {
                for (auto i = i0; i <= i1; ++i) buckets_[j * bcx_ + i].push_back(t);
            }
        }
    }

    std::size_t n_vertices_ = 0;
    double bx0_ = 0.0, by0_ = 0.0, bhx_ = 1.0, bhy_ = 1.0;
    std::size_t bcx_ = 1, bcy_ = 1;
    std::vector<std::vector<std::size_t>> buckets_;
};

namespace detail {

inline double point_segment_distance(Point2 q, Point2 a, Point2 b) { return segment_distance(q, a, b); }

inline bool segments_cross(Point2 a, Point2 b, Point2 c, Point2 d) {
    auto cross = [](Point2 o, Point2 p, Point2 r) { return (p.x - o.x) * (r.y - o.y) - (p.y - o.y) * (r.x - o.x); };
    const double d1 = cross(a, b, c), d2 = cross(a, b, d), d3 = cross(c, d, a), d4 = cross(c, d, b);
    return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0));
}

// Distance between a crack segment and a (straight-sided) triangle.
inline double segment_triangle_distance(Point2 a, Point2 b, const std::array<Point2, 3>& t) {
    auto inside = [&](Point2 p) {
        auto s = [](Point2 o, Point2 u, Point2 v) { return (u.x - o.x) * (v.y - o.y) - (u.y - o.y) * (v.x - o.x); };
        const double d0 = s(t[0], t[1], p), d1 = s(t[1], t[2], p), d2 = s(t[2], t[0], p);
        return (d0 >= 0 && d1 >= 0 && d2 >= 0) || (d0 <= 0 && d1 <= 0 && d2 <= 0);
    };
    if (inside(a) || inside(b)) return 0.0;
    double best = INFINITY;
    for (int e = 0; e < 3; ++e) {
        const Point2 c = t[e], d = t[(e + 1) % 3];
        if (segments_cross(a, b, c, d)) return 0.0;
        best = std::min({best, point_segment_distance(a, c, d), point_segment_distance(b, c, d),
                         point_segment_distance(c, a, b)});
    }
    return best;
}

}  // namespace detail

/// Structured right-triangle mesh over the padded domain with element size
/// at most 2 pi / (epw * k_max), optionally refined once (red-green) in a
/// band of width 4 w_c around the crack path, then promoted to six nodes.
inline Mesh2D build_mesh(const DomainSpec& domain, double k_max, const CrackSpec* crack = nullptr,
                         const MeshOptions& opt = {}) {
    if (!(k_max > 0.0)) throw InvalidArgument("k_max must be positive");
    const double h_target = two_pi / (domain.elements_per_wavelength * k_max);
    const double wx = domain.x_hi() - domain.x_lo(), wy = domain.y_hi() - domain.y_lo();
    const auto cx = static_cast<std::size_t>(std::ceil(wx / h_target - 1e-9));
    const auto cy = static_cast<std::size_t>(std::ceil(wy / h_target - 1e-9));
    const double hx = wx / cx, hy = wy / cy;
    // Rough P2 node count before refinement.
    if ((2 * cx + 1) * (2 * cy + 1) > opt.max_nodes) {
        throw MeshTooLarge(std::to_string((2 * cx + 1) * (2 * cy + 1)) + " nodes exceed the cap of " +
                           std::to_string(opt.max_nodes));
    }

    std::vector<Point2> verts;
    verts.reserve((cx + 1) * (cy + 1));
    for (std::size_t j = 0; j <= cy; ++j) {
        for (std::size_t i = 0; i <= cx; ++i) {
            verts.push_back({i == cx ? domain.x_hi() : domain.x_lo() + i * hx,
                             j == cy ? domain.y_hi() : domain.y_lo() + j * hy});
        }
    }
    auto vid = [&](std::size_t i, std::size_t j) { return j * (cx + 1) + i; };
    std::vector<std::array<std::size_t, 3>> tri3;
    tri3.reserve(2 * cx * cy);
    for (std::size_t j = 0; j < cy; ++j) {
        for (std::size_t i = 0; i < cx; ++i) {
            const auto a = vid(i, j), b = vid(i + 1, j), c = vid(i + 1, j + 1), d = vid(i, j + 1);
            if ((i + j) % 2 == 0) {
                tri3.push_back({a, b, c});
                tri3.push_back({a, c, d});
            } else {
                tri3.push_back({a, b, d});
                tri3.push_back({b, c, d});
            }
        }
    }

    // Red-green refinement around the crack.
    if (crack && crack->present && crack->path.size() >= 2 && opt.refine_near_crack) {
        const double band = 2.0 * crack->width;
        const bool periodic = domain.bc == BcClass::Periodic;
        std::vector<char> red(tri3.size(), 0);
        for (std::size_t s = 1; s < crack->path.size(); ++s) {
            const Point2 a = crack->path[s - 1], b = crack->path[s];
            const auto i0 = static_cast<std::ptrdiff_t>(std::floor((std::min(a.x, b.x) - band - domain.x_lo()) / hx)) - 1;
            const auto i1 = static_cast<std::ptrdiff_t>(std::floor((std::max(a.x, b.x) + band - domain.x_lo()) / hx)) + 1;
            const auto j0 = static_cast<std::ptrdiff_t>(std::floor((std::min(a.y, b.y) - band - domain.y_lo()) / hy)) - 1;
            const auto j1 = static_cast<std::ptrdiff_t>(std::floor((std::max(a.y, b.y) + band - domain.y_lo()) / hy)) + 1;
            for (auto j = std::max<std::ptrdiff_t>(0, j0); j <= std::min<std::ptrdiff_t>(cy - 1, j1); ++j) {
                for (auto i = std::max<std::ptrdiff_t>(0, i0); i <= std::min<std::ptrdiff_t>(cx - 1, i1); ++i) {
                    if (periodic && (i < 2 || i + 2 >= static_cast<std::ptrdiff_t>(cx))) continue;
                    for (std::size_t k = 0; k < 2; ++k) {
                        const std::size_t t = 2 * (j * cx + i) + k;
                        const std::array<Point2, 3> tp{verts[tri3[t][0]], verts[tri3[t][1]], verts[tri3[t][2]]};
                        if (detail::segment_triangle_distance(a, b, tp) <= band) red[t] = 1;
                    }
                }
            }
        }
        auto key = [](std::size_t u, std::size_t v) { return std::pair{std::min(u, v), std::max(u, v)}; };
        std::map<std::pair<std::size_t, std::size_t>, std::size_t> marked;
        for (std::size_t t = 0; t < tri3.size(); ++t) {
            if (!red[t]) continue;
            for (int e = 0; e < 3; ++e) marked.emplace(key(tri3[t][e], tri3[t][(e + 1) % 3]), 0);
        }
        for (bool changed = true; changed;) {
            changed = false;
            for (std::size_t t = 0; t < tri3.size(); ++t) {
                if (red[t]) continue;
                int count = 0;
                for (int e = 0; e < 3; ++e) count += marked.count(key(tri3[t][e], tri3[t][(e + 1) % 3])) ? 1 : 0;
                if (count >= 2) {
                    red[t] = 1;
                    changed = true;
                    for (int e = 0; e < 3; ++e) marked.emplace(key(tri3[t][e], tri3[t][(e + 1) % 3]), 0);
                }
            }
        }
        for (std::size_t t = 0; t < tri3.size(); ++t) {
            for (int e = 0; e < 3; ++e) {
                auto it = marked.find(key(tri3[t][e], tri3[t][(e + 1) % 3]));
                if (it != marked.end() && it->second == 0) {
                    const Point2 p = verts[it->first.first], q = verts[it->first.second];
                    it->second = verts.size();
                    verts.push_back({0.5 * (p.x + q.x), 0.5 * (p.y + q.y)});
                }
            }
        }
        std::vector<std::array<std::size_t, 3>> refined;
        refined.reserve(tri3.size() + 4 * marked.size());
        for (std::size_t t = 0; t < tri3.size(); ++t) {
            const auto [v0, v1, v2] = tri3[t];
            std::array<std::size_t, 3> mid{};
            int count = 0, which = -1;
            for (int e = 0; e < 3; ++e) {
                auto it = marked.find(key(tri3[t][e], tri3[t][(e + 1) % 3]));
                mid[e] = it == marked.end() ? 0 : it->second;
                if (it != marked.end()) {
                    ++count;
                    which = e;
                }
            }
            if (red[t]) {
                refined.push_back({v0, mid[0], mid[2]});
                refined.push_back({mid[0], v1, mid[1]});
                refined.push_back({mid[2], mid[1], v2});
                refined.push_back({mid[0], mid[1], mid[2]});
            } else if (count == 1) {
                const std::size_t a = tri3[t][which], b = tri3[t][(which + 1) % 3], c = tri3[t][(which + 2) % 3];
                refined.push_back({a, mid[which], c});
                refined.push_back({mid[which], b, c});
            } else {
                refined.push_back(tri3[t]);
            }
        }
        tri3 = std::move(refined);
    }

    Mesh2D mesh;
    mesh.domain = domain;
    mesh.h_far = std::max(hx, hy);
    mesh.n_vertices_ = verts.size();
    mesh.nodes = verts;
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> edge_node;
    mesh.tris.reserve(tri3.size());
    for (const auto& t : tri3) {
        std::array<std::size_t, 6> e{t[0], t[1], t[2], 0, 0, 0};
        for (int k = 0; k < 3; ++k) {
            const std::size_t u = t[k], v = t[(k + 1) % 3];
            const auto key = std::pair{std::min(u, v), std::max(u, v)};
            auto [it, inserted] = edge_node.emplace(key, mesh.nodes.size());
            if (inserted) {
                mesh.nodes.push_back({0.5 * (verts[u].x + verts[v].x), 0.5 * (verts[u].y + verts[v].y)});
            }
            e[3 + k] = it->second;
        }
        mesh.tris.push_back(e);
        if (mesh.nodes.size() > opt.max_nodes) {
            throw MeshTooLarge("node count exceeds the cap of " + std::to_string(opt.max_nodes));
        }
    }

    // Equation numbering; periodic images on x = x_hi reuse the x = x_lo index.
    const std::size_t none = static_cast<std::size_t>(-1);
    mesh.dof.assign(mesh.nodes.size(), none);
    std::vector<std::size_t> left, right;
    const double eps = 1e-9 * wx;
    if (domain.bc == BcClass::Periodic) {
        for (std::size_t n = 0; n < mesh.nodes.size(); ++n) {
            if (std::abs(mesh.nodes[n].x - domain.x_lo()) < eps) left.push_back(n);
            if (std::abs(mesh.nodes[n].x - domain.x_hi()) < eps) right.push_back(n);
        }
        auto by_y = [&](std::size_t a, std::size_t b) { return mesh.nodes[a].y < mesh.nodes[b].y; };
        std::sort(left.begin(), left.end(), by_y);
        std::sort(right.begin(), right.end(), by_y);
        if (left.size() != right.size()) throw MeshMismatch("periodic boundaries have different node counts");
    }
    std::vector<char> is_right(mesh.nodes.size(), 0);
    for (auto n : right) is_right[n] = 1;
    for (std::size_t n = 0; n < mesh.nodes.size(); ++n) {
        if (!is_right[n]) mesh.dof[n] = mesh.n_dofs++;
    }
    for (std::size_t k = 0; k < right.size(); ++k) {
        if (std::abs(mesh.nodes[left[k]].y - mesh.nodes[right[k]].y) > eps) {
            throw MeshMismatch("periodic boundary nodes are not aligned");
        }
        mesh.dof[right[k]] = mesh.dof[left[k]];
    }

    mesh.bx0_ = domain.x_lo();
    mesh.by0_ = domain.y_lo();
    mesh.bhx_ = hx;
    mesh.bhy_ = hy;
    mesh.bcx_ = cx;
    mesh.bcy_ = cy;
    mesh.build_buckets();
    return mesh;
}

}  // namespace weldwave
