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

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <memory>
#include <utility>
#include <vector>

#include <Eigen/SparseCore>

#include "weldwave/core/error.hpp"
#include "weldwave/core/grid.hpp"
#include "weldwave/core/units.hpp"
#include "weldwave/dispersion/lamb.hpp"
#include "weldwave/fem/mesh2d.hpp"
#include "weldwave/fem/sparse_lu.hpp"

namespace weldwave {

/// Polynomial-graded complex stretching xi = 1 + i P(d) / omega with
/// P(d) = P_max (d / w)^a in the layers outside [x_lo, x_hi] x [y_lo, y_hi].
struct PMLProfile {
    double p_max = 0.0;
    double exponent = 2.0;
    double x_lo = 0.0, x_hi = 0.0, y_lo = 0.0, y_hi = 0.0;
    double width_x = 0.0, width_y = 0.0;

    /// P_max giving a round-trip amplitude reduction of `reflection_db` at
    /// phase speed `vp` through the thinner of the active layers.
    static PMLProfile for_domain(const DomainSpec& d, double vp, double reflection_db = 60.0, double exponent = 2.0) {
        PMLProfile p;
        p.exponent = exponent;
        p.x_lo = 0.0;
        p.x_hi = d.Lx;
        p.y_lo = 0.0;
        p.y_hi = d.Ly;
        p.width_x = d.pml_x;
        p.width_y = d.pml_y;
        double w = INFINITY;
        if (d.pml_x > 0.0) w = std::min(w, d.pml_x);
        if (d.pml_y > 0.0) w = std::min(w, d.pml_y);
        if (std::isfinite(w)) {
            const double log_ratio = reflection_db / 20.0 * std::log(10.0);
            p.p_max = (exponent + 1.0) * vp * log_ratio / (2.0 * w);
        }
        return p;
    }

    double depth_x(double x) const { return x < x_lo ? x_lo - x : (x > x_hi ? x - x_hi : 0.0); }
    double depth_y(double y) const { return y < y_lo ? y_lo - y : (y > y_hi ? y - y_hi : 0.0); }

    complex xi_x(double x, double omega) const { return stretch(depth_x(x), width_x, omega); }
    complex xi_y(double y, double omega) const { return stretch(depth_y(y), width_y, omega); }

private:
    complex stretch(double d, double w, double omega) const {
        if (d <= 0.0 || w <= 0.0) return {1.0, 0.0};
        return {1.0, p_max * std::pow(std::min(d / w, 1.0), exponent) / omega};
    }
};

/// Scalar field over the nodes of a mesh.
struct ComplexField {
    std::shared_ptr<const Mesh2D> mesh;
    std::vector<complex> values;
    double omega = 0.0;

    complex at(Point2 p) const {
        const auto loc = mesh->locate(p);
        if (!loc) throw OutOfBounds("point outside the mesh");
        const auto N = Mesh2D::basis(loc->bary);
        complex v = 0.0;
        for (int a = 0; a < 6; ++a) v += N[a] * values[mesh->tris[loc->tri][a]];
        return v;
    }

    /// Samples the field at every grid point (all must lie in the mesh).
    Grid2D<complex> to_grid(const Grid2D<double>& geometry) const {
        auto g = Grid2D<complex>::like(geometry);
        for (std::size_t j = 0; j < g.ny(); ++j) {
            for (std::size_t i = 0; i < g.nx(); ++i) g(i, j) = at({g.x(i), g.y(j)});
        }
        return g;
    }
};

struct HelmholtzSystem {
    std::shared_ptr<const Mesh2D> mesh;
    ComplexSparse K;
    ComplexSparse M;
    double omega = 0.0;

    ComplexSparse matrix() const { return K - (omega * omega) * M; }
};

using CoefficientFn = std::function<double(double, double)>;

namespace detail {

// Degree-4 six-point rule on the reference triangle (weights sum to 1).
inline const std::array<std::pair<std::array<double, 3>, double>, 6>& dunavant6() {
    static const std::array<std::pair<std::array<double, 3>, double>, 6> rule = [] {
        const double a = 0.445948490915965, b = 0.091576213509771;
        const double wa = 0.223381589678011, wb = 0.109951743655322;
        return std::array<std::pair<std::array<double, 3>, double>, 6>{{
            {{a, a, 1 - 2 * a}, wa}, {{a, 1 - 2 * a, a}, wa}, {{1 - 2 * a, a, a}, wa},
            {{b, b, 1 - 2 * b}, wb}, {{b, 1 - 2 * b, b}, wb}, {{1 - 2 * b, b, b}, wb},
        }};
    }();
    return rule;
}

struct TriangleGeometry {
    std::array<Point2, 3> v;
    double area;
    std::array<double, 3> dLdx, dLdy;

    explicit TriangleGeometry(const Mesh2D& m, std::size_t t) {
        for (int k = 0; k < 3; ++k) v[k] = m.nodes[m.tris[t][k]];
        const double det = (v[1].x - v[0].x) * (v[2].y - v[0].y) - (v[2].x - v[0].x) * (v[1].y - v[0].y);
        area = 0.5 * det;
        for (int k = 0; k < 3; ++k) {
            const Point2 a = v[(k + 1) % 3], b = v[(k + 2) % 3];
            dLdx[k] = (a.y - b.y) / det;
            dLdy[k] = (b.x - a.x) / det;
        }
    }

    Point2 point(const std::array<double, 3>& L) const {
        return {L[0] * v[0].x + L[1] * v[1].x + L[2] * v[2].x, L[0] * v[0].y + L[1] * v[1].y + L[2] * v[2].y};
    }

    // Gradients of the six quadratic basis functions.
    void grad(const std::array<double, 3>& L, std::array<double, 6>& gx, std::array<double, 6>& gy) const {
        for (int k = 0; k < 3; ++k) {
            gx[k] = (4 * L[k] - 1) * dLdx[k];
            gy[k] = (4 * L[k] - 1) * dLdy[k];
        }
        for (int k = 0; k < 3; ++k) {
            const int p = k, q = (k + 1) % 3;
            gx[3 + k] = 4 * (L[p] * dLdx[q] + L[q] * dLdx[p]);
            gy[3 + k] = 4 * (L[p] * dLdy[q] + L[q] * dLdy[p]);
        }
    }
};

}  // namespace detail

/// Galerkin matrices of -div(kappa Lambda grad u) - omega^2 xi_x xi_y u with
/// Lambda = diag(xi_y/xi_x, xi_x/xi_y), quadratic elements.
inline HelmholtzSystem assemble(std::shared_ptr<const Mesh2D> mesh, const CoefficientFn& kappa, double omega,
                                const PMLProfile& pml) {
    if (!(omega > 0.0)) throw InvalidFrequency("omega must be positive");
    const auto& m = *mesh;
    using Trip = Eigen::Triplet<complex, SparseIndex>;
    std::vector<Trip> kt, mt;
    kt.reserve(36 * m.tris.size());
    mt.reserve(36 * m.tris.size());
    std::array<double, 6> gx, gy;
    for (std::size_t t = 0; t < m.tris.size(); ++t) {
        const detail::TriangleGeometry geo(m, t);
        std::array<std::array<complex, 6>, 6> ke{}, me{};
        for (const auto& [L, w] : detail::dunavant6()) {
            const Point2 p = geo.point(L);
            const double c = kappa(p.x, p.y);
            if (!(c > 0.0) || !std::isfinite(c)) throw SingularCoefficient("kappa is not positive inside the mesh");
            const complex sx = pml.xi_x(p.x, omega), sy = pml.xi_y(p.y, omega);
            const complex axx = c * sy / sx, ayy = c * sx / sy, mass = sx * sy;
            const auto N = Mesh2D::basis(L);
            geo.grad(L, gx, gy);
            const double wa = w * geo.area;
            for (int a = 0; a < 6; ++a) {
                for (int b = 0; b < 6; ++b) {
                    ke[a][b] += wa * (axx * gx[a] * gx[b] + ayy * gy[a] * gy[b]);
                    me[a][b] += wa * mass * N[a] * N[b];
                }
            }
        }
        for (int a = 0; a < 6; ++a) {
            const auto r = static_cast<SparseIndex>(m.dof[m.tris[t][a]]);
            for (int b = 0; b < 6; ++b) {
                const auto cidx = static_cast<SparseIndex>(m.dof[m.tris[t][b]]);
                kt.emplace_back(r, cidx, ke[a][b]);
                mt.emplace_back(r, cidx, me[a][b]);
            }
        }
    }
    HelmholtzSystem sys;
    sys.mesh = std::move(mesh);
    sys.omega = omega;
    const auto n = static_cast<SparseIndex>(m.n_dofs);
    sys.K.resize(n, n);
    sys.M.resize(n, n);
    sys.K.setFromTriplets(kt.begin(), kt.end());
    sys.M.setFromTriplets(mt.begin(), mt.end());
    return sys;
}

/// kappa = (Phi vp C)^2 with Phi and C sampled bilinearly (constant
/// extension into the absorbing layers).
inline HelmholtzSystem assemble(std::shared_ptr<const Mesh2D> mesh, const Grid2D<double>& phi,
                                const Grid2D<double>& crack_mask, double vp, double omega, const PMLProfile& pml) {
    if (!phi.same_geometry(crack_mask)) throw ShapeMismatch("modulation and crack mask grids differ");
    const CoefficientFn kappa = [&](double x, double y) {
        const double c = phi.sample(x, y) * vp * crack_mask.sample(x, y);
        return c * c;
    };
    return assemble(std::move(mesh), kappa, omega, pml);
}

/// Consistent load of a surface force distribution. Elements touching the
/// force support are integrated on a 4x4 sub-triangulation.
inline ComplexVector force_load(const Mesh2D& m, const SurfaceForce& f) {
    ComplexVector F = ComplexVector::Zero(static_cast<Eigen::Index>(m.n_dofs));
    if (f.kind == SurfaceForce::Kind::Point) {
        const auto loc = m.locate({f.x, f.y});
        if (!loc) throw OutOfBounds("point force outside the mesh");
        const auto N = Mesh2D::basis(loc->bary);
        for (int a = 0; a < 6; ++a) F[static_cast<Eigen::Index>(m.dof[m.tris[loc->tri][a]])] += f.amplitude * N[a];
        return F;
    }
    const double r = f.support();
    constexpr int sub = 4;
    for (std::size_t t = 0; t < m.tris.size(); ++t) {
        const detail::TriangleGeometry geo(m, t);
        double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
        for (const auto& v : geo.v) {
            x0 = std::min(x0, v.x);
            x1 = std::max(x1, v.x);
            y0 = std::min(y0, v.y);
            y1 = std::max(y1, v.y);
        }
        if (x1 < f.x - r || x0 > f.x + r || y1 < f.y - r || y0 > f.y + r) continue;
        std::array<double, 6> fe{};
        // Uniform sub-triangles in barycentric space.
        for (int i = 0; i < sub; ++i) {
            for (int j = 0; j < sub - i; ++j) {
                auto integrate = [&](std::array<double, 2> p0, std::array<double, 2> p1, std::array<double, 2> p2) {
                    for (const auto& [L, w] : detail::dunavant6()) {
                        const double s = (L[0] * p0[0] + L[1] * p1[0] + L[2] * p2[0]) / sub;
                        const double q = (L[0] * p0[1] + L[1] * p1[1] + L[2] * p2[1]) / sub;
                        const std::array<double, 3> Lg{1.0 - s - q, s, q};
                        const Point2 p = geo.point(Lg);
                        const auto N = Mesh2D::basis(Lg);
                        const double val = w * geo.area / (sub * sub) * f.value(p.x, p.y);
                        for (int a = 0; a < 6; ++a) fe[a] += val * N[a];
                    }
                };
                const double a = i, b = j;
                integrate({a, b}, {a + 1, b}, {a, b + 1});
                if (i + j < sub - 1) integrate({a + 1, b}, {a + 1, b + 1}, {a, b + 1});
            }
        }
        for (int a = 0; a < 6; ++a) F[static_cast<Eigen::Index>(m.dof[m.tris[t][a]])] += fe[a];
    }
    return F;
}

/// Factorized (K - omega^2 M) ready for repeated right-hand sides.
class ModeSolver {
public:
    explicit ModeSolver(const HelmholtzSystem& sys, const LUOptions& opt = {})
        : mesh_(sys.mesh), omega_(sys.omega), lu_(sys.matrix(), opt) {}

    ComplexField solve(const ComplexVector& F) const {
        if (F.size() != static_cast<Eigen::Index>(mesh_->n_dofs)) throw ShapeMismatch("load length differs from DOF count");
        if (!F.allFinite()) throw InvalidArgument("load is not finite");
        const ComplexVector U = lu_.solve(F);
        ComplexField out{mesh_, std::vector<complex>(mesh_->nodes.size()), omega_};
        for (std::size_t n = 0; n < mesh_->nodes.size(); ++n) out.values[n] = U[static_cast<Eigen::Index>(mesh_->dof[n])];
        return out;
    }

    const FactorStats& stats() const noexcept { return lu_.stats(); }

private:
    std::shared_ptr<const Mesh2D> mesh_;
    double omega_;
    SparseLU lu_;
};

inline ComplexField solve_mode(const HelmholtzSystem& sys, const ComplexVector& F) { return ModeSolver(sys).solve(F); }

/// Weighted sum of fields that share one mesh.
inline ComplexField superpose(const std::vector<std::pair<double, const ComplexField*>>& terms) {
    if (terms.empty()) throw InvalidArgument("nothing to superpose");
    const auto& first = *terms.front().second;
    ComplexField out{first.mesh, std::vector<complex>(first.values.size()), first.omega};
    for (const auto& [a, f] : terms) {
        if (f->mesh != first.mesh || f->values.size() != out.values.size()) {
            throw MeshMismatch("superposed fields live on different meshes");
        }
        for (std::size_t n = 0; n < out.values.size(); ++n) out.values[n] += a * f->values[n];
    }
    return out;
}

}  // namespace weldwave
