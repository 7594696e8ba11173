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
#include <complex>
#include <memory>
#include <vector>

#include <Eigen/SparseCore>

#include "weldwave/core/error.hpp"
#include "weldwave/core/grid.hpp"
#include "weldwave/dispersion/lamb.hpp"
#include "weldwave/dispersion/material.hpp"
#include "weldwave/fem/helmholtz.hpp"
#include "weldwave/fem/mesh2d.hpp"
#include "weldwave/fem/sparse_lu.hpp"
#include "weldwave/weld/crack.hpp"

namespace weldwave {

struct Mesh3DOptions {
    int nodes_per_wavelength = 10;
    int min_thickness_elements = 4;
    std::size_t dof_cap = 3'000'000;
};

/// Structured box mesh over the padded plate, z in [0, H] with the loaded
/// surface at z = H. The physical region [0, Lx] x [0, Ly] falls on node
/// lines.
struct Mesh3D {
    DomainSpec domain;
    std::size_t ex = 0, ey = 0, ez = 0;  ///< element counts
    double hx = 0.0, hy = 0.0, hz = 0.0;
    double x0 = 0.0, y0 = 0.0;              ///< padded-domain origin
    std::size_t pml_cells_x = 0, pml_cells_y = 0;

    std::size_t nx() const { return ex + 1; }
    std::size_t ny() const { return ey + 1; }
    std::size_t nz() const { return ez + 1; }
    std::size_t node_count() const { return nx() * ny() * nz(); }
    std::size_t dof_count() const { return 3 * node_count(); }
    std::size_t node(std::size_t i, std::size_t j, std::size_t k) const { return (k * ny() + j) * nx() + i; }
    double x(std::size_t i) const { return x0 + static_cast<double>(i) * hx; }
    double y(std::size_t j) const { return y0 + static_cast<double>(j) * hy; }
    double z(std::size_t k) const { return static_cast<double>(k) * hz; }
};

/// In-plane spacing of at most lambda_min / nodes_per_wavelength, chosen so
/// the physical edges land on nodes; the absorbing layers are rounded up to
/// whole cells.
inline Mesh3D build_mesh3d(const DomainSpec& d, double k_max, const Mesh3DOptions& opt = {}) {
    if (!(k_max > 0.0)) throw InvalidArgument("k_max must be positive");
    if (!(d.Lx > 0.0 && d.Ly > 0.0 && d.H > 0.0)) throw InvalidArgument("domain dimensions must be positive");
    const double h_target = two_pi / k_max / opt.nodes_per_wavelength;
    Mesh3D m;
    m.domain = d;
    const auto cx = static_cast<std::size_t>(std::ceil(d.Lx / h_target - 1e-9));
    const auto cy = static_cast<std::size_t>(std::ceil(d.Ly / h_target - 1e-9));
    m.hx = d.Lx / cx;
    m.hy = d.Ly / cy;
    m.pml_cells_x = d.pml_x > 0.0 ? static_cast<std::size_t>(std::ceil(d.pml_x / m.hx - 1e-9)) : 0;
    m.pml_cells_y = d.pml_y > 0.0 ? static_cast<std::size_t>(std::ceil(d.pml_y / m.hy - 1e-9)) : 0;
    m.domain.pml_x = m.pml_cells_x * m.hx;
    m.domain.pml_y = m.pml_cells_y * m.hy;
    m.ex = cx + 2 * m.pml_cells_x;
    m.ey = cy + 2 * m.pml_cells_y;
    m.ez = std::max<std::size_t>(opt.min_thickness_elements, static_cast<std::size_t>(std::ceil(d.H / h_target - 1e-9)));
    m.hz = d.H / m.ez;
    m.x0 = -m.domain.pml_x;
    m.y0 = -m.domain.pml_y;
    if (m.dof_count() > opt.dof_cap) {
        throw MeshTooLarge(std::to_string(m.dof_count()) + " DOF exceed the cap of " + std::to_string(opt.dof_cap));
    }
    return m;
}

struct ElasticSystem {
    std::shared_ptr<const Mesh3D> mesh;
    ComplexSparse K;
    ComplexSparse M;
    double omega = 0.0;

    ComplexSparse matrix() const { return K - (omega * omega) * M; }
};

/// Complex displacement (ux, uy, uz) per node, interleaved.
struct ElasticField {
    std::shared_ptr<const Mesh3D> mesh;
    std::vector<complex> u;
    double omega = 0.0;

    complex uz(std::size_t i, std::size_t j, std::size_t k) const { return u[3 * mesh->node(i, j, k) + 2]; }
};

namespace detail {

inline bool element_cracked(const Mesh3D& m, std::size_t i, std::size_t j, std::size_t k, const CrackSpec& c) {
    if (!c.present || c.path.size() < 2) return false;
    const double z_mid = (static_cast<double>(k) + 0.5) * m.hz;
    if (z_mid < m.domain.H * (1.0 - c.depth_ratio)) return false;
    const double xa = m.x(i), xb = m.x(i + 1), ya = m.y(j), yb = m.y(j + 1);
    const std::array<Point2, 3> t1{{{xa, ya}, {xb, ya}, {xb, yb}}}, t2{{{xa, ya}, {xb, yb}, {xa, yb}}};
    for (std::size_t s = 1; s < c.path.size(); ++s) {
        const Point2 a = c.path[s - 1], b = c.path[s];
        if (std::max(a.x, b.x) < xa - c.width || std::min(a.x, b.x) > xb + c.width) continue;
        if (std::max(a.y, b.y) < ya - c.width || std::min(a.y, b.y) > yb + c.width) continue;
        const double half = 0.5 * c.width;
        if (segment_triangle_distance(a, b, t1) <= half || segment_triangle_distance(a, b, t2) <= half) return true;
    }
    return false;
}

// Zero-valued compressed matrix holding every node pair that shares an
// element; components are fully coupled or kept block-diagonal.
inline ComplexSparse structured_pattern(const Mesh3D& m, bool couple_components) {
    const auto n = static_cast<SparseIndex>(m.dof_count());
    const int per = couple_components ? 3 : 1;
    ComplexSparse A(n, n);
    std::vector<SparseIndex> outer(static_cast<std::size_t>(n) + 1, 0);
    std::vector<SparseIndex> inner;
    inner.reserve(static_cast<std::size_t>(n) * 27 * per);
    for (std::size_t k = 0; k < m.nz(); ++k) {
        for (std::size_t j = 0; j < m.ny(); ++j) {
            for (std::size_t i = 0; i < m.nx(); ++i) {
                const auto q = static_cast<SparseIndex>(m.node(i, j, k));
                for (int sc = 0; sc < 3; ++sc) {
                    for (int dk = -1; dk <= 1; ++dk) {
                        if ((k == 0 && dk < 0) || (k + 1 == m.nz() && dk > 0)) continue;
                        for (int dj = -1; dj <= 1; ++dj) {
                            if ((j == 0 && dj < 0) || (j + 1 == m.ny() && dj > 0)) continue;
                            for (int di = -1; di <= 1; ++di) {
                                if ((i == 0 && di < 0) || (i + 1 == m.nx() && di > 0)) continue;
                                const auto p = static_cast<SparseIndex>(m.node(i + di, j + dj, k + dk));
                                for (int r = 0; r < 3; ++r) {
                                    if (couple_components || r == sc) inner.push_back(3 * p + r);
                                }
                            }
                        }
                    }
                    outer[static_cast<std::size_t>(3 * q + sc) + 1] = static_cast<SparseIndex>(inner.size());
                }
            }
        }
    }
    A.resizeNonZeros(static_cast<Eigen::Index>(inner.size()));
    std::copy(outer.begin(), outer.end(), A.outerIndexPtr());
    std::copy(inner.begin(), inner.end(), A.innerIndexPtr());
    std::fill(A.valuePtr(), A.valuePtr() + inner.size(), complex(0.0));
    return A;
}

}  // namespace detail

/// Galerkin matrices of the time-harmonic Navier-Lame operator on trilinear
/// hexes with directional in-plane stretching. `E_rel` is E/E0 on the
/// physical region (constant extension into the layers, uniform through the
/// thickness). Elements cut by the crack down to c_d H below the top carry
/// no stiffness.
inline ElasticSystem assemble_nl(std::shared_ptr<const Mesh3D> mesh, const Grid2D<double>* E_rel, const Material& mat,
                                 double omega, const PMLProfile& pml, const CrackSpec* crack = nullptr) {
    if (!(omega > 0.0)) throw InvalidFrequency("omega must be positive");
    const Mesh3D& m = *mesh;
    const double g = 1.0 / std::sqrt(3.0);
    const std::array<double, 2> gp{-g, g};
    ElasticSystem sys;
    sys.omega = omega;
    sys.K = detail::structured_pattern(m, true);
    sys.M = detail::structured_pattern(m, false);
    const double detJ = m.hx * m.hy * m.hz / 8.0;
    const int corner[8][3] = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}, {0, 0, 1}, {1, 0, 1}, {1, 1, 1}, {0, 1, 1}};

    for (std::size_t k = 0; k < m.ez; ++k) {
        for (std::size_t j = 0; j < m.ey; ++j) {
            for (std::size_t i = 0; i < m.ex; ++i) {
                const double xc = m.x(i) + 0.5 * m.hx, yc = m.y(j) + 0.5 * m.hy;
                const double e_rel = E_rel ? E_rel->sample(xc, yc) : 1.0;
                if (!(e_rel > 0.0)) throw SingularMaterial("non-positive stiffness");
                const double E = mat.E0() * e_rel;
                const double lam = Material::lame_lambda(E, mat.nu()), mu = Material::lame_mu(E, mat.nu());
                if (!(lam > 0.0) || !(mu > 0.0)) throw SingularMaterial("Lame parameters must be positive");
                const bool void_cell = crack && detail::element_cracked(m, i, j, k, *crack);

                std::array<std::array<complex, 24>, 24> ke{};
                std::array<std::array<complex, 8>, 8> me{};
                for (double a : gp) {
                    for (double b : gp) {
                        for (double c : gp) {
                            const double px = xc + 0.5 * a * m.hx, py = yc + 0.5 * b * m.hy;
                            const complex sx = pml.xi_x(px, omega), sy = pml.xi_y(py, omega);
                            const complex J = sx * sy;
                            std::array<double, 8> N;
                            std::array<complex, 8> dx, dy, dz;
                            for (int n = 0; n < 8; ++n) {
                                const double sa = corner[n][0] ? 1 : -1, sb = corner[n][1] ? 1 : -1,
                                             sc = corner[n][2] ? 1 : -1;
                                N[n] = (1 + sa * a) * (1 + sb * b) * (1 + sc * c) / 8.0;
                                dx[n] = sa * (1 + sb * b) * (1 + sc * c) / 8.0 * (2.0 / m.hx) / sx;
                                dy[n] = sb * (1 + sa * a) * (1 + sc * c) / 8.0 * (2.0 / m.hy) / sy;
                                dz[n] = sc * (1 + sa * a) * (1 + sb * b) / 8.0 * (2.0 / m.hz);
                            }
                            const complex w = detJ * J;
                            for (int p = 0; p < 8; ++p) {
                                for (int q = 0; q < 8; ++q) me[p][q] += w * mat.rho() * N[p] * N[q];
                            }
                            if (void_cell) continue;
                            // sigma : eps for the 3x3 block of node pair (p, q).
                            for (int p = 0; p < 8; ++p) {
                                const std::array<complex, 3> gpv{dx[p], dy[p], dz[p]};
                                for (int q = 0; q < 8; ++q) {
                                    const std::array<complex, 3> gqv{dx[q], dy[q], dz[q]};
                                    const complex dot = gpv[0] * gqv[0] + gpv[1] * gqv[1] + gpv[2] * gqv[2];
                                    for (int r = 0; r < 3; ++r) {
                                        for (int s = 0; s < 3; ++s) {
                                            complex v = lam * gpv[r] * gqv[s] + mu * gpv[s] * gqv[r];
                                            if (r == s) v += mu * dot;
                                            ke[3 * p + r][3 * q + s] += w * v;
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
                std::array<SparseIndex, 8> ids;
                for (int n = 0; n < 8; ++n) {
                    ids[n] = static_cast<SparseIndex>(m.node(i + corner[n][0], j + corner[n][1], k + corner[n][2]));
                }
                for (int p = 0; p < 8; ++p) {
                    for (int q = 0; q < 8; ++q) {
                        for (int r = 0; r < 3; ++r) {
                            sys.M.coeffRef(3 * ids[p] + r, 3 * ids[q] + r) += me[p][q];
                            if (!void_cell) {
                                for (int s = 0; s < 3; ++s) sys.K.coeffRef(3 * ids[p] + r, 3 * ids[q] + s) += ke[3 * p + r][3 * q + s];
                            }
                        }
                    }
                }
            }
        }
    }
    sys.mesh = std::move(mesh);
    return sys;
}

/// Consistent nodal forces of a normal traction -F(x, y) e_z on z = H.
inline ComplexVector surface_load(const Mesh3D& m, const SurfaceForce& f) {
    ComplexVector F = ComplexVector::Zero(static_cast<Eigen::Index>(m.dof_count()));
    const std::size_t k = m.ez;
    if (f.kind == SurfaceForce::Kind::Point) {
        const double fx = (f.x - m.x0) / m.hx, fy = (f.y - m.y0) / m.hy;
        if (fx < 0 || fy < 0 || fx > m.ex || fy > m.ey) throw OutOfBounds("point force outside the plate");
        const auto i = std::min(m.ex - 1, static_cast<std::size_t>(fx));
        const auto j = std::min(m.ey - 1, static_cast<std::size_t>(fy));
        const double tx = fx - i, ty = fy - j;
        const double w[4] = {(1 - tx) * (1 - ty), tx * (1 - ty), tx * ty, (1 - tx) * ty};
        const std::size_t nodes[4] = {m.node(i, j, k), m.node(i + 1, j, k), m.node(i + 1, j + 1, k), m.node(i, j + 1, k)};
        for (int n = 0; n < 4; ++n) F[static_cast<Eigen::Index>(3 * nodes[n] + 2)] -= f.amplitude * w[n];
        return F;
    }
    // 4x4 Gauss-Legendre on each top face inside the support.
    const double a = 0.3399810435848563, b = 0.8611363115940526;
    const double wa = 0.6521451548625461, wb = 0.3478548451374538;
    const std::array<double, 4> xs{-b, -a, a, b}, ws{wb, wa, wa, wb};
    const double r = f.support();
    for (std::size_t j = 0; j < m.ey; ++j) {
        for (std::size_t i = 0; i < m.ex; ++i) {
            if (m.x(i + 1) < f.x - r || m.x(i) > f.x + r || m.y(j + 1) < f.y - r || m.y(j) > f.y + r) continue;
            double fe[4] = {0, 0, 0, 0};
            for (int p = 0; p < 4; ++p) {
                for (int q = 0; q < 4; ++q) {
                    const double u = 0.5 * (1 + xs[p]), v = 0.5 * (1 + xs[q]);
                    const double val = ws[p] * ws[q] * 0.25 * m.hx * m.hy * f.value(m.x(i) + u * m.hx, m.y(j) + v * m.hy);
                    fe[0] += val * (1 - u) * (1 - v);
                    fe[1] += val * u * (1 - v);
                    fe[2] += val * u * v;
                    fe[3] += val * (1 - u) * v;
                }
            }
            const std::size_t nodes[4] = {m.node(i, j, k), m.node(i + 1, j, k), m.node(i + 1, j + 1, k), m.node(i, j + 1, k)};
            for (int n = 0; n < 4; ++n) F[static_cast<Eigen::Index>(3 * nodes[n] + 2)] -= fe[n];
        }
    }
    return F;
}

class ElasticSolver {
public:
    explicit ElasticSolver(const ElasticSystem& sys, const LUOptions& opt = {})
        : mesh_(sys.mesh), omega_(sys.omega), lu_(sys.matrix(), opt) {}

    ElasticField solve(const ComplexVector& F) const {
        if (F.size() != static_cast<Eigen::Index>(mesh_->dof_count())) throw ShapeMismatch("load length differs from DOF count");
        if (!F.allFinite()) throw InvalidArgument("load is not finite");
        const ComplexVector U = lu_.solve(F);
        return {mesh_, std::vector<complex>(U.data(), U.data() + U.size()), omega_};
    }

    const FactorStats& stats() const noexcept { return lu_.stats(); }

private:
    std::shared_ptr<const Mesh3D> mesh_;
    double omega_;
    SparseLU lu_;
};

inline ElasticField solve_nl(const ElasticSystem& sys, const ComplexVector& F) { return ElasticSolver(sys).solve(F); }

/// u_z on every top-surface node of the padded mesh.
inline Grid2D<complex> extract_surface(const ElasticField& f) {
    const Mesh3D& m = *f.mesh;
    Grid2D<complex> g(m.nx(), m.ny(), m.hx, m.hy, m.x0, m.y0);
    for (std::size_t j = 0; j < m.ny(); ++j) {
        for (std::size_t i = 0; i < m.nx(); ++i) g(i, j) = f.uz(i, j, m.ez);
    }
    return g;
}

/// Top-surface u_z restricted to the physical region [0, Lx] x [0, Ly].
inline Grid2D<complex> extract_physical_surface(const ElasticField& f) {
    const Mesh3D& m = *f.mesh;
    const std::size_t nx = m.ex - 2 * m.pml_cells_x + 1, ny = m.ey - 2 * m.pml_cells_y + 1;
    Grid2D<complex> g(nx, ny, m.hx, m.hy, 0.0, 0.0);
    for (std::size_t j = 0; j < ny; ++j) {
        for (std::size_t i = 0; i < nx; ++i) g(i, j) = f.uz(i + m.pml_cells_x, j + m.pml_cells_y, m.ez);
    }
    return g;
}

}  // namespace weldwave
