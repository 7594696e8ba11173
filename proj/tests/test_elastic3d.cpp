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
#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <memory>

#include <Eigen/Dense>

#include "weldwave/nl/elastic3d.hpp"

using namespace weldwave;

namespace {

constexpr double kFreq = 120e3;
const double kOmega = two_pi * kFreq;

DomainSpec free_box(double Lx, double Ly, double H) { return DomainSpec{Lx, Ly, H, BcClass::FreeFree, 0.0, 0.0, 6}; }

std::shared_ptr<const Mesh3D> small_mesh(const DomainSpec& d, double h, int nz = 2) {
    Mesh3DOptions o;
    o.nodes_per_wavelength = 1;
    o.min_thickness_elements = nz;
    return std::make_shared<const Mesh3D>(build_mesh3d(d, two_pi / h, o));
}

// Voigt-form stiffness B^T D B of an axis-aligned trilinear brick.
Eigen::MatrixXd brick_stiffness(double a, double b, double c, double E, double nu) {
    const double lam = E * nu / ((1 + nu) * (1 - 2 * nu)), mu = E / (2 * (1 + nu));
    Eigen::Matrix<double, 6, 6> D = Eigen::Matrix<double, 6, 6>::Zero();
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) D(i, j) = lam;
        D(i, i) += 2 * mu;
        D(3 + i, 3 + i) = mu;
    }
    const int sgn[8][3] = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}, {0, 0, 1}, {1, 0, 1}, {1, 1, 1}, {0, 1, 1}};
    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(24, 24);
    const double g = 1 / std::sqrt(3.0);
    for (double X : {0.5 - 0.5 * g, 0.5 + 0.5 * g}) {
        for (double Y : {0.5 - 0.5 * g, 0.5 + 0.5 * g}) {
            for (double Z : {0.5 - 0.5 * g, 0.5 + 0.5 * g}) {
                Eigen::Matrix<double, 6, 24> B = Eigen::Matrix<double, 6, 24>::Zero();
                for (int n = 0; n < 8; ++n) {
                    auto lin = [](int s, double t) { return s ? t : 1 - t; };
                    auto der = [](int s) { return s ? 1.0 : -1.0; };
                    const double gx = der(sgn[n][0]) * lin(sgn[n][1], Y) * lin(sgn[n][2], Z) / a;
                    const double gy = lin(sgn[n][0], X) * der(sgn[n][1]) * lin(sgn[n][2], Z) / b;
                    const double gz = lin(sgn[n][0], X) * lin(sgn[n][1], Y) * der(sgn[n][2]) / c;
                    B(0, 3 * n) = gx;
                    B(1, 3 * n + 1) = gy;
                    B(2, 3 * n + 2) = gz;
                    B(3, 3 * n + 1) = gz;
                    B(3, 3 * n + 2) = gy;
                    B(4, 3 * n) = gz;
                    B(4, 3 * n + 2) = gx;
                    B(5, 3 * n) = gy;
                    B(5, 3 * n + 1) = gx;
                }
                K += B.transpose() * D * B * (a * b * c / 8.0);
            }
        }
    }
    return K;
}

std::vector<Eigen::VectorXcd> rigid_modes(const Mesh3D& m) {
    std::vector<Eigen::VectorXcd> r(6, Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(m.dof_count())));
    for (std::size_t k = 0; k < m.nz(); ++k) {
        for (std::size_t j = 0; j < m.ny(); ++j) {
            for (std::size_t i = 0; i < m.nx(); ++i) {
                const auto q = static_cast<Eigen::Index>(3 * m.node(i, j, k));
                const double x = m.x(i), y = m.y(j), z = m.z(k);
                for (int c = 0; c < 3; ++c) r[c][q + c] = 1.0;
                r[3][q + 1] = -z, r[3][q + 2] = y;
                r[4][q] = z, r[4][q + 2] = -x;
                r[5][q] = -y, r[5][q + 1] = x;
            }
        }
    }
    return r;
}

double sparse_norm(const ComplexSparse& A) {
    double s = 0;
    for (Eigen::Index c = 0; c < A.outerSize(); ++c) {
        for (ComplexSparse::InnerIterator it(A, c); it; ++it) s += std::norm(it.value());
    }
    return std::sqrt(s);
}

}  // namespace

TEST(Mesh3D, PhysicalEdgesOnNodes) {
    const DomainSpec d = DomainSpec::make(BcClass::Scattering, 0.05, 0.04, 6e-3, 400.0, 1.5);
    Mesh3DOptions o;
    const Mesh3D m = build_mesh3d(d, 400.0, o);
    EXPECT_LE(m.hx, two_pi / 400.0 / o.nodes_per_wavelength + 1e-12);
    EXPECT_GE(m.ez, 4u);
    EXPECT_NEAR(m.x(m.pml_cells_x), 0.0, 1e-12);
    EXPECT_NEAR(m.x(m.ex - m.pml_cells_x), d.Lx, 1e-12);
    EXPECT_NEAR(m.y(m.ey - m.pml_cells_y), d.Ly, 1e-12);
    EXPECT_GE(m.domain.pml_x, d.pml_x - 1e-12);
    EXPECT_NEAR(m.z(m.ez), d.H, 1e-15);
}

TEST(Mesh3D, DofCapEnforced) {
    const DomainSpec d = free_box(0.1, 0.1, 6e-3);
    Mesh3DOptions o;
    o.dof_cap = 1000;
    EXPECT_THROW(build_mesh3d(d, 400.0, o), MeshTooLarge);
    EXPECT_THROW(build_mesh3d(d, -1.0), InvalidArgument);
}

TEST(Elastic3D, SingleBrickMatchesVoigtOracle) {
    const auto mat = steel_like();
    const double a = 3e-3, b = 2e-3, c = 1.5e-3;
    Mesh3DOptions o;
    o.nodes_per_wavelength = 1;
    o.min_thickness_elements = 1;
    auto mesh = std::make_shared<const Mesh3D>(build_mesh3d(free_box(a, b, c), two_pi / 0.1, o));
    ASSERT_EQ(mesh->ex * mesh->ey * mesh->ez, 1u);
    const auto sys = assemble_nl(mesh, nullptr, mat, kOmega, PMLProfile::for_domain(mesh->domain, 3000.0));
    const Eigen::MatrixXd Ko = brick_stiffness(a, b, c, mat.E0(), mat.nu());
    const int corner[8][3] = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}, {0, 0, 1}, {1, 0, 1}, {1, 1, 1}, {0, 1, 1}};
    const Eigen::MatrixXcd K(sys.K);
    double err = 0.0;
    for (int p = 0; p < 8; ++p) {
        for (int q = 0; q < 8; ++q) {
            const auto P = mesh->node(corner[p][0], corner[p][1], corner[p][2]);
            const auto Q = mesh->node(corner[q][0], corner[q][1], corner[q][2]);
            for (int r = 0; r < 3; ++r) {
                for (int s = 0; s < 3; ++s) {
                    err = std::max(err, std::abs(K(3 * P + r, 3 * Q + s) - Ko(3 * p + r, 3 * q + s)));
                }
            }
        }
    }
    EXPECT_LT(err / Ko.cwiseAbs().maxCoeff(), 1e-12);

    // Consistent mass totals rho V in each component.
    const Eigen::MatrixXcd M(sys.M);
    complex total = 0.0;
    for (Eigen::Index i = 0; i < M.rows(); i += 3) {
        for (Eigen::Index j = 0; j < M.cols(); j += 3) total += M(i, j);
    }
    EXPECT_NEAR(total.real(), mat.rho() * a * b * c, 1e-12 * mat.rho() * a * b * c);
}

TEST(Elastic3D, RigidBodyNullSpace) {
    const auto mat = steel_like();
    auto mesh = small_mesh(free_box(0.02, 0.015, 4e-3), 2.5e-3);
    Grid2D<double> E = cell_centred_grid<double>(0.02, 0.015, 20, 15, 1.0);
    for (std::size_t j = 0; j < E.ny(); ++j) {
        for (std::size_t i = 0; i < E.nx(); ++i) E(i, j) = 0.6 + 0.4 * std::sin(0.3 * i + 0.7 * j) * std::sin(0.3 * i + 0.7 * j);
    }
    const auto sys = assemble_nl(mesh, &E, mat, kOmega, PMLProfile::for_domain(mesh->domain, 3000.0));
    const double nK = sparse_norm(sys.K);
    for (const auto& r : rigid_modes(*mesh)) {
        const Eigen::VectorXcd Kr = sys.K * r;
        EXPECT_LE(Kr.norm() / (nK * r.norm()), 1e-9);
    }
}

TEST(Elastic3D, ComplexSymmetricWithLayers) {
    const auto mat = steel_like();
    const DomainSpec d = DomainSpec::make(BcClass::Scattering, 0.012, 0.012, 3e-3, two_pi / 3e-3, 1.0);
    auto mesh = small_mesh(d, 1.5e-3);
    const auto sys = assemble_nl(mesh, nullptr, mat, kOmega, PMLProfile::for_domain(mesh->domain, 3000.0));
    const ComplexSparse A = sys.matrix();
    const ComplexSparse At = A.transpose();
    EXPECT_LE(sparse_norm(A - At), 1e-13 * sparse_norm(A));
    // The stretch makes the operator genuinely complex.
    double imag = 0;
    for (Eigen::Index c = 0; c < A.outerSize(); ++c) {
        for (ComplexSparse::InnerIterator it(A, c); it; ++it) imag = std::max(imag, std::abs(it.value().imag()));
    }
    EXPECT_GT(imag, 0.0);
}

class ElasticSolve : public ::testing::Test {
protected:
    void SetUp() override {
        const auto mat = steel_like();
        const DomainSpec d = DomainSpec::make(BcClass::Scattering, 0.02, 0.02, 3e-3, two_pi / 8e-3, 1.5);
        mesh = small_mesh(d, 1e-3);
        const auto sys = assemble_nl(mesh, nullptr, mat, kOmega, PMLProfile::for_domain(mesh->domain, 2000.0));
        solver = std::make_unique<ElasticSolver>(sys);
    }
    std::shared_ptr<const Mesh3D> mesh;
    std::unique_ptr<ElasticSolver> solver;
};

TEST_F(ElasticSolve, Reciprocity) {
    const ElasticField ua = solver->solve(surface_load(*mesh, SurfaceForce::point(0.006, 0.007)));
    const ElasticField ub = solver->solve(surface_load(*mesh, SurfaceForce::point(0.014, 0.012)));
    const std::size_t k = mesh->ez;
    auto idx = [&](double x) { return static_cast<std::size_t>(std::lround((x - mesh->x0) / mesh->hx)); };
    const complex ab = ua.uz(idx(0.014), idx(0.012), k), ba = ub.uz(idx(0.006), idx(0.007), k);
    ASSERT_NEAR(mesh->x(idx(0.006)), 0.006, 1e-12);
    ASSERT_NEAR(mesh->y(idx(0.012)), 0.012, 1e-12);
    EXPECT_GT(std::abs(ab), 0.0);
    EXPECT_LE(std::abs(ab - ba) / std::abs(ab), 1e-8);
}

TEST_F(ElasticSolve, ZeroLoadAndLinearity) {
    const ComplexVector zero = ComplexVector::Zero(static_cast<Eigen::Index>(mesh->dof_count()));
    for (const complex v : solver->solve(zero).u) EXPECT_EQ(v, complex(0.0));
    const ComplexVector F1 = surface_load(*mesh, SurfaceForce::gaussian(0.01, 0.01, 1.5e-3));
    const ComplexVector F2 = surface_load(*mesh, SurfaceForce::point(0.005, 0.013));
    const complex a(2.0, -1.0), b(-0.5, 3.0);
    const auto u1 = solver->solve(F1), u2 = solver->solve(F2), u12 = solver->solve(a * F1 + b * F2);
    double err = 0, ref = 0;
    for (std::size_t i = 0; i < u12.u.size(); ++i) {
        err += std::norm(u12.u[i] - a * u1.u[i] - b * u2.u[i]);
        ref += std::norm(u12.u[i]);
    }
    EXPECT_LE(std::sqrt(err / ref), 1e-10);
    EXPECT_THROW(solver->solve(ComplexVector::Zero(5)), ShapeMismatch);
}

TEST_F(ElasticSolve, SurfaceExtraction) {
    const auto u = solver->solve(surface_load(*mesh, SurfaceForce::gaussian(0.01, 0.01, 1.5e-3)));
    const auto full = extract_surface(u);
    EXPECT_EQ(full.nx(), mesh->nx());
    EXPECT_EQ(full.ny(), mesh->ny());
    const auto phys = extract_physical_surface(u);
    EXPECT_EQ(phys.nx(), 21u);
    EXPECT_EQ(phys.ny(), 21u);
    EXPECT_DOUBLE_EQ(phys.x0(), 0.0);
    EXPECT_EQ(phys(3, 4), u.uz(3 + mesh->pml_cells_x, 4 + mesh->pml_cells_y, mesh->ez));
    // Response decays away from the source.
    EXPECT_GT(std::abs(phys(10, 10)), std::abs(phys(0, 0)));
}

TEST(Elastic3D, LoadTotals) {
    auto mesh = small_mesh(free_box(0.02, 0.02, 3e-3), 1e-3);
    const ComplexVector Fp = surface_load(*mesh, SurfaceForce::point(0.0071, 0.0133, 2.0));
    const ComplexVector Fg = surface_load(*mesh, SurfaceForce::gaussian(0.01, 0.01, 1.2e-3, 2.0));
    complex sp = 0, sg = 0;
    for (Eigen::Index i = 2; i < Fp.size(); i += 3) sp += Fp[i], sg += Fg[i];
    EXPECT_NEAR(sp.real(), -2.0, 1e-12);
    EXPECT_NEAR(sg.real(), -2.0, 1e-5);
    EXPECT_THROW(surface_load(*mesh, SurfaceForce::point(0.05, 0.01)), OutOfBounds);
}

TEST(Elastic3D, SingularMaterialRejected) {
    const auto mat = steel_like();
    auto mesh = small_mesh(free_box(0.01, 0.01, 2e-3), 1e-3);
    Grid2D<double> E = cell_centred_grid<double>(0.01, 0.01, 10, 10, 1.0);
    E(5, 5) = -1.0;
    const auto pml = PMLProfile::for_domain(mesh->domain, 3000.0);
    EXPECT_THROW(assemble_nl(mesh, &E, mat, kOmega, pml), SingularMaterial);
    EXPECT_THROW(assemble_nl(mesh, nullptr, mat, 0.0, pml), InvalidFrequency);
}

TEST(Elastic3D, CrackVoidsElementsBelowSurface) {
    const auto mat = steel_like();
    auto mesh = small_mesh(free_box(0.01, 0.01, 2e-3), 1e-3, 4);
    CrackSpec crack;
    crack.present = true;
    crack.depth_ratio = 0.5;
    crack.width = 2e-4;
    crack.path = {{0.0025, 0.0055}, {0.0075, 0.0055}};
    crack.length = 0.005;
    EXPECT_TRUE(detail::element_cracked(*mesh, 4, 5, 3, crack));
    EXPECT_TRUE(detail::element_cracked(*mesh, 4, 5, 2, crack));
    EXPECT_FALSE(detail::element_cracked(*mesh, 4, 5, 1, crack));
    EXPECT_FALSE(detail::element_cracked(*mesh, 4, 8, 3, crack));

    const auto pml = PMLProfile::for_domain(mesh->domain, 3000.0);
    const auto intact = assemble_nl(mesh, nullptr, mat, kOmega, pml);
    const auto cracked = assemble_nl(mesh, nullptr, mat, kOmega, pml, &crack);
    EXPECT_EQ(sparse_norm(intact.M - cracked.M), 0.0);
    EXPECT_GT(sparse_norm(intact.K - cracked.K), 1e-3 * sparse_norm(intact.K));
    EXPECT_LT(sparse_norm(cracked.K), sparse_norm(intact.K));
    // Rigid motions stay in the kernel with voids present.
    const double nK = sparse_norm(cracked.K);
    for (const auto& r : rigid_modes(*mesh)) EXPECT_LE((cracked.K * r).norm() / (nK * r.norm()), 1e-9);
}
