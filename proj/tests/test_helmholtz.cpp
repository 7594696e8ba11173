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

#include <cmath>
#include <memory>

#include "weldwave/core/rng.hpp"
#include "weldwave/fem/helmholtz.hpp"

using namespace weldwave;

namespace {

struct Homogeneous {
    double c = 2500.0;
    double omega = two_pi * 225e3;
    double k() const { return omega / c; }
    double lambda() const { return two_pi / k(); }
};

// Exact integral of L0^a L1^b L2^c over a triangle of area A.
double bary_monomial(int a, int b, int c, double A) {
    auto fact = [](int n) {
        double f = 1;
        for (int i = 2; i <= n; ++i) f *= i;
        return f;
    };
    return 2.0 * A * fact(a) * fact(b) * fact(c) / fact(a + b + c + 2);
}

// Quadratic basis as coefficients over products of barycentric coordinates;
// the stiffness integrand is a combination of L_p L_q terms.
std::array<std::array<double, 6>, 6> exact_p2_stiffness(const std::array<Point2, 3>& v) {
    const double det = (v[1].x - v[0].x) * (v[2].y - v[0].y) - (v[2].x - v[0].x) * (v[1].y - v[0].y);
    const double A = 0.5 * det;
    std::array<double, 3> gx, gy;
    for (int k = 0; k < 3; ++k) {
        gx[k] = (v[(k + 1) % 3].y - v[(k + 2) % 3].y) / det;
        gy[k] = (v[(k + 2) % 3].x - v[(k + 1) % 3].x) / det;
    }
    // grad N_a = sum_p c[a][p] L_p  (vector coefficients per L_p plus constant)
    struct Lin {
        std::array<double, 3> x{}, y{};  // coefficient of L_p
    };
    std::array<Lin, 6> g;
    for (int k = 0; k < 3; ++k) {
        // N = L_k(2L_k - 1): grad = (4 L_k - 1) grad L_k = (4L_k - sum L) grad L_k
        for (int p = 0; p < 3; ++p) {
            g[k].x[p] = ((p == k ? 4.0 : 0.0) - 1.0) * gx[k];
            g[k].y[p] = ((p == k ? 4.0 : 0.0) - 1.0) * gy[k];
        }
        const int p = k, q = (k + 1) % 3;
        g[3 + k].x[p] += 4 * gx[q];
        g[3 + k].x[q] += 4 * gx[p];
        g[3 + k].y[p] += 4 * gy[q];
        g[3 + k].y[q] += 4 * gy[p];
    }
    std::array<std::array<double, 6>, 6> K{};
    for (int a = 0; a < 6; ++a) {
        for (int b = 0; b < 6; ++b) {
            double s = 0.0;
            for (int p = 0; p < 3; ++p) {
                for (int q = 0; q < 3; ++q) {
                    std::array<int, 3> e{0, 0, 0};
                    ++e[p];
                    ++e[q];
                    const double coef = g[a].x[p] * g[b].x[q] + g[a].y[p] * g[b].y[q];
                    s += coef * bary_monomial(e[0], e[1], e[2], A);
                }
            }
            K[a][b] = s;
        }
    }
    return K;
}

double max_abs(const ComplexSparse& A) {
    double m = 0.0;
    for (Eigen::Index k = 0; k < A.outerSize(); ++k) {
        for (ComplexSparse::InnerIterator it(A, k); it; ++it) m = std::max(m, std::abs(it.value()));
    }
    return m;
}

std::shared_ptr<const Mesh2D> share(Mesh2D m) { return std::make_shared<const Mesh2D>(std::move(m)); }

}  // namespace

TEST(BuildMesh, ElementSizeMeetsWavelengthRule) {
    const double h0 = units::inches(0.25);
    const double k_a0 = 562.3;  // A0 at 225 kHz in a quarter-inch steel plate
    const auto d = DomainSpec::make(BcClass::Scattering, units::inches(8), units::inches(8), h0, k_a0);
    d.validate(k_a0);
    const auto m = build_mesh(d, k_a0);
    const double limit = two_pi / (6 * k_a0);
    EXPECT_LE(m.h_far, limit);
    EXPECT_LE(m.max_edge_length(), std::sqrt(2.0) * limit * (1 + 1e-12));
    EXPECT_GT(m.min_quality(), 0.1);
    EXPECT_EQ(m.nodes.size(), m.n_dofs);
}

TEST(BuildMesh, RefinesAroundCrackDeterministically) {
    const Homogeneous h;
    const auto d = DomainSpec::make(BcClass::Scattering, 8 * h.lambda(), 8 * h.lambda(), 0.006, h.k());
    CrackSpec c{true, {}, 0.0, 1.0};
    c.path = {{3 * h.lambda(), 4 * h.lambda()}, {4.3 * h.lambda(), 4.2 * h.lambda()}, {5 * h.lambda(), 3.9 * h.lambda()}};
    const auto a = build_mesh(d, h.k(), &c);
    const auto b = build_mesh(d, h.k(), &c);
    const auto plain = build_mesh(d, h.k());
    EXPECT_GT(a.tris.size(), plain.tris.size());
    EXPECT_LE(a.min_edge_length(c.path[1], h.lambda() / 2), 0.5 * a.h_far);
    EXPECT_GT(a.min_quality(), 0.1);
    ASSERT_EQ(a.nodes.size(), b.nodes.size());
    for (std::size_t n = 0; n < a.nodes.size(); ++n) {
        EXPECT_EQ(a.nodes[n].x, b.nodes[n].x);
        EXPECT_EQ(a.nodes[n].y, b.nodes[n].y);
    }
    EXPECT_EQ(a.tris, b.tris);
    // Refinement is conforming: total area is unchanged.
    double area_a = 0.0, area_p = 0.0;
    for (std::size_t t = 0; t < a.tris.size(); ++t) area_a += a.area(t);
    for (std::size_t t = 0; t < plain.tris.size(); ++t) area_p += plain.area(t);
    EXPECT_NEAR(area_a, area_p, 1e-12 * area_p);
}

TEST(BuildMesh, CapAndLayerValidation) {
    const Homogeneous h;
    const auto d = DomainSpec::make(BcClass::Scattering, 50 * h.lambda(), 50 * h.lambda(), 0.006, h.k());
    MeshOptions opt;
    opt.max_nodes = 1000;
    EXPECT_THROW(build_mesh(d, h.k(), nullptr, opt), MeshTooLarge);
    auto thin = d;
    thin.pml_x = h.lambda();
    EXPECT_THROW(thin.validate(h.k()), DomainTooSmall);
    auto wrong = d;
    wrong.bc = BcClass::FreeFree;
    EXPECT_THROW(wrong.validate(h.k()), InvalidArgument);
}

TEST(Assemble, MatchesExactlyIntegratedElements) {
    // Two cells, four triangles, no absorbing layers.
    DomainSpec d{0.02, 0.01, 0.006, BcClass::FreeFree, 0, 0, 6};
    const double k = two_pi / (6 * 0.01);
    auto mesh = share(build_mesh(d, k));
    ASSERT_EQ(mesh->tris.size(), 4u);
    const double vp = 3000.0;
    const auto sys = assemble(mesh, [&](double, double) { return vp * vp; }, 1e5, PMLProfile{});
    Eigen::MatrixXcd oracle = Eigen::MatrixXcd::Zero(mesh->n_dofs, mesh->n_dofs);
    for (const auto& t : mesh->tris) {
        const auto Ke = exact_p2_stiffness({mesh->nodes[t[0]], mesh->nodes[t[1]], mesh->nodes[t[2]]});
        for (int a = 0; a < 6; ++a) {
            for (int b = 0; b < 6; ++b) oracle(mesh->dof[t[a]], mesh->dof[t[b]]) += vp * vp * Ke[a][b];
        }
    }
    const Eigen::MatrixXcd K = Eigen::MatrixXcd(sys.K);
    EXPECT_LT((K - oracle).cwiseAbs().maxCoeff(), 1e-12 * oracle.cwiseAbs().maxCoeff());
    // Mass rows sum to element areas: total equals the domain area.
    EXPECT_NEAR(Eigen::MatrixXcd(sys.M).sum().real(), 0.02 * 0.01, 1e-15);
}

TEST(Assemble, ComplexSymmetricWithLayers) {
    const Homogeneous h;
    const auto d = DomainSpec::make(BcClass::Scattering, 2 * h.lambda(), 2 * h.lambda(), 0.006, h.k());
    auto mesh = share(build_mesh(d, h.k()));
    RandomStream rng(4);
    auto g = Grid2D<double>(8, 8, 2 * h.lambda() / 7, 2 * h.lambda() / 7, 0, 0, 1.0);
    for (auto& v : g.values()) v = rng.uniform(0.7, 1.2);
    const auto ones = Grid2D<double>::like(g, 1.0);
    const auto sys = assemble(mesh, g, ones, h.c, h.omega, PMLProfile::for_domain(d, h.c));
    const ComplexSparse Kt = sys.K.transpose();
    const ComplexSparse Mt = sys.M.transpose();
    EXPECT_LT(max_abs(sys.K - Kt), 1e-12 * max_abs(sys.K));
    EXPECT_LT(max_abs(sys.M - Mt), 1e-12 * max_abs(sys.M));
}

TEST(Assemble, RejectsNonPositiveCoefficient) {
    const Homogeneous h;
    DomainSpec d{h.lambda(), h.lambda(), 0.006, BcClass::FreeFree, 0, 0, 6};
    auto mesh = share(build_mesh(d, h.k()));
    EXPECT_THROW(assemble(mesh, [](double x, double) { return x < 0.001 ? 0.0 : 1.0; }, h.omega, PMLProfile{}),
                 SingularCoefficient);
}

TEST(PML, StretchIsIdentityInsideAndAbsorbingOutside) {
    const Homogeneous h;
    const auto d = DomainSpec::make(BcClass::Scattering, 4 * h.lambda(), 4 * h.lambda(), 0.006, h.k());
    const auto p = PMLProfile::for_domain(d, h.c);
    EXPECT_EQ(p.xi_x(0.5 * d.Lx, h.omega), complex(1.0));
    EXPECT_EQ(p.xi_y(d.Ly, h.omega), complex(1.0));
    for (double x = d.x_lo(); x <= d.x_hi(); x += d.Lx / 50) EXPECT_GE(p.xi_x(x, h.omega).imag(), 0.0);
    EXPECT_GT(p.xi_x(d.x_hi(), h.omega).imag(), 0.0);
    // Round trip through the layer: 2 * int P / vp = ln(1000).
    const double one_way = p.p_max * d.pml_x / 3.0 / h.c;
    EXPECT_NEAR(2.0 * one_way, std::log(1000.0), 1e-12);
}

TEST(SolveMode, ZeroLoadAndLinearity) {
    const Homogeneous h;
    const auto d = DomainSpec::make(BcClass::Scattering, 3 * h.lambda(), 3 * h.lambda(), 0.006, h.k());
    auto mesh = share(build_mesh(d, h.k()));
    const auto sys = assemble(mesh, [&](double, double) { return h.c * h.c; }, h.omega, PMLProfile::for_domain(d, h.c));
    const ModeSolver solver(sys);
    const auto zero = solver.solve(ComplexVector::Zero(mesh->n_dofs));
    for (const auto& v : zero.values) EXPECT_EQ(v, complex(0.0));
    const auto F = force_load(*mesh, SurfaceForce::gaussian(1.5 * h.lambda(), 1.4 * h.lambda(), h.lambda() / 4));
    EXPECT_NEAR(F.sum().real(), 1.0, 1e-6);
    const auto u1 = solver.solve(F);
    const auto u2 = solver.solve(2.0 * F);
    double num = 0.0, den = 0.0;
    for (std::size_t n = 0; n < u1.values.size(); ++n) {
        num += std::norm(u2.values[n] - 2.0 * u1.values[n]);
        den += std::norm(2.0 * u1.values[n]);
    }
    EXPECT_LT(std::sqrt(num / den), 1e-12);
}

TEST(SolveMode, MatchesOutgoingCylindricalWave) {
    const Homogeneous h;
    const double lam = h.lambda(), chi = 3 * lam, L = 16 * lam - 2 * chi;
    DomainSpec d{L, L, 0.006, BcClass::Scattering, chi, chi, 6};
    auto mesh = share(build_mesh(d, h.k()));
    const auto sys = assemble(mesh, [&](double, double) { return h.c * h.c; }, h.omega, PMLProfile::for_domain(d, h.c));
    const double sigma = lam / 4;
    const auto u = solve_mode(sys, force_load(*mesh, SurfaceForce::gaussian(L / 2, L / 2, sigma)));
    double num = 0.0, den = 0.0;
    for (int i = 0; i < 200; ++i) {
        for (int j = 0; j < 200; ++j) {
            const double x = L * i / 199.0, y = L * j / 199.0, r = std::hypot(x - L / 2, y - L / 2);
            if (r < 2 * lam || r > L / 2 - lam) continue;
            const double kr = h.k() * r;
            const complex exact = complex(0, 1) / (4 * h.c * h.c) * std::exp(-0.5 * h.k() * h.k() * sigma * sigma) *
                                  complex(std::cyl_bessel_j(0.0, kr), std::cyl_neumann(0.0, kr));
            num += std::norm(u.at({x, y}) - exact);
            den += std::norm(exact);
        }
    }
    EXPECT_LT(std::sqrt(num / den), 0.05);
}

TEST(SolveMode, ReciprocityInHeterogeneousMedium) {
    const Homogeneous h;
    const auto d = DomainSpec::make(BcClass::Scattering, 4 * h.lambda(), 4 * h.lambda(), 0.006, h.k());
    auto mesh = share(build_mesh(d, h.k()));
    RandomStream rng(8);
    auto g = Grid2D<double>(12, 12, 4 * h.lambda() / 11, 4 * h.lambda() / 11, 0, 0, 1.0);
    for (auto& v : g.values()) v = rng.uniform(0.6, 1.3);
    const auto sys = assemble(mesh, g, Grid2D<double>::like(g, 1.0), h.c, h.omega, PMLProfile::for_domain(d, h.c));
    const ModeSolver solver(sys);
    const Point2 A{0.9 * h.lambda(), 1.3 * h.lambda()}, B{3.1 * h.lambda(), 2.6 * h.lambda()};
    const auto uA = solver.solve(force_load(*mesh, SurfaceForce::point(A.x, A.y)));
    const auto uB = solver.solve(force_load(*mesh, SurfaceForce::point(B.x, B.y)));
    const complex ab = uA.at(B), ba = uB.at(A);
    EXPECT_LT(std::abs(ab - ba) / std::abs(ab), 1e-8);
}

TEST(SolveMode, PeriodicImagesAreEqual) {
    const Homogeneous h;
    const auto d = DomainSpec::make(BcClass::Periodic, 4 * h.lambda(), 3 * h.lambda(), 0.006, h.k());
    d.validate(h.k());
    CrackSpec c{true, {}, 0.0, 1.0};
    c.path = {{1.5 * h.lambda(), 1.5 * h.lambda()}, {2.5 * h.lambda(), 1.6 * h.lambda()}};
    auto mesh = share(build_mesh(d, h.k(), &c));
    EXPECT_LT(mesh->n_dofs, mesh->nodes.size());
    const auto sys = assemble(mesh, [&](double, double) { return h.c * h.c; }, h.omega, PMLProfile::for_domain(d, h.c));
    const auto u = solve_mode(sys, force_load(*mesh, SurfaceForce::gaussian(0.3 * h.lambda(), 1.0 * h.lambda(), h.lambda() / 4)));
    std::size_t pairs = 0;
    for (std::size_t a = 0; a < mesh->nodes.size(); ++a) {
        if (mesh->nodes[a].x != 0.0) continue;
        for (std::size_t b = 0; b < mesh->nodes.size(); ++b) {
            if (mesh->nodes[b].x == d.Lx && mesh->nodes[b].y == mesh->nodes[a].y) {
                EXPECT_EQ(u.values[a], u.values[b]);
                ++pairs;
            }
        }
    }
    EXPECT_EQ(pairs, mesh->nodes.size() - mesh->n_dofs);
    EXPECT_NEAR(std::abs(u.at({0.0, 0.37 * d.Ly}) - u.at({d.Lx, 0.37 * d.Ly})), 0.0, 1e-12 * std::abs(u.at({0.0, 0.37 * d.Ly})));
}

TEST(SolveMode, CrackChangesFieldAndRemovalRestoresIt) {
    const Homogeneous h;
    const auto d = DomainSpec::make(BcClass::Scattering, 4 * h.lambda(), 4 * h.lambda(), 0.006, h.k());
    auto mesh = share(build_mesh(d, h.k()));
    const auto geo = cell_centred_grid(d.Lx, d.Ly, 64, 64);
    const auto phi = Grid2D<double>::like(geo, 1.0);
    CrackSpec c{true, {}, 0.0, 1.0};
    c.path = {{2.5 * h.lambda(), 1.0 * h.lambda()}, {2.5 * h.lambda(), 3.0 * h.lambda()}};
    auto run = [&](const CrackSpec& crack) {
        const auto C = crack_mask(geo, crack, geo.dx());
        const auto sys = assemble(mesh, phi, C, h.c, h.omega, PMLProfile::for_domain(d, h.c));
        return solve_mode(sys, force_load(*mesh, SurfaceForce::gaussian(1.0 * h.lambda(), 2.0 * h.lambda(), h.lambda() / 4)));
    };
    auto norm = [](const ComplexField& f) {
        double s = 0.0;
        for (const auto& v : f.values) s += std::norm(v);
        return std::sqrt(s);
    };
    const auto base = run(CrackSpec{});
    const auto cracked = run(c);
    EXPECT_GT(std::abs(norm(cracked) - norm(base)), 0.0);
    EXPECT_EQ(run(CrackSpec{}).values, base.values);
}

TEST(Superpose, IdentityCancellationAndMismatch) {
    const Homogeneous h;
    DomainSpec d{h.lambda(), h.lambda(), 0.006, BcClass::FreeFree, 0, 0, 6};
    auto mesh = share(build_mesh(d, h.k()));
    ComplexField a{mesh, std::vector<complex>(mesh->nodes.size()), h.omega};
    for (std::size_t n = 0; n < a.values.size(); ++n) a.values[n] = complex(std::sin(n), std::cos(3.0 * n));
    ComplexField b = a;
    for (auto& v : b.values) v = -v;
    EXPECT_EQ(superpose({{1.0, &a}}).values, a.values);
    for (const auto& v : superpose({{0.5, &a}, {0.5, &b}}).values) EXPECT_EQ(v, complex(0.0));
    ComplexField other{share(build_mesh(d, h.k())), a.values, h.omega};
    EXPECT_THROW(superpose({{1.0, &a}, {1.0, &other}}), MeshMismatch);
}
