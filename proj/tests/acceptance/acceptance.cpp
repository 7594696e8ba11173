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
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "weldwave/weldwave.hpp"

using namespace weldwave;

namespace {

/// Collects sub-checks for one criterion and prints them under its verdict.
class Criterion {
public:
    void check(bool ok, const std::string& what) {
        pass_ = pass_ && ok;
        lines_.push_back(std::string(ok ? "ok    " : "miss  ") + what);
    }
    void note(const std::string& what) { lines_.push_back("      " + what); }
    bool passed() const { return pass_; }
    const std::vector<std::string>& lines() const { return lines_; }

private:
    bool pass_ = true;
    std::vector<std::string> lines_;
};

std::string fmt(const char* f, auto... args) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool run(const char* name, const std::function<void(Criterion&)>& body) {
    Criterion c;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        body(c);
    } catch (const std::exception& e) {
        c.check(false, std::string("exception: ") + e.what());
    }
    std::printf("%s %s (%.1f s)\n", c.passed() ? "PASS" : "FAIL", name, seconds_since(t0));
    for (const auto& l : c.lines()) std::printf("    %s\n", l.c_str());
    std::fflush(stdout);
    return c.passed();
}

// ---------------------------------------------------------------------------

void dispersion(Criterion& c) {
    const Material steel = steel_like();
    const double h = units::inches(0.25) / 2.0;
    double lib_time = 0.0;
    auto timed_modes = [&](double w) {
        const auto t0 = std::chrono::steady_clock::now();
        auto m = find_modes(steel, w, h, 100);
        lib_time += seconds_since(t0);
        return m;
    };

    const auto modes = timed_modes(units::angular(225e3));
    std::string labels;
    for (const auto& m : modes) labels += (labels.empty() ? "" : ", ") + m.label();
    c.check(modes.size() == 2 && modes[0].label() == "A0" && modes[1].label() == "S0",
            "225 kHz, 0.25 in: modes " + labels);

    const auto e = oracle::speeds(steel.E0(), steel.nu(), steel.rho());
    RandomStream rng(20260225);
    double worst = 0.0;
    int matched = 0;
    for (int t = 0; t < 20; ++t) {
        const double fd = rng.uniform(0.1, 5.0);
        const double w = two_pi * fd * 1e3 / (2.0 * h);
        const auto found = timed_modes(w);
        for (const auto& m : found) worst = std::max(worst, std::abs(dispersion_residual(steel, m)));
        const double kmax = oracle::generous_k_max(steel.E0(), steel.nu(), steel.rho(), w, h);
        const std::size_t expected =
            oracle::sign_scan_roots(e, true, w, h, kmax).size() + oracle::sign_scan_roots(e, false, w, h, kmax).size();
        if (found.size() == expected) {
            ++matched;
        } else {
            c.note(fmt("fd %.4f MHz*mm: %zu modes, oracle %zu", fd, found.size(), expected));
        }
    }
    for (const auto& m : modes) worst = std::max(worst, std::abs(dispersion_residual(steel, m)));
    c.check(worst < 1e-9, fmt("max |residual| %.2e < 1e-9", worst));
    c.check(matched == 20, fmt("mode counts match sign-scan oracle at %d/20 fd values in [0.1, 5]", matched));
    c.check(lib_time < 5.0, fmt("root finding %.2f s < 5 s", lib_time));
}

// ---------------------------------------------------------------------------

struct Medium {
    double c = 2500.0;
    double omega = units::angular(225e3);
    double k() const { return omega / c; }
    double lambda() const { return two_pi / k(); }
};

struct CylinderRun {
    std::size_t dofs = 0;
    double annulus_error = 0.0;
    double window_db = 0.0;
};

// Gaussian-loaded homogeneous Scattering domain against the outgoing
// cylindrical wave. The window is the band within one wavelength of the PML.
CylinderRun cylinder(int epw) {
    const Medium m;
    const double lam = m.lambda(), chi = 3 * lam, L = 16 * lam - 2 * chi, sigma = lam / 4;
    const DomainSpec d{L, L, units::inches(0.25), BcClass::Scattering, chi, chi, epw};
    auto mesh = std::make_shared<const Mesh2D>(build_mesh(d, m.k()));
    const auto sys = assemble(mesh, [&](double, double) { return m.c * m.c; }, m.omega, PMLProfile::for_domain(d, m.c));
    const auto u = solve_mode(sys, force_load(*mesh, SurfaceForce::gaussian(L / 2, L / 2, sigma)));
    double an = 0, ad = 0, wn = 0, wd = 0;
    const int n = 400;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double x = L * i / (n - 1.0), y = L * j / (n - 1.0), r = std::hypot(x - L / 2, y - L / 2);
            if (r < 2 * lam) continue;
            const double kr = m.k() * r;
            const complex exact = complex(0, 1) / (4 * m.c * m.c) * std::exp(-0.5 * m.k() * m.k() * sigma * sigma) *
                                  complex(std::cyl_bessel_j(0.0, kr), std::cyl_neumann(0.0, kr));
            const double err = std::norm(u.at({x, y}) - exact), ref = std::norm(exact);
            // L excludes the layers, so L/2 - lambda equals Lx/2 - chi - lambda of the padded box.
            if (r <= L / 2 - lam) an += err, ad += ref;
            if (std::min({x, L - x, y, L - y}) <= lam) wn += err, wd += ref;
        }
    }
    return {mesh->n_dofs, std::sqrt(an / ad), 10.0 * std::log10(wn / wd)};
}

void em_solver(Criterion& c) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto coarse = cylinder(6);
    const auto fine = cylinder(12);
    c.check(coarse.annulus_error <= 0.05,
            fmt("cylindrical oracle, 6 el/wavelength, %zu DOF: rel L2 %.4f <= 0.05", coarse.dofs, coarse.annulus_error));
    const double ratio = coarse.annulus_error / fine.annulus_error;
    c.check(ratio >= 4.0, fmt("halving h (%zu DOF): error %.2e, reduction %.1fx >= 4x", fine.dofs, fine.annulus_error, ratio));
    c.check(fine.window_db <= -40.0, fmt("residual in PML-adjacent window %.1f dB <= -40 dB", fine.window_db));

    const Medium m;
    const auto d = DomainSpec::make(BcClass::Scattering, 4 * m.lambda(), 4 * m.lambda(), units::inches(0.25), m.k());
    auto mesh = std::make_shared<const Mesh2D>(build_mesh(d, m.k()));
    RandomStream rng(8);
    auto phi = Grid2D<double>(12, 12, d.Lx / 11, d.Ly / 11, 0, 0, 1.0);
    for (auto& v : phi.values()) v = rng.uniform(0.6, 1.3);
    const ModeSolver solver(assemble(mesh, phi, Grid2D<double>::like(phi, 1.0), m.c, m.omega, PMLProfile::for_domain(d, m.c)));
    const Point2 A{0.9 * m.lambda(), 1.3 * m.lambda()}, B{3.1 * m.lambda(), 2.6 * m.lambda()};
    const complex ab = solver.solve(force_load(*mesh, SurfaceForce::point(A.x, A.y))).at(B);
    const complex ba = solver.solve(force_load(*mesh, SurfaceForce::point(B.x, B.y))).at(A);
    const double rec = std::abs(ab - ba) / std::abs(ab);
    c.check(rec <= 1e-8, fmt("reciprocity, heterogeneous medium: %.2e <= 1e-8", rec));
    const double t = seconds_since(t0);
    c.check(t < 120.0, fmt("runtime %.1f s < 120 s", t));
}

// ---------------------------------------------------------------------------

double sparse_norm(const ComplexSparse& A) {
    double s = 0;
    for (Eigen::Index col = 0; col < A.outerSize(); ++col) {
        for (ComplexSparse::InnerIterator it(A, col); it; ++it) s += std::norm(it.value());
    }
    return std::sqrt(s);
}

// Radially binned power spectrum; bin b collects |k| in [b - 1/2, b + 1/2) dk.
std::vector<double> radial_spectrum(const Grid2D<complex>& g) {
    const auto F = fft2(g);
    const std::size_t nb = std::min(g.nx(), g.ny()) / 2;
    std::vector<double> power(nb, 0.0), count(nb, 0.0);
    for (std::size_t j = 0; j < g.ny(); ++j) {
        for (std::size_t i = 0; i < g.nx(); ++i) {
            const double a = i <= g.nx() / 2 ? double(i) : double(i) - double(g.nx());
            const double b = j <= g.ny() / 2 ? double(j) : double(j) - double(g.ny());
            const auto bin = static_cast<std::size_t>(std::lround(std::hypot(a, b)));
            if (bin < nb) power[bin] += std::norm(F(i, j)), count[bin] += 1.0;
        }
    }
    for (std::size_t b = 0; b < nb; ++b) power[b] /= count[b];
    return power;
}

void nl_solver(Criterion& c) {
    const auto t0 = std::chrono::steady_clock::now();
    const Material mat = steel_like();
    const double L = units::inches(4.0), H = units::inches(0.25), w = units::angular(120e3);
    const auto table = make_dispersion_table(mat, w, H / 2);
    const LambMode* a0 = table.find(Symmetry::A, 0);
    const LambMode* s0 = table.find(Symmetry::S, 0);
    if (!a0 || !s0) throw MissingMode("A0 and S0 expected at 120 kHz");

    // Same meshing rule the dataset engine applies to NL samples.
    const GenerateOptions defaults;
    const auto d = DomainSpec::make(BcClass::Scattering, L, L, H, a0->k, defaults.nl_pml_wavelengths);
    auto mesh = std::make_shared<const Mesh3D>(build_mesh3d(d, a0->k, defaults.nl_mesh));
    const ElasticSolver solver(assemble_nl(mesh, nullptr, mat, w, PMLProfile::for_domain(mesh->domain, s0->vp)));
    c.note(fmt("mesh %zu x %zu x %zu elements, %zu DOF (cap %zu)", mesh->ex, mesh->ey, mesh->ez, mesh->dof_count(),
               defaults.nl_mesh.dof_cap));

    const auto surface = extract_physical_surface(solver.solve(surface_load(*mesh, SurfaceForce::gaussian(L / 2, L / 2, two_pi / a0->k / 4))));
    const auto P = radial_spectrum(surface);
    const double dk = two_pi / (static_cast<double>(surface.nx()) * surface.dx());
    std::string bins;
    for (std::size_t b = 0; b < P.size() && b * dk < 2.0 * a0->k; ++b) bins += fmt("%.0f:%.1e ", b * dk, P[b]);
    c.note("radial |U_z|^2 by k (rad/m): " + bins);
    for (const LambMode* mode : {a0, s0}) {
        // Nearest local maximum of the spectrum to the predicted wavenumber.
        double best = INFINITY, at = NAN;
        for (std::size_t b = 1; b + 1 < P.size(); ++b) {
            if (P[b] > P[b - 1] && P[b] > P[b + 1] && std::abs(b * dk - mode->k) < best) {
                best = std::abs(b * dk - mode->k);
                at = b * dk;
            }
        }
        c.check(best <= dk, fmt("%s: predicted k %.1f, nearest peak %.1f, offset %.1f <= bin %.1f rad/m",
                                mode->label().c_str(), mode->k, at, best, dk));
    }

    // Reciprocity between z loads on two surface nodes.
    const std::size_t k = mesh->ez;
    const std::size_t ia = mesh->pml_cells_x + surface.nx() / 3, ja = mesh->pml_cells_y + surface.ny() / 4;
    const std::size_t ib = mesh->pml_cells_x + 2 * surface.nx() / 3, jb = mesh->pml_cells_y + 3 * surface.ny() / 5;
    const auto ua = solver.solve(surface_load(*mesh, SurfaceForce::point(mesh->x(ia), mesh->y(ja))));
    const auto ub = solver.solve(surface_load(*mesh, SurfaceForce::point(mesh->x(ib), mesh->y(jb))));
    const complex ab = ua.uz(ib, jb, k), ba = ub.uz(ia, ja, k);
    const double rec = std::abs(ab - ba) / std::abs(ab);
    c.check(rec <= 1e-8, fmt("reciprocity of surface z loads: %.2e <= 1e-8", rec));

    // Rigid-body motions on the same plate without absorbing layers.
    const auto free = DomainSpec{L, L, H, BcClass::FreeFree, 0.0, 0.0, 6};
    auto fmesh = std::make_shared<const Mesh3D>(build_mesh3d(free, a0->k, defaults.nl_mesh));
    const auto fsys = assemble_nl(fmesh, nullptr, mat, w, PMLProfile::for_domain(fmesh->domain, s0->vp));
    const double nK = sparse_norm(fsys.K);
    double worst = 0.0;
    const auto n = static_cast<Eigen::Index>(fmesh->dof_count());
    for (int mode = 0; mode < 6; ++mode) {
        Eigen::VectorXcd r = Eigen::VectorXcd::Zero(n);
        for (std::size_t kk = 0; kk < fmesh->nz(); ++kk) {
            for (std::size_t j = 0; j < fmesh->ny(); ++j) {
                for (std::size_t i = 0; i < fmesh->nx(); ++i) {
                    const auto q = static_cast<Eigen::Index>(3 * fmesh->node(i, j, kk));
                    const double x = fmesh->x(i), y = fmesh->y(j), z = fmesh->z(kk);
                    switch (mode) {
                        case 0: case 1: case 2: r[q + mode] = 1.0; break;
                        case 3: r[q + 1] = -z, r[q + 2] = y; break;
                        case 4: r[q] = z, r[q + 2] = -x; break;
                        default: r[q] = -y, r[q + 1] = x; break;
                    }
                }
            }
        }
        worst = std::max(worst, (fsys.K * r).norm() / (nK * r.norm()));
    }
    c.check(worst <= 1e-9, fmt("rigid-body null space ||K r|| / (||K|| ||r||) %.2e <= 1e-9", worst));
    const double t = seconds_since(t0);
    c.check(t < 600.0, fmt("runtime %.1f s < 600 s", t));
}

// ---------------------------------------------------------------------------

// Plane wave along x on a periodic grid holding exactly `cycles` periods of
// wavenumber k, so the wave falls on a single FFT bin.
WavefieldGrid plane_wave_grid(double k, int cycles, std::size_t n, double omega) {
    const double L = cycles * two_pi / k, d = L / static_cast<double>(n);
    WavefieldGrid g{Grid2D<complex>(n, n, d, d), omega, Provenance::Generated};
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < n; ++i) g.values(i, j) = std::polar(1.0, k * g.values.x(i));
    }
    return g;
}

double rms_ratio(const Grid2D<complex>& out, const Grid2D<complex>& in) {
    double a = 0, b = 0;
    for (std::size_t q = 0; q < in.size(); ++q) a += std::norm(out[q]), b += std::norm(in[q]);
    return std::sqrt(a / b);
}

void mode_filtering(Criterion& c) {
    const auto t0 = std::chrono::steady_clock::now();
    const double w = units::angular(225e3);
    const auto table = make_dispersion_table(steel_like(), w, units::inches(0.25) / 2);
    const double kA = table.find(Symmetry::A, 0)->k, kS = table.find(Symmetry::S, 0)->k;

    const auto centre = plane_wave_grid(kA, 24, 256, w);
    const double unit = rms_ratio(mode_filter(centre, table, "A0").values, centre.values);
    c.check(std::abs(unit - 1.0) <= 1e-10, fmt("gain at k_A0 %.12f, |1 - g| %.1e <= 1e-10", unit, std::abs(unit - 1.0)));

    const double k_mid = 0.5 * (kA + kS);
    const auto mid = plane_wave_grid(k_mid, 24, 256, w);
    for (const char* label : {"A0", "S0"}) {
        const double g = rms_ratio(mode_filter(mid, table, label).values, mid.values);
        c.check(std::abs(g * g - 0.5) <= 0.05 * 0.5, fmt("%s filter power at midpoint %.4f, within 5%% of 0.5", label, g * g));
    }

    // Equal-amplitude A0 and S0 waves in different directions, each on an
    // exact bin of a shared periodic grid.
    const std::size_t n = 256;
    const double L = 40 * two_pi / kS, dx = L / static_cast<double>(n), dk = two_pi / L;
    const int mA = static_cast<int>(std::lround(kA / dk));
    WavefieldGrid mix{Grid2D<complex>(n, n, dx, dx), w, Provenance::Generated};
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < n; ++i) {
            const double x = mix.values.x(i), y = mix.values.y(j);
            mix.values(i, j) = std::polar(1.0, mA * dk * x) + std::polar(1.0, 40 * dk * y);
        }
    }
    const auto bin_power = [&](const Grid2D<complex>& g, std::size_t i, std::size_t j) { return std::norm(fft2(g)(i, j)); };
    for (const char* keep : {"A0", "S0"}) {
        const auto out = mode_filter(mix, table, keep).values;
        const double pA = bin_power(out, static_cast<std::size_t>(mA), 0), pS = bin_power(out, 0, 40);
        const double rejection = 10.0 * std::log10(std::string(keep) == "A0" ? pA / pS : pS / pA);
        c.check(rejection >= 20.0, fmt("keep %s: other mode %.2f dB below retained, needs >= 20 dB", keep, rejection));
    }
    const double t = seconds_since(t0);
    c.check(t < 5.0, fmt("runtime %.2f s < 5 s", t));
}

// ---------------------------------------------------------------------------

// One-sample KS statistic against a CDF with possible atoms, given the CDF
// and its left limit.
double ks(std::vector<double> x, const std::function<double(double)>& F, const std::function<double(double)>& F_left) {
    std::sort(x.begin(), x.end());
    const double n = static_cast<double>(x.size());
    double d = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) d = std::max({d, (i + 1) / n - F(x[i]), F_left(x[i]) - i / n});
    return d;
}

double ks_uniform(const std::vector<double>& x, double lo, double hi) {
    const auto F = [=](double v) { return std::clamp((v - lo) / (hi - lo), 0.0, 1.0); };
    return ks(x, F, F);
}

double ks_clamped_normal(const std::vector<double>& x, double mean, double sd, double lo, double hi) {
    const auto Phi = [=](double v) { return 0.5 * std::erfc(-(v - mean) / (sd * std::sqrt(2.0))); };
    return ks(x, [=](double v) { return v < lo ? 0.0 : (v >= hi ? 1.0 : Phi(v)); },
              [=](double v) { return v <= lo ? 0.0 : (v > hi ? 1.0 : Phi(v)); });
}

std::vector<std::string> dump_dataset(const std::filesystem::path& dir, unsigned workers) {
    DatasetConfig cfg;
    cfg.bc = BcClass::FreeFree;
    cfg.model = SolverModel::EM;
    cfg.count = 10;
    cfg.seed = 20260301;
    cfg.out_dir = dir;
    cfg.workers = workers;
    std::filesystem::remove_all(dir);
    const auto manifest = generate_dataset(cfg);
    if (!manifest["failures"].empty()) throw std::runtime_error("golden run failed: " + manifest["failures"].dump());
    if (!verify_manifest(manifest, dir).empty()) throw std::runtime_error("manifest hashes do not verify");
    std::vector<std::string> out{sha256_file(dir / "manifest.json")};
    for (const auto& f : manifest["files"]) out.push_back(f["sha256"].get<std::string>());
    return out;
}

void dataset_engine(Criterion& c) {
    const auto root = std::filesystem::temp_directory_path() / "weldwave_acceptance";
    const auto a = dump_dataset(root / "w1", 1);
    const auto b = dump_dataset(root / "w1_again", 1);
    const auto d = dump_dataset(root / "w3", 3);
    c.check(a.size() == 11 && a == b, "10-sample golden run: manifest and sample hashes identical on rerun");
    c.check(a == d, "10-sample golden run: identical with 1 and 3 workers");
    c.note("manifest sha256 " + a.front());
    std::filesystem::remove_all(root);

    for (const BcClass bc : {BcClass::Scattering, BcClass::FreeFree}) {
        DatasetConfig cfg;
        cfg.bc = bc;
        cfg.seed = 77 + static_cast<std::uint64_t>(bc);
        const PlateDims plate = plate_for(bc);
        const double L = plate.L(), H = plate.h0, margin = a0_wavelength(cfg.generate, H);
        std::vector<double> lc, dc, th, dw, fx, fy, w0, ev;
        for (std::size_t i = 0; i < 1000; ++i) {
            const auto p = dataset_params(cfg, i);
            lc.push_back(p.crack_length), dc.push_back(p.crack_depth), th.push_back(p.weld_angle);
            dw.push_back(p.weld_depth), fx.push_back(p.force.x), fy.push_back(p.force.y);
            w0.push_back(p.nominal_reduction), ev.push_back(p.variation_amplitude);
        }
        const double crit = 1.628 / std::sqrt(1000.0);
        const auto& nr = cfg.distributions.nominal_reduction;
        const auto& va = cfg.distributions.variation_amplitude;
        const double half_pi = std::nextafter(0.5 * pi, 0.0);
        const std::pair<const char*, double> stats[] = {
            {"L_c", ks_uniform(lc, L / 50, L / 2)},
            {"d_c", ks_uniform(dc, H / 10, H)},
            {"theta_w", ks_clamped_normal(th, 0.0, pi / 4, -half_pi, half_pi)},
            {"d_w", ks_clamped_normal(dw, H / 5, H / 20, 0.0, H / 2)},
            {"x_f", ks_clamped_normal(fx, plate.Lx / 2, plate.Lx / 4, margin, plate.Lx - margin)},
            {"y_f", ks_clamped_normal(fy, plate.Ly / 4, plate.Ly / 6, margin, plate.Ly - margin)},
            {"W0", ks_clamped_normal(w0, nr.mean, nr.sd, nr.lo, nr.hi)},
            {"eps_V", ks_clamped_normal(ev, va.mean, va.sd, va.lo, va.hi)},
        };
        std::string worst_name;
        double worst = 0.0;
        bool all = true;
        for (const auto& [name, D] : stats) {
            all = all && D < crit;
            if (D > worst) worst = D, worst_name = name;
        }
        c.check(all, fmt("%s, 1000 draws: KS D max %.4f (%s) < %.4f at alpha 0.01", to_string(bc).c_str(), worst,
                         worst_name.c_str(), crit));
    }

    WavefieldGrid field{Grid2D<complex>(64, 48, 1e-3, 1e-3), units::angular(225e3), Provenance::Generated};
    for (std::size_t q = 0; q < field.values.size(); ++q) field.values[q] = std::polar(1.0 + 0.1 * (q % 7), 0.3 * q);
    CorruptionSpec always;
    always.mask = MaskMode::Always;
    bool exact = true;
    for (std::uint64_t s = 0; s < 20; ++s) {
        RandomStream rng(s);
        const auto out = synth_corrupt(field, always, rng);
        const auto zeros = std::count(out.values.storage().begin(), out.values.storage().end(), complex(0.0));
        exact = exact && zeros == static_cast<long>(field.values.size() / 4);
    }
    c.check(exact, fmt("masked fields drop exactly %zu of %zu pixels (20 seeds)", field.values.size() / 4, field.values.size()));
    int applied = 0;
    for (std::uint64_t s = 0; s < 1000; ++s) {
        RandomStream rng(derive_seed(99, s, 0));
        CorruptionRecord r;
        synth_corrupt(field, CorruptionSpec{}, rng, &r);
        applied += r.masked;
    }
    c.check(std::abs(applied - 500) <= 40, fmt("mask applied in %d of 1000 calls, 500 +/- 40", applied));
}

}  // namespace

int main() {
    bool ok = true;
    ok &= run("dispersion correctness", dispersion);
    ok &= run("EM solver accuracy", em_solver);
    ok &= run("NL solver sanity", nl_solver);
    ok &= run("mode filtering", mode_filtering);
    ok &= run("dataset engine", dataset_engine);
    return ok ? 0 : 1;
}
