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
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "weldwave/core/error.hpp"
#include "weldwave/core/units.hpp"
#include "weldwave/dispersion/material.hpp"

namespace weldwave {

enum class Symmetry { S, A };

inline char symmetry_char(Symmetry s) { return s == Symmetry::S ? 'S' : 'A'; }

inline Symmetry parse_symmetry(char c) {
    if (c == 'S' || c == 's') return Symmetry::S;
    if (c == 'A' || c == 'a') return Symmetry::A;
    throw InvalidArgument(std::string("unknown symmetry '") + c + "'");
}

/// One propagating Lamb mode at a fixed frequency. Backward-wave branches
/// (between a zero-group-velocity point and the cut-on) report vg < 0.
struct LambMode {
    Symmetry symmetry = Symmetry::A;
    int order = 0;
    double omega = 0.0;
    double half_thickness = 0.0;
    double k = 0.0;
    double vp = 0.0;
    double vg = 0.0;

    std::string label() const { return std::string(1, symmetry_char(symmetry)) + std::to_string(order); }
};

/// Through-thickness displacement of a mode at x = 0, peak-normalised over
/// the samples. ux carries the quarter-period phase lag of the in-plane motion.
struct ModeShape {
    std::vector<double> z;
    std::vector<complex> ux;
    std::vector<complex> uz;
};

struct DispersionTable {
    Material material = steel_like();
    double omega = 0.0;
    double half_thickness = 0.0;
    std::vector<LambMode> modes;       // descending k
    std::vector<double> amplitudes;    // parallel to modes once populated; sums to 1

    const LambMode* find(Symmetry s, int order) const {
        for (const auto& m : modes) {
            if (m.symmetry == s && m.order == order) return &m;
        }
        return nullptr;
    }

    std::optional<double> amplitude(Symmetry s, int order) const {
        for (std::size_t i = 0; i < modes.size() && i < amplitudes.size(); ++i) {
            if (modes[i].symmetry == s && modes[i].order == order) return amplitudes[i];
        }
        return std::nullopt;
    }
};

/// z-directed traction amplitude F(x, y) on the top surface. A Gaussian has
/// unit integral scaled by `amplitude`; a point load is a Dirac of that weight.
struct SurfaceForce {
    enum class Kind { Gaussian, Point };
    Kind kind = Kind::Gaussian;
    double x = 0.0;
    double y = 0.0;
    double radius = 1e-3;   // Gaussian standard deviation (m)
    double amplitude = 1.0;

    static SurfaceForce gaussian(double x, double y, double radius, double amplitude = 1.0) {
        return {Kind::Gaussian, x, y, radius, amplitude};
    }
    static SurfaceForce point(double x, double y, double amplitude = 1.0) {
        return {Kind::Point, x, y, 0.0, amplitude};
    }

    double value(double px, double py) const {
        if (kind == Kind::Point) return 0.0;
        const double r2 = (px - x) * (px - x) + (py - y) * (py - y);
        return amplitude * std::exp(-0.5 * r2 / (radius * radius)) / (two_pi * radius * radius);
    }

    /// Half-width of the square treated as the compact support.
    double support() const { return kind == Kind::Point ? 0.0 : 5.0 * radius; }
};

struct ModeSearchOptions {
    int scan_samples = 4096;
    double k_margin = 0.5;
    double rel_bracket_tol = 1e-12;
    double residual_tol = 1e-9;
};

namespace detail {

// cos(xh), sin(xh)/x and x*sin(xh) for x = sqrt(s); real for either sign of s.
struct BranchTerms {
    double cos_h;
    double sin_over;
    double x_sin;
};

inline BranchTerms branch_terms(double s, double h) {
    if (s > 0.0) {
        const double r = std::sqrt(s);
        return {std::cos(r * h), std::sin(r * h) / r, r * std::sin(r * h)};
    }
    if (s < 0.0) {
        const double r = std::sqrt(-s);
        return {std::cosh(r * h), std::sinh(r * h) / r, -r * std::sinh(r * h)};
    }
    return {1.0, h, 0.0};
}

}  // namespace detail

/// The two terms of the Rayleigh-Lamb characteristic with denominators
/// cleared and the odd factor divided out, so both are real and pole-free:
///   S: (q^2-k^2)^2 sin(qh)/q cos(ph) + 4k^2 p sin(ph) cos(qh)
///   A: (q^2-k^2)^2 sin(ph)/p cos(qh) + 4k^2 q sin(qh) cos(ph)
/// with p^2 = w^2/cL^2 - k^2, q^2 = w^2/cT^2 - k^2.
struct CharacteristicTerms {
    double first;
    double second;

    double value() const { return first + second; }
    double normalized_residual() const {
        const double scale = std::max(std::abs(first), std::abs(second));
        return scale > 0.0 ? std::abs(first + second) / scale : 0.0;
    }
};

inline CharacteristicTerms characteristic_terms(const Material& mat, Symmetry sym, double omega, double h,
                                                double k) {
    const double w2 = omega * omega;
    const double cl = mat.cL(), ct = mat.cT();
    const double k2 = k * k;
    const double p2 = w2 / (cl * cl) - k2;
    const double q2 = w2 / (ct * ct) - k2;
    const auto p = detail::branch_terms(p2, h);
    const auto q = detail::branch_terms(q2, h);
    const double a = (q2 - k2) * (q2 - k2);
    if (sym == Symmetry::S) return {a * q.sin_over * p.cos_h, 4.0 * k2 * p.x_sin * q.cos_h};
    return {a * p.sin_over * q.cos_h, 4.0 * k2 * q.x_sin * p.cos_h};
}

inline double dispersion_residual(const Material& mat, const LambMode& m) {
    return characteristic_terms(mat, m.symmetry, m.omega, m.half_thickness, m.k).normalized_residual();
}

/// Upper end of the wavenumber scan. The slowest propagating mode is A0,
/// bounded above by both the Rayleigh speed and the Kirchhoff flexural speed.
inline double scan_k_max(const Material& mat, double omega, double h, double margin) {
    const double thickness = 2.0 * h;
    const double D = mat.E0() * thickness * thickness * thickness / (12.0 * (1.0 - mat.nu() * mat.nu()));
    const double c_flex = std::sqrt(omega) * std::pow(D / (mat.rho() * thickness), 0.25);
    const double c_min = std::min(mat.c_rayleigh_estimate(), c_flex);
    return (1.0 + margin) * omega / c_min;
}

namespace detail {

inline double refine_root(const Material& mat, Symmetry sym, double omega, double h, double a, double b,
                          const ModeSearchOptions& opt) {
    auto f = [&](double k) { return characteristic_terms(mat, sym, omega, h, k).value(); };
    double fa = f(a);
    for (int it = 0; it < 400; ++it) {
        const double m = 0.5 * (a + b);
        if (m <= a || m >= b) break;
        const double fm = f(m);
        if (fm == 0.0) return m;
        if ((fm < 0.0) == (fa < 0.0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
        if (b - a <= opt.rel_bracket_tol * b) {
            const double mid = 0.5 * (a + b);
            if (characteristic_terms(mat, sym, omega, h, mid).normalized_residual() < 0.1 * opt.residual_tol) {
                return mid;
            }
        }
    }
    // Bracket collapsed to adjacent doubles: keep the best of the three.
    double best = a, best_r = characteristic_terms(mat, sym, omega, h, a).normalized_residual();
    for (double c : {0.5 * (a + b), b}) {
        const double r = characteristic_terms(mat, sym, omega, h, c).normalized_residual();
        if (r < best_r) {
            best = c;
            best_r = r;
        }
    }
    if (best_r >= opt.residual_tol) {
        throw ConvergenceFailure("root near k = " + std::to_string(best) + " has residual " +
                                 std::to_string(best_r));
    }
    return best;
}

// Sign-change roots of one family in (0, k_max], descending. Intervals
// where |F| dips without changing sign are resampled so near-degenerate
// root pairs (close to zero-group-velocity points) are not skipped.
inline std::vector<double> family_roots(const Material& mat, Symmetry sym, double omega, double h,
                                        const ModeSearchOptions& opt) {
    const double k_max = scan_k_max(mat, omega, h, opt.k_margin);
    const int n = opt.scan_samples;
    auto f = [&](double k) { return characteristic_terms(mat, sym, omega, h, k).value(); };

    std::vector<double> ks(n + 1), fs(n + 1);
    for (int i = 0; i <= n; ++i) {
        ks[i] = k_max * (static_cast<double>(i) + (i == 0 ? 1e-6 : 0.0)) / n;
        fs[i] = f(ks[i]);
    }

    std::vector<std::pair<double, double>> brackets;
    auto scan_dip = [&](auto&& self, double lo, double hi, int depth) -> void {
        constexpr int sub = 64;
        const double f_lo = f(lo);
        std::vector<double> sk(sub + 1), sf(sub + 1);
        for (int s = 0; s <= sub; ++s) {
            sk[s] = lo + (hi - lo) * s / sub;
            sf[s] = s == 0 ? f_lo : f(sk[s]);
        }
        for (int s = 1; s <= sub; ++s) {
            if ((sf[s] < 0.0) != (sf[s - 1] < 0.0)) brackets.emplace_back(sk[s - 1], sk[s]);
        }
        if (depth == 0) return;
        for (int s = 1; s < sub; ++s) {
            const bool same = (sf[s - 1] < 0.0) == (sf[s] < 0.0) && (sf[s] < 0.0) == (sf[s + 1] < 0.0);
            if (same && std::abs(sf[s]) < std::abs(sf[s - 1]) && std::abs(sf[s]) < std::abs(sf[s + 1])) {
                self(self, sk[s - 1], sk[s + 1], depth - 1);
            }
        }
    };

    for (int i = 1; i <= n; ++i) {
        if ((fs[i] < 0.0) != (fs[i - 1] < 0.0)) brackets.emplace_back(ks[i - 1], ks[i]);
    }
    for (int i = 1; i < n; ++i) {
        const bool same = (fs[i - 1] < 0.0) == (fs[i] < 0.0) && (fs[i] < 0.0) == (fs[i + 1] < 0.0);
        if (same && std::abs(fs[i]) < std::abs(fs[i - 1]) && std::abs(fs[i]) < std::abs(fs[i + 1])) {
            scan_dip(scan_dip, ks[i - 1], ks[i + 1], 2);
        }
    }

    std::vector<double> roots;
    roots.reserve(brackets.size());
    for (auto [a, b] : brackets) roots.push_back(refine_root(mat, sym, omega, h, a, b, opt));
    std::sort(roots.begin(), roots.end(), std::greater<>());
    // A dip resample can re-find a root bracketed by the coarse scan.
    roots.erase(std::unique(roots.begin(), roots.end(),
                            [&](double x, double y) { return std::abs(x - y) <= 1e-9 * std::max(x, y); }),
                roots.end());
    return roots;
}

inline void check_frequency(double omega, double h) {
    if (!(omega > 0.0) || !std::isfinite(omega)) throw InvalidFrequency("omega must be positive");
    if (!(h > 0.0)) throw InvalidArgument("half thickness must be positive");
}

inline std::optional<double> branch_k(const Material& mat, Symmetry sym, int order, double omega, double h,
                                      const ModeSearchOptions& opt) {
    const auto roots = family_roots(mat, sym, omega, h, opt);
    if (order < 0 || static_cast<std::size_t>(order) >= roots.size()) return std::nullopt;
    return roots[order];
}

// dw/dk = -F_k / F_w by implicit differentiation; used only where the
// central difference straddles a cut-on.
inline double implicit_group_velocity(const Material& mat, Symmetry sym, double omega, double h, double k) {
    const double dk = 1e-6 * k, dw = 1e-6 * omega;
    auto f = [&](double w, double kk) { return characteristic_terms(mat, sym, w, h, kk).value(); };
    const double fk = (f(omega, k + dk) - f(omega, k - dk)) / (2.0 * dk);
    const double fw = (f(omega + dw, k) - f(omega - dw, k)) / (2.0 * dw);
    return -fk / fw;
}

}  // namespace detail

/// Group velocity dw/dk of mode (sym, order) by a central difference in
/// frequency: 2*dw / (k(w+dw) - k(w-dw)).
inline double group_velocity(const Material& mat, Symmetry sym, int order, double omega, double h,
                             double delta_omega, const ModeSearchOptions& opt = {}) {
    detail::check_frequency(omega, h);
    if (!(delta_omega > 0.0) || delta_omega >= omega) throw InvalidArgument("need 0 < delta_omega < omega");
    const auto kp = detail::branch_k(mat, sym, order, omega + delta_omega, h, opt);
    const auto km = detail::branch_k(mat, sym, order, omega - delta_omega, h, opt);
    if (!kp || !km) {
        throw ModeCutoff(std::string(1, symmetry_char(sym)) + std::to_string(order) +
                         " does not propagate at a perturbed frequency");
    }
    return 2.0 * delta_omega / (*kp - *km);
}

/// Every real propagating root for both symmetry families, orders
/// 0 .. max_order-1 in each, sorted by descending wavenumber.
inline std::vector<LambMode> find_modes(const Material& mat, double omega, double h, int max_order = 5,
                                        const ModeSearchOptions& opt = {}) {
    detail::check_frequency(omega, h);
    std::vector<LambMode> modes;
    for (Symmetry sym : {Symmetry::A, Symmetry::S}) {
        const auto roots = detail::family_roots(mat, sym, omega, h, opt);
        for (std::size_t n = 0; n < roots.size() && static_cast<int>(n) < max_order; ++n) {
            LambMode m;
            m.symmetry = sym;
            m.order = static_cast<int>(n);
            m.omega = omega;
            m.half_thickness = h;
            m.k = roots[n];
            m.vp = omega / m.k;
            try {
                m.vg = group_velocity(mat, sym, m.order, omega, h, 1e-5 * omega, opt);
            } catch (const ModeCutoff&) {
                m.vg = detail::implicit_group_velocity(mat, sym, omega, h, m.k);
            }
            modes.push_back(m);
        }
    }
    std::sort(modes.begin(), modes.end(), [](const LambMode& a, const LambMode& b) { return a.k > b.k; });
    return modes;
}

inline DispersionTable make_dispersion_table(const Material& mat, double omega, double h, int max_order = 5) {
    DispersionTable t{mat, omega, h, find_modes(mat, omega, h, max_order), {}};
    return t;
}

namespace detail {

struct ShapeCoefficients {
    complex a;   // dilatational potential amplitude
    complex b;   // shear potential amplitude
};

// Potential amplitudes from either traction row; at a root both rows are
// consistent, so take the better-conditioned one.
inline ShapeCoefficients shape_coefficients(Symmetry sym, double k, complex p, complex q, double h) {
    const complex i(0.0, 1.0);
    const complex kq = complex(k * k) - q * q;
    ShapeCoefficients shear, normal;
    if (sym == Symmetry::S) {
        shear = {kq * std::sin(q * h), 2.0 * i * k * p * std::sin(p * h)};
        normal = {-2.0 * i * k * q * std::cos(q * h), -kq * std::cos(p * h)};
    } else {
        shear = {kq * std::cos(q * h), -2.0 * i * k * p * std::cos(p * h)};
        normal = {2.0 * i * k * q * std::sin(q * h), -kq * std::sin(p * h)};
    }
    auto norm = [](const ShapeCoefficients& c) { return std::norm(c.a) + std::norm(c.b); };
    return norm(shear) >= norm(normal) ? shear : normal;
}

inline std::pair<complex, complex> shape_at(Symmetry sym, double k, complex p, complex q,
                                            const ShapeCoefficients& c, double z) {
    const complex i(0.0, 1.0);
    if (sym == Symmetry::S) {
        // phi = a cos(pz), psi = b sin(qz)
        return {i * k * c.a * std::cos(p * z) + q * c.b * std::cos(q * z),
                -p * c.a * std::sin(p * z) - i * k * c.b * std::sin(q * z)};
    }
    // phi = a sin(pz), psi = b cos(qz)
    return {i * k * c.a * std::sin(p * z) - q * c.b * std::sin(q * z),
            p * c.a * std::cos(p * z) - i * k * c.b * std::cos(q * z)};
}

}  // namespace detail

/// Displacement profile of `mode` sampled at nz points across [-h, h].
inline ModeShape mode_shape(const Material& mat, const LambMode& mode, int nz) {
    if (nz < 3) throw InvalidArgument("mode_shape needs nz >= 3");
    const double w = mode.omega, k = mode.k, h = mode.half_thickness;
    const complex p = std::sqrt(complex(w * w / (mat.cL() * mat.cL()) - k * k));
    const complex q = std::sqrt(complex(w * w / (mat.cT() * mat.cT()) - k * k));
    const auto coeff = detail::shape_coefficients(mode.symmetry, k, p, q, h);

    ModeShape shape;
    shape.z.resize(nz);
    shape.ux.resize(nz);
    shape.uz.resize(nz);
    double peak = 0.0;
    for (int s = 0; s < nz; ++s) {
        // Exact zero at the midplane and exact mirror pairs for odd/even checks.
        const double z = h * static_cast<double>(2 * s - (nz - 1)) / static_cast<double>(nz - 1);
        const auto [ux, uz] = detail::shape_at(mode.symmetry, k, p, q, coeff, z);
        shape.z[s] = z;
        shape.ux[s] = ux;
        shape.uz[s] = uz;
        peak = std::max(peak, std::sqrt(std::norm(ux) + std::norm(uz)));
    }
    if (peak > 0.0) {
        // Fix the global phase so uz is real where it is largest.
        std::size_t arg = 0;
        for (std::size_t s = 1; s < shape.uz.size(); ++s) {
            if (std::abs(shape.uz[s]) > std::abs(shape.uz[arg])) arg = s;
        }
        const complex phase =
            std::abs(shape.uz[arg]) > 0.0 ? std::conj(shape.uz[arg]) / std::abs(shape.uz[arg]) : complex(1.0);
        for (int s = 0; s < nz; ++s) {
            shape.ux[s] *= phase / peak;
            shape.uz[s] *= phase / peak;
        }
    }
    return shape;
}

namespace detail {

inline double trapezoid(const std::vector<double>& x, const std::vector<double>& f) {
    double acc = 0.0;
    for (std::size_t i = 1; i < x.size(); ++i) acc += 0.5 * (f[i] + f[i - 1]) * (x[i] - x[i - 1]);
    return acc;
}

// |integral of F(x,y) exp(i k x) dx dy| over the support of F, by a
// midpoint rule that is spectrally accurate for the Gaussian profile.
inline double projected_force(const SurfaceForce& force, double k, int n = 201) {
    if (force.kind == SurfaceForce::Kind::Point) return std::abs(force.amplitude);
    const double half = force.support();
    const double d = 2.0 * half / n;
    complex acc = 0.0;
    for (int j = 0; j < n; ++j) {
        const double y = force.y - half + (j + 0.5) * d;
        for (int i = 0; i < n; ++i) {
            const double x = force.x - half + (i + 0.5) * d;
            acc += force.value(x, y) * std::exp(complex(0.0, k * (x - force.x)));
        }
    }
    return std::abs(acc) * d * d;
}

}  // namespace detail

/// Relative prominence of each mode under a z-directed surface load: the
/// load projected onto the surface mode field, weighted by the fraction of
/// through-thickness motion that is out-of-plane. Amplitudes sum to one.
inline DispersionTable amplitude_projection(DispersionTable table, const SurfaceForce& force, int nz = 201) {
    if (table.modes.empty()) throw InvalidArgument("amplitude_projection needs at least one mode");
    std::vector<double> raw(table.modes.size());
    for (std::size_t m = 0; m < table.modes.size(); ++m) {
        const auto shape = mode_shape(table.material, table.modes[m], nz);
        std::vector<double> uz_abs(nz), total_abs(nz);
        for (int s = 0; s < nz; ++s) {
            uz_abs[s] = std::abs(shape.uz[s]);
            total_abs[s] = std::sqrt(std::norm(shape.ux[s]) + std::norm(shape.uz[s]));
        }
        const double polarity = detail::trapezoid(shape.z, uz_abs) / detail::trapezoid(shape.z, total_abs);
        // The load acts on the top face z = +h.
        const double surface_uz = std::abs(shape.uz.back());
        raw[m] = detail::projected_force(force, table.modes[m].k) * surface_uz * polarity;
    }
    double total = 0.0;
    for (double r : raw) total += r;
    if (!(total > 0.0)) throw DegenerateForce("force has zero projection on every mode");
    table.amplitudes.resize(raw.size());
    for (std::size_t m = 0; m < raw.size(); ++m) table.amplitudes[m] = raw[m] / total;
    return table;
}

}  // namespace weldwave
