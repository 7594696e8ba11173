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

#include "weldwave/fem/helmholtz.hpp"
#include "weldwave/nl/elastic3d.hpp"
#include "weldwave/wavefield/wavefield.hpp"

namespace weldwave {

namespace detail {

// Three-point Lagrange stencil around fractional index f on an axis of n
// samples. Exact node hits collapse to a single unit weight.
struct QuadStencil {
    std::size_t first;
    std::array<double, 3> w;
};

inline QuadStencil quad_stencil(double f, std::size_t n) {
    const double r = std::round(f);
    if (std::abs(f - r) < 1e-9) {
        const auto i = static_cast<long>(r);
        QuadStencil s{static_cast<std::size_t>(std::clamp<long>(i - 1, 0, static_cast<long>(n) - 3)), {0.0, 0.0, 0.0}};
        s.w[static_cast<std::size_t>(i) - s.first] = 1.0;
        return s;
    }
    const auto c = static_cast<long>(r);
    const auto first = static_cast<std::size_t>(std::clamp<long>(c - 1, 0, static_cast<long>(n) - 3));
    const double t = f - static_cast<double>(first);
    return {first, {0.5 * (t - 1.0) * (t - 2.0), -t * (t - 2.0), 0.5 * t * (t - 1.0)}};
}

}  // namespace detail

/// Biquadratic interpolation of a uniform grid at the sample points of
/// `target`. Points beyond the source sample hull raise OutOfBounds.
template <typename T>
Grid2D<complex> resample_grid(const Grid2D<T>& src, const Grid2D<double>& target) {
    if (src.nx() < 3 || src.ny() < 3) throw ShapeMismatch("resampling needs at least 3 x 3 source samples");
    Grid2D<complex> out = Grid2D<complex>::like(target);
    const double tol = 1e-9;
    for (std::size_t j = 0; j < target.ny(); ++j) {
        const double fy = (target.y(j) - src.y0()) / src.dy();
        if (fy < -tol || fy > static_cast<double>(src.ny() - 1) + tol) throw OutOfBounds("target row outside the source grid");
        const auto sy = detail::quad_stencil(std::clamp(fy, 0.0, static_cast<double>(src.ny() - 1)), src.ny());
        for (std::size_t i = 0; i < target.nx(); ++i) {
            const double fx = (target.x(i) - src.x0()) / src.dx();
            if (fx < -tol || fx > static_cast<double>(src.nx() - 1) + tol) {
                throw OutOfBounds("target column outside the source grid");
            }
            const auto sx = detail::quad_stencil(std::clamp(fx, 0.0, static_cast<double>(src.nx() - 1)), src.nx());
            complex v = 0.0;
            for (int b = 0; b < 3; ++b) {
                if (sy.w[b] == 0.0) continue;
                complex row = 0.0;
                for (int a = 0; a < 3; ++a) {
                    if (sx.w[a] != 0.0) row += sx.w[a] * complex(src(sx.first + a, sy.first + b));
                }
                v += sy.w[b] * row;
            }
            out(i, j) = v;
        }
    }
    return out;
}

/// Samples an effective-medium solution on `geometry` using its quadratic
/// element basis.
inline WavefieldGrid resample_to_grid(const ComplexField& field, const Grid2D<double>& geometry) {
    WavefieldGrid w{field.to_grid(geometry), field.omega, Provenance::EM};
    return w;
}

/// Cell-centred nx x ny grid over the physical region of the mesh.
inline WavefieldGrid resample_to_grid(const ComplexField& field, std::size_t nx, std::size_t ny) {
    const auto& d = field.mesh->domain;
    return resample_to_grid(field, cell_centred_grid<double>(d.Lx, d.Ly, nx, ny));
}

/// Top-surface u_z of an elastic solution interpolated onto `geometry`.
inline WavefieldGrid resample_to_grid(const ElasticField& field, const Grid2D<double>& geometry) {
    return {resample_grid(extract_physical_surface(field), geometry), field.omega, Provenance::NL};
}

inline WavefieldGrid resample_to_grid(const ElasticField& field, std::size_t nx, std::size_t ny) {
    const auto& d = field.mesh->domain;
    return resample_to_grid(field, cell_centred_grid<double>(d.Lx, d.Ly, nx, ny));
}

}  // namespace weldwave
