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
#include <string>
#include <vector>

#include "weldwave/dispersion/lamb.hpp"
#include "weldwave/wavefield/wavefield.hpp"

namespace weldwave {

/// Radial Gaussian passband centred on one wavenumber. The width puts the
/// half-power point midway to the closest neighbouring wavenumber.
struct RadialGaussian {
    double k_center = 0.0;
    double sigma = 0.0;

    static RadialGaussian between(double k_center, const std::vector<double>& neighbors) {
        if (!(k_center > 0.0)) throw InvalidArgument("centre wavenumber must be positive");
        double gap = std::numeric_limits<double>::infinity();
        for (double k : neighbors) {
            if (std::abs(k - k_center) > 0.0) gap = std::min(gap, std::abs(k - k_center));
        }
        if (!std::isfinite(gap)) throw InvalidArgument("mode filter needs a distinct neighbouring wavenumber");
        return {k_center, 0.5 * gap / std::sqrt(std::log(2.0))};
    }

    double gain(double k) const {
        const double d = (k - k_center) / sigma;
        return std::exp(-0.5 * d * d);
    }
};

inline WavefieldGrid apply_radial_filter(const WavefieldGrid& grid, const RadialGaussian& filter) {
    if (!(filter.k_center < pi / std::max(grid.dx(), grid.dy()))) {
        throw Unresolvable("centre wavenumber " + std::to_string(filter.k_center) + " rad/m beyond the grid Nyquist limit");
    }
    Grid2D<complex> spec = fft2(grid.values);
    for (std::size_t j = 0; j < spec.ny(); ++j) {
        const double ky = fft_wavenumber(j, spec.ny(), spec.dy());
        for (std::size_t i = 0; i < spec.nx(); ++i) {
            spec(i, j) *= filter.gain(std::hypot(fft_wavenumber(i, spec.nx(), spec.dx()), ky));
        }
    }
    return {ifft2(std::move(spec)), grid.omega, grid.provenance};
}

inline WavefieldGrid mode_filter(const WavefieldGrid& grid, double k_center, const std::vector<double>& neighbors) {
    return apply_radial_filter(grid, RadialGaussian::between(k_center, neighbors));
}

/// Isolates one tabulated mode, with every other tabulated mode as a
/// neighbour.
inline WavefieldGrid mode_filter(const WavefieldGrid& grid, const DispersionTable& table, const std::string& label) {
    const LambMode* target = nullptr;
    std::vector<double> others;
    for (const auto& m : table.modes) {
        if (m.label() == label) {
            target = &m;
        } else {
            others.push_back(m.k);
        }
    }
    if (!target) throw MissingMode(label + " is not in the dispersion table");
    return mode_filter(grid, target->k, others);
}

}  // namespace weldwave
