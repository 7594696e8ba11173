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

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "weldwave/core/error.hpp"
#include "weldwave/core/grid.hpp"
#include "weldwave/core/units.hpp"

namespace weldwave {

enum class Provenance : std::uint8_t { EM = 0, NL = 1, Scan = 2, Generated = 3 };

inline std::string to_string(Provenance p) {
    switch (p) {
        case Provenance::EM: return "EM";
        case Provenance::NL: return "NL";
        case Provenance::Scan: return "Scan";
        case Provenance::Generated: return "Generated";
    }
    throw InvalidArgument("unknown provenance");
}

inline Provenance parse_provenance(const std::string& s) {
    if (s == "EM" || s == "em") return Provenance::EM;
    if (s == "NL" || s == "nl") return Provenance::NL;
    if (s == "Scan" || s == "scan") return Provenance::Scan;
    if (s == "Generated" || s == "generated") return Provenance::Generated;
    throw InvalidArgument("unknown provenance '" + s + "'");
}

/// Complex out-of-plane field sampled on a uniform grid at one frequency.
struct WavefieldGrid {
    Grid2D<complex> values;
    double omega = 0.0;
    Provenance provenance = Provenance::Generated;

    std::size_t nx() const noexcept { return values.nx(); }
    std::size_t ny() const noexcept { return values.ny(); }
    double dx() const noexcept { return values.dx(); }
    double dy() const noexcept { return values.dy(); }

    void validate() const {
        if (nx() < 8 || ny() < 8) throw ShapeMismatch("wavefield grids need at least 8 x 8 samples");
        if (!(dx() > 0.0 && dy() > 0.0)) throw InvalidArgument("grid spacing must be positive");
        for (const complex& v : values.values()) {
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw InvalidArgument("wavefield holds non-finite values");
        }
    }
};

/// Angular wavenumber (rad/m) of FFT bin `i` on an axis of n samples.
inline double fft_wavenumber(std::size_t i, std::size_t n, double d) {
    const auto s = static_cast<double>(i <= n / 2 ? static_cast<long>(i) : static_cast<long>(i) - static_cast<long>(n));
    return two_pi * s / (static_cast<double>(n) * d);
}

namespace detail {

inline void fft_axes(Grid2D<complex>& g, bool inverse) {
    Eigen::FFT<double> fft;
    const std::size_t nx = g.nx(), ny = g.ny();
    std::vector<complex> in, out;
    in.resize(nx);
    for (std::size_t j = 0; j < ny; ++j) {
        for (std::size_t i = 0; i < nx; ++i) in[i] = g(i, j);
        inverse ? fft.inv(out, in) : fft.fwd(out, in);
        for (std::size_t i = 0; i < nx; ++i) g(i, j) = out[i];
    }
    in.resize(ny);
    for (std::size_t i = 0; i < nx; ++i) {
        for (std::size_t j = 0; j < ny; ++j) in[j] = g(i, j);
        inverse ? fft.inv(out, in) : fft.fwd(out, in);
        for (std::size_t j = 0; j < ny; ++j) g(i, j) = out[j];
    }
}

}  // namespace detail

/// Unnormalised forward transform over both axes.
inline Grid2D<complex> fft2(Grid2D<complex> g) {
    detail::fft_axes(g, false);
    return g;
}

/// Inverse of fft2, carrying the 1/(nx ny) factor.
inline Grid2D<complex> ifft2(Grid2D<complex> g) {
    detail::fft_axes(g, true);
    return g;
}

}  // namespace weldwave
