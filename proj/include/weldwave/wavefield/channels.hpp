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
#include <string>

#include "weldwave/dispersion/lamb.hpp"
#include "weldwave/wavefield/filter.hpp"

namespace weldwave {

inline constexpr std::size_t channel_count = 9;

inline const std::array<std::string, channel_count>& channel_names() {
    static const std::array<std::string, channel_count> names{"re", "im", "abs", "re_A0", "im_A0", "abs_A0",
                                                              "re_S0", "im_S0", "abs_S0"};
    return names;
}

/// Network input: full, A0-filtered and S0-filtered field, each split into
/// real, imaginary and magnitude planes.
struct ChannelStack {
    std::array<Grid2D<float>, channel_count> channels;
    /// Peak |phi| the field was divided by; 0 for an all-zero field.
    double scale = 0.0;

    std::size_t nx() const noexcept { return channels[0].nx(); }
    std::size_t ny() const noexcept { return channels[0].ny(); }
};

namespace detail {

inline void split_into(const Grid2D<complex>& g, double inv_scale, ChannelStack& s, std::size_t first) {
    for (std::size_t c = 0; c < 3; ++c) s.channels[first + c] = Grid2D<float>::like(g);
    for (std::size_t k = 0; k < g.size(); ++k) {
        const auto re = static_cast<float>(g[k].real() * inv_scale);
        const auto im = static_cast<float>(g[k].imag() * inv_scale);
        s.channels[first][k] = re;
        s.channels[first + 1][k] = im;
        s.channels[first + 2][k] = std::sqrt(re * re + im * im);
    }
}

}  // namespace detail

inline ChannelStack build_channel_stack(const WavefieldGrid& grid, const DispersionTable& table) {
    if (std::abs(table.omega - grid.omega) > 1e-9 * std::max(1.0, grid.omega)) {
        throw InvalidFrequency("dispersion table and wavefield frequencies differ");
    }
    for (const char* label : {"A0", "S0"}) {
        bool found = false;
        for (const auto& m : table.modes) found = found || m.label() == label;
        if (!found) throw MissingMode(std::string(label) + " is not in the dispersion table");
    }
    ChannelStack s;
    for (const complex& v : grid.values.values()) s.scale = std::max(s.scale, std::abs(v));
    const double inv = s.scale > 0.0 ? 1.0 / s.scale : 0.0;
    detail::split_into(grid.values, inv, s, 0);
    if (s.scale == 0.0) {
        for (std::size_t c = 3; c < channel_count; ++c) s.channels[c] = Grid2D<float>::like(grid.values);
        return s;
    }
    detail::split_into(mode_filter(grid, table, "A0").values, inv, s, 3);
    detail::split_into(mode_filter(grid, table, "S0").values, inv, s, 6);
    return s;
}

}  // namespace weldwave
