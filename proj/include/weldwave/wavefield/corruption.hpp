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
#include <numeric>
#include <vector>

#include <json.hpp>

#include "weldwave/core/rng.hpp"
#include "weldwave/wavefield/wavefield.hpp"

namespace weldwave {

enum class NoiseScaleRule { StdOfMagnitude, VarianceOfMagnitude };
enum class MaskMode { Random, Always, Never };

struct CorruptionSpec {
    double level_mean = 1.0;      ///< mean of the per-call level factor
    double level_sd = 0.5;
    double base_fraction = 0.5;   ///< sigma = fraction x statistic of |phi|
    NoiseScaleRule rule = NoiseScaleRule::StdOfMagnitude;
    double speckle_sigma_cells = 2.0;
    bool speckle = true;
    double drop_fraction = 0.25;
    double mask_probability = 0.5;
    MaskMode mask = MaskMode::Random;

    void validate() const {
        if (!(drop_fraction >= 0.0 && drop_fraction <= 1.0)) throw InvalidArgument("drop fraction must lie in [0, 1]");
        if (!(mask_probability >= 0.0 && mask_probability <= 1.0)) throw InvalidArgument("mask probability must lie in [0, 1]");
        if (!(level_sd >= 0.0) || !(base_fraction >= 0.0)) throw InvalidArgument("noise parameters must be non-negative");
    }

    /// No noise and no mask.
    static CorruptionSpec identity() {
        CorruptionSpec s;
        s.base_fraction = 0.0;
        s.mask = MaskMode::Never;
        return s;
    }
};

/// What one call actually drew.
struct CorruptionRecord {
    double level = 0.0;
    double sigma = 0.0;
    bool masked = false;
    std::size_t dropped = 0;
};

inline void to_json(nlohmann::json& j, const CorruptionRecord& r) {
    j = {{"level", r.level}, {"sigma", r.sigma}, {"masked", r.masked}, {"dropped", r.dropped}};
}

/// Zero-mean, unit-variance field: squared Gaussian-smoothed white noise.
inline Grid2D<double> speckle_field(std::size_t nx, std::size_t ny, double sigma_cells, RandomStream& rng) {
    Grid2D<double> g(nx, ny, 1.0, 1.0);
    for (double& v : g.values()) v = rng.normal();
    g = gaussian_smooth(std::move(g), sigma_cells);
    double mean = 0.0;
    for (double& v : g.values()) {
        v *= v;
        mean += v;
    }
    mean /= static_cast<double>(g.size());
    double var = 0.0;
    for (double& v : g.values()) {
        v -= mean;
        var += v * v;
    }
    var /= static_cast<double>(g.size());
    const double inv = var > 0.0 ? 1.0 / std::sqrt(var) : 0.0;
    for (double& v : g.values()) v *= inv;
    return g;
}

inline double noise_scale(const Grid2D<complex>& g, const CorruptionSpec& spec) {
    double mean = 0.0, sq = 0.0;
    for (const complex& v : g.values()) {
        const double a = std::abs(v);
        mean += a;
        sq += a * a;
    }
    const auto n = static_cast<double>(g.size());
    mean /= n;
    const double var = std::max(0.0, sq / n - mean * mean);
    return spec.base_fraction * (spec.rule == NoiseScaleRule::StdOfMagnitude ? std::sqrt(var) : var);
}

/// Noisy, speckled and possibly masked copy of `grid`. Complex noise has
/// E|n|^2 = (level sigma)^2; masked pixels are set to zero.
inline WavefieldGrid synth_corrupt(const WavefieldGrid& grid, const CorruptionSpec& spec, RandomStream& rng,
                                   CorruptionRecord* record = nullptr) {
    spec.validate();
    CorruptionRecord rec;
    WavefieldGrid out = grid;
    rec.level = std::max(0.0, rng.normal(spec.level_mean, spec.level_sd));
    rec.sigma = noise_scale(grid.values, spec);
    const double amp = rec.level * rec.sigma;
    if (amp > 0.0) {
        const double per_part = amp / std::sqrt(2.0);
        for (complex& v : out.values.values()) v += complex(per_part * rng.normal(), per_part * rng.normal());
        if (spec.speckle) {
            const auto s = speckle_field(grid.nx(), grid.ny(), spec.speckle_sigma_cells, rng);
            for (std::size_t k = 0; k < s.size(); ++k) out.values[k] += amp * s[k];
        }
    }
    const bool draw = rng.bernoulli(spec.mask_probability);
    rec.masked = spec.mask == MaskMode::Always || (spec.mask == MaskMode::Random && draw);
    if (rec.masked) {
        const std::size_t n = out.values.size();
        rec.dropped = static_cast<std::size_t>(std::floor(spec.drop_fraction * static_cast<double>(n)));
        std::vector<std::size_t> idx(n);
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        for (std::size_t k = 0; k < rec.dropped; ++k) {
            std::swap(idx[k], idx[k + rng.below(n - k)]);
            out.values[idx[k]] = 0.0;
        }
    }
    if (record) *record = rec;
    return out;
}

}  // namespace weldwave
