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

#include <bit>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "weldwave/wavefield/wavefield.hpp"

namespace weldwave {

/// JSON sidecar describing a measured amplitude/phase pair.
struct ScanMetadata {
    std::size_t nx = 0;
    std::size_t ny = 0;
    double dx = 0.0;       ///< in `units`
    double dy = 0.0;
    double freq_hz = 0.0;
    std::string units = "m";

    double metres_per_unit() const {
        if (units == "m") return 1.0;
        if (units == "mm") return 1e-3;
        if (units == "in") return units::metres_per_inch;
        throw InvalidArgument("unsupported length unit '" + units + "'");
    }

    void validate() const {
        if (nx == 0 || ny == 0) throw ShapeMismatch("scan metadata needs nx and ny");
        if (!(dx > 0.0 && dy > 0.0)) throw InvalidArgument("scan spacing must be positive");
        if (!(freq_hz > 0.0)) throw InvalidFrequency("scan frequency must be positive");
        (void)metres_per_unit();
    }
};

inline void to_json(nlohmann::json& j, const ScanMetadata& m) {
    j = {{"nx", m.nx}, {"ny", m.ny}, {"dx", m.dx}, {"dy", m.dy}, {"freq_hz", m.freq_hz}, {"units", m.units}};
}

inline void from_json(const nlohmann::json& j, ScanMetadata& m) {
    m.nx = j.value("nx", std::size_t{0});
    m.ny = j.value("ny", std::size_t{0});
    j.at("dx").get_to(m.dx);
    j.at("dy").get_to(m.dy);
    j.at("freq_hz").get_to(m.freq_hz);
    m.units = j.value("units", std::string("m"));
}

/// A exp(i theta) on a cell-centred grid with origin at the scan corner.
inline WavefieldGrid import_scan(const Grid2D<double>& amplitude, const Grid2D<double>& phase, const ScanMetadata& meta) {
    if (!amplitude.same_shape(phase)) throw ShapeMismatch("amplitude and phase grids differ in shape");
    const double dx = meta.dx * meta.metres_per_unit(), dy = meta.dy * meta.metres_per_unit();
    if (!(dx > 0.0 && dy > 0.0)) throw InvalidArgument("scan spacing must be positive");
    if (!(meta.freq_hz > 0.0)) throw InvalidFrequency("scan frequency must be positive");
    WavefieldGrid w{Grid2D<complex>(amplitude.nx(), amplitude.ny(), dx, dy, 0.5 * dx, 0.5 * dy), units::angular(meta.freq_hz),
                    Provenance::Scan};
    for (std::size_t k = 0; k < amplitude.size(); ++k) w.values[k] = std::polar(amplitude[k], phase[k]);
    return w;
}

/// Centred sub-window of roughly width x height metres (whole samples).
inline WavefieldGrid crop_centered(const WavefieldGrid& g, double width, double height) {
    const auto cx = static_cast<std::size_t>(std::lround(width / g.dx()));
    const auto cy = static_cast<std::size_t>(std::lround(height / g.dy()));
    if (cx == 0 || cy == 0 || cx > g.nx() || cy > g.ny()) throw OutOfBounds("crop window does not fit the scan");
    const std::size_t i0 = (g.nx() - cx) / 2, j0 = (g.ny() - cy) / 2;
    WavefieldGrid out{Grid2D<complex>(cx, cy, g.dx(), g.dy(), g.values.x(i0), g.values.y(j0)), g.omega, g.provenance};
    for (std::size_t j = 0; j < cy; ++j) {
        for (std::size_t i = 0; i < cx; ++i) out.values(i, j) = g.values(i0 + i, j0 + j);
    }
    return out;
}

/// Raw little-endian float32, row-major with x fastest.
inline Grid2D<double> read_raw_f32(const std::filesystem::path& path, std::size_t nx, std::size_t ny) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidArgument("cannot open " + path.string());
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (bytes.size() != 4 * nx * ny) {
        throw ShapeMismatch(path.string() + " holds " + std::to_string(bytes.size()) + " bytes, expected " +
                            std::to_string(4 * nx * ny));
    }
    Grid2D<double> g(nx, ny, 1.0, 1.0);
    for (std::size_t k = 0; k < nx * ny; ++k) {
        std::uint32_t u = 0;
        for (int b = 0; b < 4; ++b) u |= static_cast<std::uint32_t>(bytes[4 * k + b]) << (8 * b);
        g[k] = static_cast<double>(std::bit_cast<float>(u));
    }
    return g;
}

inline void write_raw_f32(const std::filesystem::path& path, const Grid2D<double>& g) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidArgument("cannot write " + path.string());
    for (double v : g.values()) {
        const auto u = std::bit_cast<std::uint32_t>(static_cast<float>(v));
        const char b[4] = {static_cast<char>(u & 0xff), static_cast<char>((u >> 8) & 0xff),
                           static_cast<char>((u >> 16) & 0xff), static_cast<char>((u >> 24) & 0xff)};
        out.write(b, 4);
    }
}

/// Comma or whitespace separated rows; one row per y sample.
inline Grid2D<double> read_csv_grid(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot open " + path.string());
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        for (char& c : line) {
            if (c == ',' || c == ';' || c == '\t') c = ' ';
        }
        std::istringstream ss(line);
        std::vector<double> row;
        double v;
        while (ss >> v) row.push_back(v);
        if (!ss.eof()) throw CorruptFile("non-numeric entry in " + path.string());
        if (!row.empty()) rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ShapeMismatch(path.string() + " is empty");
    Grid2D<double> g(rows[0].size(), rows.size(), 1.0, 1.0);
    for (std::size_t j = 0; j < rows.size(); ++j) {
        if (rows[j].size() != g.nx()) throw ShapeMismatch("ragged rows in " + path.string());
        for (std::size_t i = 0; i < g.nx(); ++i) g(i, j) = rows[j][i];
    }
    return g;
}

inline ScanMetadata read_scan_metadata(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot open " + path.string());
    return nlohmann::json::parse(in).get<ScanMetadata>();
}

/// Loads amplitude and phase (.csv or raw float32) with their sidecar.
inline WavefieldGrid import_scan_files(const std::filesystem::path& amplitude, const std::filesystem::path& phase,
                                       const std::filesystem::path& metadata) {
    ScanMetadata meta = read_scan_metadata(metadata);
    auto load = [&](const std::filesystem::path& p) {
        if (p.extension() == ".csv" || p.extension() == ".txt") return read_csv_grid(p);
        meta.validate();
        return read_raw_f32(p, meta.nx, meta.ny);
    };
    const auto A = load(amplitude), theta = load(phase);
    if ((meta.nx && A.nx() != meta.nx) || (meta.ny && A.ny() != meta.ny)) {
        throw ShapeMismatch("grid shape disagrees with the metadata");
    }
    return import_scan(A, theta, meta);
}

/// Writes |phi| and arg(phi) as raw float32 plus a sidecar in metres.
inline void export_scan_files(const WavefieldGrid& g, const std::filesystem::path& amplitude,
                              const std::filesystem::path& phase, const std::filesystem::path& metadata) {
    Grid2D<double> A = Grid2D<double>::like(g.values), theta = Grid2D<double>::like(g.values);
    for (std::size_t k = 0; k < g.values.size(); ++k) {
        A[k] = std::abs(g.values[k]);
        theta[k] = std::arg(g.values[k]);
    }
    write_raw_f32(amplitude, A);
    write_raw_f32(phase, theta);
    const ScanMetadata meta{g.nx(), g.ny(), g.dx(), g.dy(), units::hertz(g.omega), "m"};
    std::ofstream out(metadata);
    if (!out) throw InvalidArgument("cannot write " + metadata.string());
    out << nlohmann::json(meta).dump(2) << '\n';
}

}  // namespace weldwave
