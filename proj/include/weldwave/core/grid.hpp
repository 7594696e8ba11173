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
#include <cstddef>
#include <span>
#include <vector>

#include "weldwave/core/error.hpp"

namespace weldwave {

/// Uniform cell-centred 2D grid. Sample (i, j) sits at
/// (x0 + i*dx, y0 + j*dy); storage is row-major with x fastest.
template <typename T>
class Grid2D {
public:
    using value_type = T;

    Grid2D() = default;

    Grid2D(std::size_t nx, std::size_t ny, double dx, double dy, double x0 = 0.0, double y0 = 0.0,
           T fill = T{})
        : nx_(nx), ny_(ny), dx_(dx), dy_(dy), x0_(x0), y0_(y0), data_(nx * ny, fill) {}

    /// Same geometry, different value type.
    template <typename U>
    static Grid2D like(const Grid2D<U>& other, T fill = T{}) {
        return Grid2D(other.nx(), other.ny(), other.dx(), other.dy(), other.x0(), other.y0(), fill);
    }

    std::size_t nx() const noexcept { return nx_; }
    std::size_t ny() const noexcept { return ny_; }
    std::size_t size() const noexcept { return data_.size(); }
    double dx() const noexcept { return dx_; }
    double dy() const noexcept { return dy_; }
    double x0() const noexcept { return x0_; }
    double y0() const noexcept { return y0_; }
    double x(std::size_t i) const noexcept { return x0_ + static_cast<double>(i) * dx_; }
    double y(std::size_t j) const noexcept { return y0_ + static_cast<double>(j) * dy_; }
    /// Extent covered by the samples (first to last sample).
    double width() const noexcept { return static_cast<double>(nx_ - 1) * dx_; }
    double height() const noexcept { return static_cast<double>(ny_ - 1) * dy_; }

    T& operator()(std::size_t i, std::size_t j) { return data_[j * nx_ + i]; }
    const T& operator()(std::size_t i, std::size_t j) const { return data_[j * nx_ + i]; }
    T& operator[](std::size_t k) { return data_[k]; }
    const T& operator[](std::size_t k) const { return data_[k]; }

    std::span<T> values() noexcept { return data_; }
    std::span<const T> values() const noexcept { return data_; }
    std::vector<T>& storage() noexcept { return data_; }
    const std::vector<T>& storage() const noexcept { return data_; }

    template <typename U>
    bool same_shape(const Grid2D<U>& o) const noexcept {
        return nx_ == o.nx() && ny_ == o.ny();
    }

    template <typename U>
    bool same_geometry(const Grid2D<U>& o, double tol = 1e-12) const noexcept {
        return same_shape(o) && std::abs(dx_ - o.dx()) <= tol * dx_ &&
               std::abs(dy_ - o.dy()) <= tol * dy_ && std::abs(x0_ - o.x0()) <= tol * (1.0 + std::abs(x0_)) &&
               std::abs(y0_ - o.y0()) <= tol * (1.0 + std::abs(y0_));
    }

    /// Bilinear interpolation with constant extension outside the grid.
    T sample(double xq, double yq) const {
        const double fx = std::clamp((xq - x0_) / dx_, 0.0, static_cast<double>(nx_ - 1));
        const double fy = std::clamp((yq - y0_) / dy_, 0.0, static_cast<double>(ny_ - 1));
        const std::size_t i0 = std::min(static_cast<std::size_t>(fx), nx_ > 1 ? nx_ - 2 : 0);
        const std::size_t j0 = std::min(static_cast<std::size_t>(fy), ny_ > 1 ? ny_ - 2 : 0);
        const double tx = nx_ > 1 ? fx - static_cast<double>(i0) : 0.0;
        const double ty = ny_ > 1 ? fy - static_cast<double>(j0) : 0.0;
        const std::size_t i1 = nx_ > 1 ? i0 + 1 : i0;
        const std::size_t j1 = ny_ > 1 ? j0 + 1 : j0;
        const T a = (*this)(i0, j0) * (1.0 - tx) + (*this)(i1, j0) * tx;
        const T b = (*this)(i0, j1) * (1.0 - tx) + (*this)(i1, j1) * tx;
        return a * (1.0 - ty) + b * ty;
    }

private:
    std::size_t nx_ = 0;
    std::size_t ny_ = 0;
    double dx_ = 1.0;
    double dy_ = 1.0;
    double x0_ = 0.0;
    double y0_ = 0.0;
    std::vector<T> data_;
};

/// Cell-centred grid of nx*ny cells tiling [0, Lx] x [0, Ly].
template <typename T = double>
Grid2D<T> cell_centred_grid(double Lx, double Ly, std::size_t nx, std::size_t ny, T fill = T{}) {
    if (nx == 0 || ny == 0 || !(Lx > 0.0) || !(Ly > 0.0)) throw InvalidArgument("grid needs positive size");
    const double dx = Lx / static_cast<double>(nx), dy = Ly / static_cast<double>(ny);
    return Grid2D<T>(nx, ny, dx, dy, 0.5 * dx, 0.5 * dy, fill);
}

namespace detail {

inline std::vector<double> gaussian_taps(double sigma_cells) {
    const int half = std::max(1, static_cast<int>(std::ceil(4.0 * sigma_cells)));
    std::vector<double> taps(2 * half + 1);
    for (int k = -half; k <= half; ++k) {
        const double r = static_cast<double>(k) / sigma_cells;
        taps[k + half] = std::exp(-0.5 * r * r);
    }
    return taps;
}

// One separable pass. The kernel is renormalised where it is truncated by the
// boundary so every output is a unit-weight average.
template <typename T>
void smooth_axis(Grid2D<T>& g, double sigma_cells, bool along_x) {
    if (sigma_cells <= 0.0) return;
    const auto taps = gaussian_taps(sigma_cells);
    const int half = static_cast<int>(taps.size() / 2);
    const int n = static_cast<int>(along_x ? g.nx() : g.ny());
    const int lines = static_cast<int>(along_x ? g.ny() : g.nx());
    std::vector<T> line(n), out(n);
    for (int l = 0; l < lines; ++l) {
        for (int a = 0; a < n; ++a) line[a] = along_x ? g(a, l) : g(l, a);
        for (int a = 0; a < n; ++a) {
            T acc{};
            double wsum = 0.0;
            const int lo = std::max(0, a - half), hi = std::min(n - 1, a + half);
            for (int b = lo; b <= hi; ++b) {
                const double w = taps[b - a + half];
                acc += line[b] * w;
                wsum += w;
            }
            out[a] = acc / wsum;
        }
        for (int a = 0; a < n; ++a) (along_x ? g(a, l) : g(l, a)) = out[a];
    }
}

}  // namespace detail

/// Separable Gaussian smoothing with a bandwidth in metres (converted to
/// cells per axis). A non-positive sigma returns the input unchanged.
template <typename T>
Grid2D<T> gaussian_smooth(Grid2D<T> g, double sigma_m) {
    if (sigma_m <= 0.0) return g;
    detail::smooth_axis(g, sigma_m / g.dx(), true);
    detail::smooth_axis(g, sigma_m / g.dy(), false);
    return g;
}

}  // namespace weldwave
