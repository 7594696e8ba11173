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

#include <complex>
#include <numbers>

// Everything inside the library is SI. Conversions happen at the edges
// (CLI flags, scan sidecars).
namespace weldwave {

using complex = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

namespace units {

inline constexpr double metres_per_inch = 0.0254;

constexpr double inches(double v) { return v * metres_per_inch; }
constexpr double to_inches(double metres) { return metres / metres_per_inch; }
constexpr double khz(double v) { return v * 1.0e3; }
constexpr double angular(double hz) { return two_pi * hz; }
constexpr double hertz(double omega) { return omega / two_pi; }

}  // namespace units
}  // namespace weldwave
