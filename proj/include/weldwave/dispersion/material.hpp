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
#include <fstream>
#include <string>

#include <json.hpp>

#include "weldwave/core/error.hpp"

namespace weldwave {

/// Isotropic linear-elastic plate material.
class Material {
public:
    static constexpr int format_version = 1;

    Material(double E0, double nu, double rho, std::string name = "custom")
        : E0_(E0), nu_(nu), rho_(rho), name_(std::move(name)) {
        if (!(E0 > 0.0) || !(rho > 0.0) || !(nu > 0.0 && nu < 0.5)) {
            throw InvalidMaterial("need E0 > 0, rho > 0, 0 < nu < 0.5");
        }
    }

    double E0() const noexcept { return E0_; }
    double nu() const noexcept { return nu_; }
    double rho() const noexcept { return rho_; }
    const std::string& name() const noexcept { return name_; }

    double lambda() const noexcept { return lame_lambda(E0_, nu_); }
    double mu() const noexcept { return lame_mu(E0_, nu_); }
    double cL() const noexcept { return std::sqrt((lambda() + 2.0 * mu()) / rho_); }
    double cT() const noexcept { return std::sqrt(mu() / rho_); }
    /// Thin-plate (S0, low frequency) extensional speed sqrt(E/(rho(1-nu^2))).
    double c_plate() const noexcept { return std::sqrt(E0_ / (rho_ * (1.0 - nu_ * nu_))); }
    /// Viktorov's approximation to the Rayleigh speed.
    double c_rayleigh_estimate() const noexcept { return cT() * (0.862 + 1.14 * nu_) / (1.0 + nu_); }

    static double lame_lambda(double E, double nu) noexcept { return E * nu / ((1.0 + nu) * (1.0 - 2.0 * nu)); }
    static double lame_mu(double E, double nu) noexcept { return E / (2.0 * (1.0 + nu)); }

    nlohmann::json to_json() const {
        return {{"format_version", format_version}, {"name", name_}, {"E0_pa", E0_}, {"nu", nu_}, {"rho_kg_m3", rho_}};
    }

    static Material from_json(const nlohmann::json& j) {
        const int version = j.value("format_version", 0);
        if (version != format_version) {
            throw InvalidMaterial("unsupported material format_version " + std::to_string(version));
        }
        return Material(j.at("E0_pa").get<double>(), j.at("nu").get<double>(), j.at("rho_kg_m3").get<double>(),
                        j.value("name", std::string("custom")));
    }

    static Material load(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw InvalidMaterial("cannot open material file " + path);
        nlohmann::json j;
        try {
            in >> j;
        } catch (const nlohmann::json::exception& e) {
            throw InvalidMaterial(path + ": " + e.what());
        }
        return from_json(j);
    }

private:
    double E0_;
    double nu_;
    double rho_;
    std::string name_;
};

/// Default plate material. Typical structural steel; not a calibrated value.
inline Material steel_like() { return Material(200.0e9, 0.29, 7850.0, "steel-like"); }

}  // namespace weldwave
