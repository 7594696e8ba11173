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

#include <stdexcept>
#include <string>

namespace weldwave {

// Root of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define WELDWAVE_DEFINE_ERROR(Name)                    \
    class Name : public Error {                        \
    public:                                            \
        explicit Name(const std::string& what)         \
            : Error(std::string(#Name ": ") + what) {} \
    }

// dispersion
WELDWAVE_DEFINE_ERROR(InvalidFrequency);
WELDWAVE_DEFINE_ERROR(ConvergenceFailure);
WELDWAVE_DEFINE_ERROR(ModeCutoff);
WELDWAVE_DEFINE_ERROR(DegenerateForce);
WELDWAVE_DEFINE_ERROR(InvalidMaterial);

// weld geometry
WELDWAVE_DEFINE_ERROR(DomainTooSmall);

// solvers
WELDWAVE_DEFINE_ERROR(MeshTooLarge);
WELDWAVE_DEFINE_ERROR(SingularCoefficient);
WELDWAVE_DEFINE_ERROR(SingularMaterial);
WELDWAVE_DEFINE_ERROR(MeshMismatch);
WELDWAVE_DEFINE_ERROR(InvalidArgument);

// wavefields
WELDWAVE_DEFINE_ERROR(OutOfBounds);
WELDWAVE_DEFINE_ERROR(Unresolvable);
WELDWAVE_DEFINE_ERROR(MissingMode);
WELDWAVE_DEFINE_ERROR(ShapeMismatch);

// persistence
WELDWAVE_DEFINE_ERROR(CorruptFile);

#undef WELDWAVE_DEFINE_ERROR

// Sparse factorization failed or is numerically singular. Carries the
// reciprocal condition estimate reported by the factorization.
class FactorizationFailure : public Error {
public:
    FactorizationFailure(const std::string& what, double rcond)
        : Error("FactorizationFailure: " + what + " (rcond estimate " + std::to_string(rcond) + ")"),
          rcond_(rcond) {}

    double rcond() const noexcept { return rcond_; }

private:
    double rcond_;
};

}  // namespace weldwave
