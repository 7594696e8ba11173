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
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/SparseCore>
#include <umfpack.h>

#include "weldwave/core/error.hpp"

// OpenBLAS threading would make floating-point reductions depend on the
// machine; pin it when the symbol is present.
extern "C" void openblas_set_num_threads(int) __attribute__((weak));

namespace weldwave {

using SparseIndex = SuiteSparse_long;
using ComplexSparse = Eigen::SparseMatrix<std::complex<double>, Eigen::ColMajor, SparseIndex>;
using ComplexVector = Eigen::Matrix<std::complex<double>, Eigen::Dynamic, 1>;

struct FactorStats {
    double rcond = 0.0;
    double seconds_symbolic = 0.0;
    double seconds_numeric = 0.0;
    double lu_nonzeros = 0.0;
};

struct LUOptions {
    /// Factorization is rejected when the reciprocal condition estimate
    /// drops below this.
    double min_rcond = 1e-14;
    bool nested_dissection = true;
    bool symmetric_pattern = true;
};

/// Direct LU of a square complex sparse matrix (UMFPACK). The factors are
/// reused across solve() calls.
class SparseLU {
public:
    explicit SparseLU(ComplexSparse A, const LUOptions& opt = {}) : n_(A.rows()), A_(std::move(A)) {
        if (A_.rows() != A_.cols()) throw InvalidArgument("SparseLU needs a square matrix");
        if (openblas_set_num_threads) openblas_set_num_threads(1);
        A_.makeCompressed();
        umfpack_zl_defaults(control_);
        if (opt.nested_dissection) control_[UMFPACK_ORDERING] = UMFPACK_ORDERING_METIS;
        if (opt.symmetric_pattern) control_[UMFPACK_STRATEGY] = UMFPACK_STRATEGY_SYMMETRIC;
        const double min_rcond = opt.min_rcond;
        double info[UMFPACK_INFO];
        void* symbolic = nullptr;
        int status = 0;
        {
            // The nested-dissection ordering keeps global random state.
            static std::mutex ordering_mutex;
            const std::lock_guard lock(ordering_mutex);
            status = umfpack_zl_symbolic(n_, n_, A_.outerIndexPtr(), A_.innerIndexPtr(), real_ptr(), nullptr,
                                         &symbolic, control_, info);
        }
        stats_.seconds_symbolic = info[UMFPACK_SYMBOLIC_WALLTIME];
        if (status != UMFPACK_OK) {
            umfpack_zl_free_symbolic(&symbolic);
            throw FactorizationFailure("symbolic analysis failed with status " + std::to_string(status), 0.0);
        }
        void* numeric = nullptr;
        status = umfpack_zl_numeric(A_.outerIndexPtr(), A_.innerIndexPtr(), real_ptr(), nullptr, symbolic, &numeric,
                                    control_, info);
        umfpack_zl_free_symbolic(&symbolic);
        numeric_.reset(numeric);
        stats_.rcond = info[UMFPACK_RCOND];
        stats_.seconds_numeric = info[UMFPACK_NUMERIC_WALLTIME];
        stats_.lu_nonzeros = info[UMFPACK_LNZ] + info[UMFPACK_UNZ];
        if (status == UMFPACK_WARNING_singular_matrix) {
            throw FactorizationFailure("matrix is singular", stats_.rcond);
        }
        if (status != UMFPACK_OK) {
            throw FactorizationFailure("numeric factorization failed with status " + std::to_string(status),
                                       stats_.rcond);
        }
        if (!(stats_.rcond >= min_rcond)) throw FactorizationFailure("matrix is near-singular", stats_.rcond);
    }

    ComplexVector solve(const ComplexVector& b) const {
        if (b.size() != n_) throw ShapeMismatch("right-hand side length differs from the matrix order");
        ComplexVector x(n_);
        double info[UMFPACK_INFO];
        const int status = umfpack_zl_solve(UMFPACK_A, A_.outerIndexPtr(), A_.innerIndexPtr(), real_ptr(), nullptr,
                                            reinterpret_cast<double*>(x.data()), nullptr,
                                            reinterpret_cast<const double*>(b.data()), nullptr, numeric_.get(),
                                            control_, info);
        if (status != UMFPACK_OK) {
            throw FactorizationFailure("solve failed with status " + std::to_string(status), stats_.rcond);
        }
        return x;
    }

    const FactorStats& stats() const noexcept { return stats_; }
    SparseIndex order() const noexcept { return n_; }

private:
    struct NumericDeleter {
        void operator()(void* p) const {
            if (p) umfpack_zl_free_numeric(&p);
        }
    };

    double* real_ptr() const { return const_cast<double*>(reinterpret_cast<const double*>(A_.valuePtr())); }

    SparseIndex n_;
    ComplexSparse A_;
    double control_[UMFPACK_CONTROL];
    std::unique_ptr<void, NumericDeleter> numeric_;
    FactorStats stats_;
};

}  // namespace weldwave
