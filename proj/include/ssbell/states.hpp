// Copyright 2026 The ssbell Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <cmath>
#include <sstream>

#include "ssbell/error.hpp"
#include "ssbell/linalg.hpp"

namespace ssbell {

inline constexpr double kTraceTol = 1e-12;

using Table4 = std::array<std::array<double, 4>, 4>;

/// A validated two-qubit density matrix: Hermitian, unit trace, PSD.
class DensityMatrix {
   public:
    /// Validates `m`; throws NotFinite, NotHermitian, NotUnitTrace or NotPSD.
    static DensityMatrix from_matrix(const Matrix4 &m) {
        if (!m.all_finite()) {
            throw NotFinite("density matrix has a NaN or infinite entry");
        }
        double defect = hermiticity_defect(m);
        if (defect > kHermitianTol) {
            std::ostringstream msg;
            msg << "density matrix is not Hermitian: max |m(i,j) - conj(m(j,i))| = " << defect;
            throw NotHermitian(msg.str());
        }
        Complex tr = m.trace();
        if (std::abs(tr - 1.0) > kTraceTol) {
            std::ostringstream msg;
            msg.precision(17);
            msg << "density matrix trace must be 1, got " << tr.real();
            throw NotUnitTrace(msg.str());
        }
        double lo = min_eigenvalue_hermitian(m);
        if (lo < -kPsdTol) {
            std::ostringstream msg;
            msg << "density matrix is not positive semidefinite: min eigenvalue " << lo;
            throw NotPSD(msg.str());
        }
        return DensityMatrix(m);
    }

    const Matrix4 &matrix() const {
        return m_;
    }

    double purity() const {
        return trace_product(m_, m_).real();
    }

   private:
    explicit DensityMatrix(const Matrix4 &m) : m_(m) {
    }
    Matrix4 m_;
};

enum class BellState { PhiPlus, PhiMinus, PsiPlus, PsiMinus };

namespace detail {
inline Matrix4 projector(const std::array<Complex, 4> &psi) {
    Matrix4 r{};
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 4; ++j) {
            r(i, j) = psi[i] * std::conj(psi[j]);
        }
    }
    return r;
}
}  // namespace detail

inline DensityMatrix bell_state(BellState which) {
    const double h = 1 / std::sqrt(2.0);
    std::array<Complex, 4> psi{};
    switch (which) {
        case BellState::PhiPlus:
            psi = {h, 0, 0, h};
            break;
        case BellState::PhiMinus:
            psi = {h, 0, 0, -h};
            break;
        case BellState::PsiPlus:
            psi = {0, h, h, 0};
            break;
        case BellState::PsiMinus:
            psi = {0, h, -h, 0};
            break;
    }
    return DensityMatrix::from_matrix(detail::projector(psi));
}

/// eta * |Psi-><Psi-| + (1 - eta) * I/4.
inline DensityMatrix werner_state(double eta) {
    if (!(eta >= 0 && eta <= 1)) {
        std::ostringstream msg;
        msg << "werner eta must lie in [0, 1], got " << eta;
        throw OutOfRange(msg.str());
    }
    Matrix4 m = bell_state(BellState::PsiMinus).matrix() * eta + Matrix4::identity() * ((1 - eta) / 4);
    return DensityMatrix::from_matrix(m);
}

/// Builds a density matrix from separate real and imaginary tables.
inline DensityMatrix custom_state(const Table4 &re, const Table4 &im) {
    Matrix4 m{};
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 4; ++j) {
            m(i, j) = Complex(re[i][j], im[i][j]);
        }
    }
    return DensityMatrix::from_matrix(m);
}

inline DensityMatrix custom_state(const Matrix4 &m) {
    return DensityMatrix::from_matrix(m);
}

inline DensityMatrix product_state(const Matrix2 &a, const Matrix2 &b) {
    return DensityMatrix::from_matrix(kron(a, b));
}

/// Transpose on subsystem B.
inline Matrix4 partial_transpose_b(const Matrix4 &m) {
    Matrix4 r{};
    for (std::size_t i = 0; i < 2; ++i) {
        for (std::size_t j = 0; j < 2; ++j) {
            for (std::size_t k = 0; k < 2; ++k) {
                for (std::size_t l = 0; l < 2; ++l) {
                    r(2 * i + k, 2 * j + l) = m(2 * i + l, 2 * j + k);
                }
            }
        }
    }
    return r;
}

}  // namespace ssbell
