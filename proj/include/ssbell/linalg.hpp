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

// Dense complex matrices of fixed dimension 2 and 4.
//
// Two-qubit operators use the computational basis ordering
// |00>, |01>, |10>, |11>, i.e. row index 2*i + k for subsystem A index i and
// subsystem B index k. Every matrix literal in the library depends on it.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <sstream>
#include <string>

#include "ssbell/error.hpp"

namespace ssbell {

using Complex = std::complex<double>;

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kPsdTol = 1e-10;
inline constexpr double kJacobiTol = 1e-12;
inline constexpr int kJacobiMaxSweeps = 100;

template <std::size_t N>
struct Matrix {
    static constexpr std::size_t dim = N;
    std::array<Complex, N * N> entries{};

    constexpr Complex &operator()(std::size_t row, std::size_t col) {
        return entries[row * N + col];
    }
    constexpr const Complex &operator()(std::size_t row, std::size_t col) const {
        return entries[row * N + col];
    }

    static constexpr Matrix zero() {
        return Matrix{};
    }
    static constexpr Matrix identity() {
        Matrix m{};
        for (std::size_t i = 0; i < N; ++i) {
            m(i, i) = 1.0;
        }
        return m;
    }
    static constexpr Matrix diagonal(const std::array<double, N> &d) {
        Matrix m{};
        for (std::size_t i = 0; i < N; ++i) {
            m(i, i) = d[i];
        }
        return m;
    }

    Matrix &operator+=(const Matrix &o) {
        for (std::size_t k = 0; k < N * N; ++k) {
            entries[k] += o.entries[k];
        }
        return *this;
    }
    Matrix &operator-=(const Matrix &o) {
        for (std::size_t k = 0; k < N * N; ++k) {
            entries[k] -= o.entries[k];
        }
        return *this;
    }
    Matrix &operator*=(Complex s) {
        for (auto &e : entries) {
            e *= s;
        }
        return *this;
    }

    friend Matrix operator+(Matrix a, const Matrix &b) {
        return a += b;
    }
    friend Matrix operator-(Matrix a, const Matrix &b) {
        return a -= b;
    }
    friend Matrix operator*(Matrix a, Complex s) {
        return a *= s;
    }
    friend Matrix operator*(Complex s, Matrix a) {
        return a *= s;
    }
    friend Matrix operator*(const Matrix &a, const Matrix &b) {
        Matrix r{};
        for (std::size_t i = 0; i < N; ++i) {
            for (std::size_t k = 0; k < N; ++k) {
                Complex aik = a(i, k);
                for (std::size_t j = 0; j < N; ++j) {
                    r(i, j) += aik * b(k, j);
                }
            }
        }
        return r;
    }
    friend bool operator==(const Matrix &, const Matrix &) = default;

    Matrix adjoint() const {
        Matrix r{};
        for (std::size_t i = 0; i < N; ++i) {
            for (std::size_t j = 0; j < N; ++j) {
                r(i, j) = std::conj((*this)(j, i));
            }
        }
        return r;
    }

    Complex trace() const {
        Complex t = 0;
        for (std::size_t i = 0; i < N; ++i) {
            t += (*this)(i, i);
        }
        return t;
    }

    double frobenius_norm() const {
        double s = 0;
        for (const auto &e : entries) {
            s += std::norm(e);
        }
        return std::sqrt(s);
    }

    bool all_finite() const {
        return std::all_of(entries.begin(), entries.end(), [](const Complex &c) {
            return std::isfinite(c.real()) && std::isfinite(c.imag());
        });
    }

    std::string str() const {
        std::ostringstream out;
        out.precision(6);
        out << "[";
        for (std::size_t i = 0; i < N; ++i) {
            out << (i ? ", [" : "[");
            for (std::size_t j = 0; j < N; ++j) {
                out << (j ? ", " : "") << (*this)(i, j);
            }
            out << "]";
        }
        out << "]";
        return out.str();
    }
};

using Matrix2 = Matrix<2>;
using Matrix4 = Matrix<4>;

/// Largest entrywise deviation between two matrices.
template <std::size_t N>
double max_abs_diff(const Matrix<N> &a, const Matrix<N> &b) {
    double m = 0;
    for (std::size_t k = 0; k < N * N; ++k) {
        m = std::max(m, std::abs(a.entries[k] - b.entries[k]));
    }
    return m;
}

namespace pauli {
inline const Matrix2 I = Matrix2::identity();
inline const Matrix2 X = [] {
    Matrix2 m{};
    m(0, 1) = 1.0;
    m(1, 0) = 1.0;
    return m;
}();
inline const Matrix2 Y = [] {
    Matrix2 m{};
    m(0, 1) = Complex(0, -1);
    m(1, 0) = Complex(0, 1);
    return m;
}();
inline const Matrix2 Z = Matrix2::diagonal({1.0, -1.0});
}  // namespace pauli

/// n . sigma for a real 3-vector n.
inline Matrix2 bloch_operator(const std::array<double, 3> &n) {
    return pauli::X * n[0] + pauli::Y * n[1] + pauli::Z * n[2];
}

/// Kronecker product: kron(a, b)(2i+k, 2j+l) = a(i, j) * b(k, l).
inline Matrix4 kron(const Matrix2 &a, const Matrix2 &b) {
    Matrix4 r{};
    for (std::size_t i = 0; i < 2; ++i) {
        for (std::size_t j = 0; j < 2; ++j) {
            for (std::size_t k = 0; k < 2; ++k) {
                for (std::size_t l = 0; l < 2; ++l) {
                    r(2 * i + k, 2 * j + l) = a(i, j) * b(k, l);
                }
            }
        }
    }
    return r;
}

/// tr(a * b) without forming the product.
template <std::size_t N>
Complex trace_product(const Matrix<N> &a, const Matrix<N> &b) {
    Complex t = 0;
    for (std::size_t i = 0; i < N; ++i) {
        for (std::size_t k = 0; k < N; ++k) {
            t += a(i, k) * b(k, i);
        }
    }
    return t;
}

/// Largest |m(i,j) - conj(m(j,i))|.
template <std::size_t N>
double hermiticity_defect(const Matrix<N> &m) {
    double d = 0;
    for (std::size_t i = 0; i < N; ++i) {
        for (std::size_t j = i; j < N; ++j) {
            d = std::max(d, std::abs(m(i, j) - std::conj(m(j, i))));
        }
    }
    return d;
}

template <std::size_t N>
bool is_hermitian(const Matrix<N> &m, double tol = kHermitianTol) {
    return hermiticity_defect(m) <= tol;
}

namespace detail {

template <std::size_t N>
void require_hermitian(const Matrix<N> &m) {
    double defect = hermiticity_defect(m);
    if (!(defect <= kHermitianTol)) {
        std::ostringstream msg;
        msg << "matrix is not Hermitian: max |m(i,j) - conj(m(j,i))| = " << defect << " exceeds "
            << kHermitianTol;
        throw NotHermitian(msg.str());
    }
}

inline std::array<double, 2> eigenvalues_2x2(const Matrix2 &m) {
    double a = m(0, 0).real();
    double d = m(1, 1).real();
    double mean = 0.5 * (a + d);
    double half_gap = std::hypot(0.5 * (a - d), std::abs(m(0, 1)));
    return {mean - half_gap, mean + half_gap};
}

// Cyclic complex Jacobi. Each step removes the phase of a(p,q) with a
// diagonal unitary, then applies a real plane rotation.
inline std::array<double, 4> eigenvalues_4x4(Matrix4 a) {
    double scale = std::max(1.0, a.frobenius_norm());
    auto off_norm = [&a] {
        double s = 0;
        for (std::size_t i = 0; i < 4; ++i) {
            for (std::size_t j = 0; j < 4; ++j) {
                if (i != j) {
                    s += std::norm(a(i, j));
                }
            }
        }
        return std::sqrt(s);
    };
    for (int sweep = 0; sweep < kJacobiMaxSweeps && off_norm() >= kJacobiTol * scale; ++sweep) {
        for (std::size_t p = 0; p < 3; ++p) {
            for (std::size_t q = p + 1; q < 4; ++q) {
                double mag = std::abs(a(p, q));
                if (mag == 0) {
                    continue;
                }
                Complex phase = a(p, q) / mag;
                double app = a(p, p).real();
                double aqq = a(q, q).real();
                double theta = (aqq - app) / (2 * mag);
                double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1));
                double c = 1 / std::sqrt(t * t + 1);
                double s = t * c;
                Matrix4 u = Matrix4::identity();
                u(p, p) = c;
                u(p, q) = s;
                u(q, p) = -s * std::conj(phase);
                u(q, q) = c * std::conj(phase);
                a = u.adjoint() * a * u;
                a(p, q) = 0;
                a(q, p) = 0;
            }
        }
    }
    std::array<double, 4> ev{};
    for (std::size_t i = 0; i < 4; ++i) {
        ev[i] = a(i, i).real();
    }
    std::sort(ev.begin(), ev.end());
    return ev;
}

}  // namespace detail

/// Ascending eigenvalues of a Hermitian matrix. Throws NotHermitian.
template <std::size_t N>
std::array<double, N> eigenvalues_hermitian(const Matrix<N> &m) {
    static_assert(N == 2 || N == 4, "only 2x2 and 4x4 operators are supported");
    detail::require_hermitian(m);
    if constexpr (N == 2) {
        return detail::eigenvalues_2x2(m);
    } else {
        return detail::eigenvalues_4x4(m);
    }
}

template <std::size_t N>
double min_eigenvalue_hermitian(const Matrix<N> &m) {
    return eigenvalues_hermitian(m).front();
}

template <std::size_t N>
bool is_psd(const Matrix<N> &m, double tol = kPsdTol) {
    return is_hermitian(m) && min_eigenvalue_hermitian(m) >= -tol;
}

}  // namespace ssbell
