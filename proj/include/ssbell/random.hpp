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

// Random draws of states and measurement settings for randomized checks.

#include <cmath>
#include <numbers>
#include <random>

#include "ssbell/linalg.hpp"
#include "ssbell/measurement.hpp"
#include "ssbell/observables.hpp"
#include "ssbell/states.hpp"

namespace ssbell::random {

inline double uniform(std::mt19937_64 &gen, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(gen);
}

inline Vec3 unit_vector(std::mt19937_64 &gen) {
    std::normal_distribution<double> nd;
    for (;;) {
        Vec3 v{nd(gen), nd(gen), nd(gen)};
        double n = norm(v);
        if (n > 1e-3) {
            return {v[0] / n, v[1] / n, v[2] / n};
        }
    }
}

template <std::size_t N>
Matrix<N> complex_gaussian(std::mt19937_64 &gen) {
    std::normal_distribution<double> nd;
    Matrix<N> m{};
    for (auto &e : m.entries) {
        e = Complex(nd(gen), nd(gen));
    }
    return m;
}

template <std::size_t N>
Matrix<N> hermitian(std::mt19937_64 &gen) {
    Matrix<N> g = complex_gaussian<N>(gen);
    return (g + g.adjoint()) * 0.5;
}

/// Ginibre-distributed mixed state, occasionally mixed with a Bell state to
/// cover strongly entangled regions.
inline DensityMatrix density_matrix(std::mt19937_64 &gen) {
    Matrix4 g = complex_gaussian<4>(gen);
    Matrix4 m = g * g.adjoint();
    m = m * (1.0 / m.trace().real());
    if (uniform(gen, 0, 1) < 0.3) {
        double w = uniform(gen, 0, 1);
        m = m * (1 - w) + bell_state(BellState::PsiMinus).matrix() * w;
    }
    // Enforce exact Hermiticity and unit trace after rounding.
    m = (m + m.adjoint()) * 0.5;
    m = m * (1.0 / m.trace().real());
    return DensityMatrix::from_matrix(m);
}

inline Matrix2 qubit_density_matrix(std::mt19937_64 &gen) {
    Vec3 n = unit_vector(gen);
    double r = uniform(gen, 0, 1);
    return (pauli::I + bloch_operator({r * n[0], r * n[1], r * n[2]})) * 0.5;
}

struct Settings {
    ObservableSet observables;
    GammaSet gammas;
};

namespace detail {
inline bool admissible(const Vec3 &a, const Vec3 &b, double ga, double gb) {
    for (double sgn : {1.0, -1.0}) {
        Vec3 s{ga * a[0] + sgn * gb * b[0], ga * a[1] + sgn * gb * b[1], ga * a[2] + sgn * gb * b[2]};
        if (norm(s) > 1) {
            return false;
        }
    }
    return !(std::abs(dot(a, b)) <= kOrthogonalTol && ga * ga + gb * gb > 1);
}

inline double signed_gamma(std::mt19937_64 &gen, double lo) {
    double g = uniform(gen, lo, 1);
    return uniform(gen, 0, 1) < 0.2 ? -g : g;
}
}  // namespace detail

/// Random directions and gammas with |gamma| >= gamma_floor for which the
/// joint POVM is positive.
inline Settings admissible_settings(std::mt19937_64 &gen, double gamma_floor = 0.2) {
    for (;;) {
        Vec3 x = unit_vector(gen), y = unit_vector(gen), u = unit_vector(gen), v = unit_vector(gen);
        double gx = detail::signed_gamma(gen, gamma_floor), gy = detail::signed_gamma(gen, gamma_floor);
        double gu = detail::signed_gamma(gen, gamma_floor), gv = detail::signed_gamma(gen, gamma_floor);
        if (detail::admissible(x, y, gx, gy) && detail::admissible(u, v, gu, gv)) {
            return Settings{ObservableSet{ObservableSpec::make(Label::X, x), ObservableSpec::make(Label::Y, y),
                                          ObservableSpec::make(Label::U, u), ObservableSpec::make(Label::V, v)},
                            GammaSet::make(gx, gy, gu, gv)};
        }
    }
}

/// Unequal gammas with gx^2 + gy^2 <= 1 and gu^2 + gv^2 <= 1, each |gamma| >= floor.
inline GammaSet orthogonal_pair_gammas(std::mt19937_64 &gen, double gamma_floor = 0.15) {
    auto pair = [&] {
        for (;;) {
            double r = uniform(gen, 0.3, 1);
            double t = uniform(gen, 0, std::numbers::pi / 2);
            double a = r * std::cos(t), b = r * std::sin(t);
            if (a >= gamma_floor && b >= gamma_floor) {
                double sa = uniform(gen, 0, 1) < 0.2 ? -1 : 1;
                double sb = uniform(gen, 0, 1) < 0.2 ? -1 : 1;
                return std::pair{sa * a, sb * b};
            }
        }
    };
    auto [gx, gy] = pair();
    auto [gu, gv] = pair();
    return GammaSet::make(gx, gy, gu, gv);
}

}  // namespace ssbell::random
