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

#include <cmath>
#include <random>

#include "gtest/gtest.h"
#include "oracle.hpp"
#include "ssbell/observables.hpp"
#include "ssbell/random.hpp"
#include "ssbell/states.hpp"

using namespace ssbell;

TEST(states, singlet_entries) {
    DensityMatrix singlet = bell_state(BellState::PsiMinus);
    const Matrix4 &m = singlet.matrix();
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            double expect = 0;
            if ((i == 1 && j == 1) || (i == 2 && j == 2)) {
                expect = 0.5;
            } else if ((i == 1 && j == 2) || (i == 2 && j == 1)) {
                expect = -0.5;
            }
            EXPECT_NEAR(m(i, j).real(), expect, 1e-15) << i << "," << j;
            EXPECT_EQ(m(i, j).imag(), 0);
        }
    }
}

TEST(states, bell_states_are_pure) {
    for (BellState b : {BellState::PhiPlus, BellState::PhiMinus, BellState::PsiPlus, BellState::PsiMinus}) {
        EXPECT_NEAR(bell_state(b).purity(), 1, 1e-12);
    }
}

TEST(states, singlet_partial_transpose) {
    Matrix4 pt = partial_transpose_b(bell_state(BellState::PsiMinus).matrix());
    EXPECT_NEAR(oracle::eigenvalues(pt)[0], -0.5, 1e-12);
    EXPECT_NEAR(min_eigenvalue_hermitian(pt), -0.5, 1e-12);
}

TEST(states, werner_family) {
    EXPECT_LE(max_abs_diff(werner_state(0).matrix(), Matrix4::identity() * 0.25), 1e-15);
    EXPECT_LE(max_abs_diff(werner_state(1).matrix(), bell_state(BellState::PsiMinus).matrix()), 1e-15);
    DensityMatrix w = werner_state(0.5);
    EXPECT_NEAR(w.matrix().trace().real(), 1, 1e-12);
    // Spectrum {(1+3eta)/4, (1-eta)/4 x3}.
    auto ev = oracle::eigenvalues(w.matrix());
    EXPECT_NEAR(ev[0], 0.125, 1e-12);
    EXPECT_NEAR(ev[3], 0.625, 1e-12);
    EXPECT_NEAR(min_eigenvalue_hermitian(w.matrix()), 0.125, 1e-12);
    EXPECT_THROW(werner_state(-0.01), OutOfRange);
    EXPECT_THROW(werner_state(1.5), OutOfRange);
    EXPECT_THROW(werner_state(std::nan("")), OutOfRange);
}

TEST(states, custom_state_validation) {
    Table4 re{}, im{};
    for (int i = 0; i < 4; ++i) {
        re[i][i] = 0.25;
    }
    EXPECT_NO_THROW(custom_state(re, im));

    Table4 bad_psd{};
    bad_psd[0][0] = 2;
    bad_psd[1][1] = -1;
    try {
        custom_state(bad_psd, im);
        FAIL();
    } catch (const NotPSD &e) {
        EXPECT_NE(std::string(e.what()).find("-1"), std::string::npos);
    }

    Table4 half{};
    for (int i = 0; i < 4; ++i) {
        half[i][i] = 0.5;
    }
    try {
        custom_state(half, im);
        FAIL();
    } catch (const NotUnitTrace &e) {
        EXPECT_NE(std::string(e.what()).find("2"), std::string::npos);
    }

    Table4 asym = re;
    asym[0][1] = 0.1;
    EXPECT_THROW(custom_state(asym, im), NotHermitian);

    Table4 imag_sym{};
    imag_sym[0][1] = 0.1;
    imag_sym[1][0] = 0.1;
    EXPECT_THROW(custom_state(re, imag_sym), NotHermitian);

    Table4 nan = re;
    nan[2][2] = std::nan("");
    EXPECT_THROW(custom_state(nan, im), NotFinite);
}

TEST(states, product_states_validate) {
    std::mt19937_64 gen(5);
    for (int t = 0; t < 50; ++t) {
        EXPECT_NO_THROW(product_state(random::qubit_density_matrix(gen), random::qubit_density_matrix(gen)));
        DensityMatrix r = random::density_matrix(gen);
        EXPECT_GE(min_eigenvalue_hermitian(r.matrix()), -kPsdTol);
    }
}

TEST(observables, sharp_povm_examples) {
    SharpPovm z = sharp_povm(ObservableSpec::make(Label::X, {0, 0, 1}));
    EXPECT_EQ(z.element_plus, Matrix2::diagonal({1, 0}));
    SharpPovm x = sharp_povm(ObservableSpec::make(Label::X, {1, 0, 0}));
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            EXPECT_NEAR(x.element_plus(i, j).real(), 0.5, 1e-15);
        }
    }
}

TEST(observables, sharp_povm_properties) {
    std::mt19937_64 gen(6);
    for (int t = 0; t < 200; ++t) {
        Vec3 n = random::unit_vector(gen);
        auto obs = ObservableSpec::make(Label::U, n);
        SharpPovm p = sharp_povm(obs);
        for (int w : {1, -1}) {
            const Matrix2 &e = p.element(w);
            EXPECT_LE(max_abs_diff(e * e, e), 1e-10);
            EXPECT_GE(min_eigenvalue_hermitian(e), -kPsdTol);
            auto ref = oracle::sharp_projector(n, w);
            for (int i = 0; i < 2; ++i) {
                for (int j = 0; j < 2; ++j) {
                    EXPECT_LE(std::abs(e(i, j) - ref[i][j]), 1e-15);
                }
            }
        }
        EXPECT_LE(max_abs_diff(p.element_plus + p.element_minus, pauli::I), 1e-12);
        EXPECT_NEAR(trace_product(p.element_plus - p.element_minus, obs.op()).real() / 2, 1, 1e-12);
    }
}

TEST(observables, rejects_non_unit_bloch) {
    EXPECT_THROW(ObservableSpec::make(Label::X, {0, 0, 0.9}), InvalidObservable);
    EXPECT_THROW(ObservableSpec::make(Label::X, {0, 0, 0}), InvalidObservable);
    EXPECT_THROW(ObservableSpec::make(Label::X, {std::nan(""), 0, 1}), InvalidObservable);
}

TEST(observables, chsh_optimal_angles) {
    ObservableSet o = chsh_optimal_angles();
    const double h = 1 / std::sqrt(2.0);
    EXPECT_NEAR(o.u.bloch()[0], h, 1e-15);
    EXPECT_EQ(o.u.bloch()[1], 0);
    EXPECT_NEAR(o.u.bloch()[2], h, 1e-15);
    for (Label l : kAllLabels) {
        EXPECT_NEAR(norm(o.get(l).bloch()), 1, 1e-12);
        EXPECT_EQ(o.get(l).bloch()[1], 0);
    }
    EXPECT_NEAR(dot(o.x.bloch(), o.y.bloch()), 0, 1e-12);
    EXPECT_NEAR(dot(o.u.bloch(), o.v.bloch()), 0, 1e-12);

    // <xu> for the singlet from sharp projectors assembled entrywise.
    DensityMatrix singlet = bell_state(BellState::PsiMinus);
    const Matrix4 &rho = singlet.matrix();
    double xu = 0;
    for (int x : {1, -1}) {
        for (int u : {1, -1}) {
            xu += x * u *
                  oracle::born(rho, oracle::tensor(oracle::sharp_projector(o.x.bloch(), x),
                                                   oracle::sharp_projector(o.u.bloch(), u)));
        }
    }
    EXPECT_NEAR(xu, -h, 1e-12);
}
