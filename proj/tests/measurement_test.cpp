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

#include "ssbell/measurement.hpp"

#include <cmath>
#include <random>

#include "gtest/gtest.h"
#include "oracle.hpp"
#include "ssbell/random.hpp"

using namespace ssbell;

namespace {

const double kInvSqrt2 = 1 / std::sqrt(2.0);

ObservableSpec obs(Label l, Vec3 n) {
    return ObservableSpec::make(l, n);
}

}  // namespace

TEST(measurement, gamma_set_bounds) {
    EXPECT_NO_THROW(GammaSet::make(1, -1, 0.5, 1e-6));
    EXPECT_THROW(GammaSet::make(1.5, 0.5, 0.5, 0.5), GammaOutOfRange);
    EXPECT_THROW(GammaSet::make(0.5, 0, 0.5, 0.5), GammaOutOfRange);
    EXPECT_THROW(GammaSet::make(0.5, 0.5, 9e-7, 0.5), GammaOutOfRange);
    try {
        GammaSet::make(0.5, 0.5, 0.5, 1.5);
        FAIL();
    } catch (const GammaOutOfRange &e) {
        EXPECT_NE(std::string(e.what()).find("gamma_v"), std::string::npos);
    }
}

TEST(measurement, symmetric_build_element) {
    SubsystemPovm p = build_joint_povm(obs(Label::X, {0, 0, 1}), obs(Label::Y, {1, 0, 0}), kInvSqrt2, kInvSqrt2);
    Matrix2 expect = (pauli::I + (pauli::Z + pauli::X) * kInvSqrt2) * 0.25;
    EXPECT_LE(max_abs_diff(p.element(1, 1), expect), 1e-15);
    // Bloch length of the quarter element is exactly 1/4, so spectrum {0, 1/2}.
    auto ev = eigenvalues_hermitian(p.element(1, 1));
    EXPECT_NEAR(ev[0], 0, 1e-12);
    EXPECT_NEAR(ev[1], 0.5, 1e-12);
}

TEST(measurement, sharp_pair_is_not_positive) {
    try {
        build_joint_povm(obs(Label::X, {0, 0, 1}), obs(Label::Y, {1, 0, 0}), 1, 1);
        FAIL();
    } catch (const NotPositive &e) {
        std::string what = e.what();
        EXPECT_NE(what.find("min eigenvalue"), std::string::npos);
        EXPECT_NE(what.find("X,Y"), std::string::npos);
    }
}

TEST(measurement, orthogonal_pair_constraint) {
    double g = kInvSqrt2 * (1 + 1e-11);
    // Positivity tolerance alone would accept this; the pair constraint does not.
    EXPECT_THROW(build_joint_povm(obs(Label::U, {0, 0, 1}), obs(Label::V, {1, 0, 0}), g, g), NotPositive);
    EXPECT_NO_THROW(build_joint_povm(obs(Label::U, {0, 0, 1}), obs(Label::V, {1, 0, 0}), 0.6, 0.8));
    // Parallel directions are fine with gamma sum up to 1.
    EXPECT_NO_THROW(build_joint_povm(obs(Label::U, {0, 0, 1}), obs(Label::V, {0, 0, 1}), 0.5, 0.5));
}

TEST(measurement, product_povm_structure) {
    JointPovm m = build_measurement(chsh_optimal_angles(), GammaSet::equal(kInvSqrt2));
    Matrix4 sum{};
    for (const auto &e : m.product) {
        sum += e;
        EXPECT_GE(min_eigenvalue_hermitian(e), -kPsdTol);
        EXPECT_NEAR(e.trace().real(), 0.25, 1e-15);
    }
    EXPECT_LE(max_abs_diff(sum, Matrix4::identity()), 1e-12);
}

TEST(measurement, random_admissible_structure) {
    std::mt19937_64 gen(11);
    for (int t = 0; t < 100; ++t) {
        auto s = random::admissible_settings(gen);
        JointPovm m = build_measurement(s.observables, s.gammas);
        for (const auto *sub : {&m.subsystem_a, &m.subsystem_b}) {
            Matrix2 sum{};
            for (const auto &e : sub->elements) {
                sum += e;
                EXPECT_GE(min_eigenvalue_hermitian(e), -kPsdTol);
            }
            EXPECT_LE(max_abs_diff(sum, pauli::I), 1e-12);
        }
        for (Label l : kAllLabels) {
            for (int w : {1, -1}) {
                Matrix2 expect = (pauli::I + s.observables.get(l).op() * (s.gammas.get(l) * w)) * 0.5;
                EXPECT_LE(max_abs_diff(m.marginal(l, w), expect), 1e-12);
                Matrix4 lifted = on_subsystem_a(l) ? kron(expect, pauli::I) : kron(pauli::I, expect);
                EXPECT_LE(max_abs_diff(m.product_marginal(l, w), lifted), 1e-12);
            }
        }
    }
}

TEST(measurement, observed_statistics_mixed_state) {
    JointPovm m = build_measurement(chsh_optimal_angles(), GammaSet::equal(kInvSqrt2));
    Distribution16 p = observed_statistics(werner_state(0), m);
    for (double v : p) {
        EXPECT_NEAR(v, 1.0 / 16, 1e-15);
    }
}

TEST(measurement, observed_statistics_singlet_matches_oracle) {
    ObservableSet o = chsh_optimal_angles();
    JointPovm m = build_measurement(o, GammaSet::equal(kInvSqrt2));
    DensityMatrix rho = bell_state(BellState::PsiMinus);
    Distribution16 p = observed_statistics(rho, m);
    double sum = 0;
    for (const auto &xp : all_outcomes()) {
        auto a = oracle::unsharp_element(o.x.bloch(), o.y.bloch(), kInvSqrt2, kInvSqrt2, xp.x, xp.y);
        auto b = oracle::unsharp_element(o.u.bloch(), o.v.bloch(), kInvSqrt2, kInvSqrt2, xp.u, xp.v);
        EXPECT_NEAR(p[xp.flat()], oracle::born(rho.matrix(), oracle::tensor(a, b)), 1e-14) << xp.str();
        sum += p[xp.flat()];
    }
    EXPECT_NEAR(sum, 1, 1e-10);
}

TEST(measurement, marginal_statistics_and_linearity) {
    std::mt19937_64 gen(12);
    for (int t = 0; t < 100; ++t) {
        auto s = random::admissible_settings(gen);
        JointPovm m = build_measurement(s.observables, s.gammas);
        DensityMatrix r1 = random::density_matrix(gen);
        DensityMatrix r2 = random::density_matrix(gen);
        Distribution16 p1 = observed_statistics(r1, m);
        Distribution16 p2 = observed_statistics(r2, m);
        double total1 = 0;
        for (double v : p1) {
            EXPECT_GE(v, 0);
            total1 += v;
        }
        EXPECT_NEAR(total1, 1, 1e-10);
        for (Label l : kAllLabels) {
            for (int w : {1, -1}) {
                double marg = 0;
                for (const auto &o : all_outcomes()) {
                    if (component(o, l) == w) {
                        marg += p1[o.flat()];
                    }
                }
                auto e = oracle::sharp_projector(s.observables.get(l).bloch(), w);
                // (I + g w n.sigma)/2 = g * P_w + (1 - g) * I/2.
                oracle::M2 unsharp{};
                auto id = oracle::identity2();
                for (int i = 0; i < 2; ++i) {
                    for (int j = 0; j < 2; ++j) {
                        unsharp[i][j] = s.gammas.get(l) * e[i][j] + (1 - s.gammas.get(l)) * 0.5 * id[i][j];
                    }
                }
                auto lifted = on_subsystem_a(l) ? oracle::tensor(unsharp, id) : oracle::tensor(id, unsharp);
                EXPECT_NEAR(marg, oracle::born(r1.matrix(), lifted), 1e-12);
            }
        }
        double alpha = random::uniform(gen, 0, 1);
        Distribution16 pm =
            observed_statistics(DensityMatrix::from_matrix(r1.matrix() * alpha + r2.matrix() * (1 - alpha)), m);
        for (std::size_t k = 0; k < kNumOutcomes; ++k) {
            EXPECT_NEAR(pm[k], alpha * p1[k] + (1 - alpha) * p2[k], 1e-12);
        }
    }
}

TEST(measurement, formal_measurement_beyond_physical_region) {
    JointPovm m = build_formal_measurement(chsh_optimal_angles(), GammaSet::equal(0.9));
    Matrix4 sum{};
    for (const auto &e : m.product) {
        sum += e;
    }
    EXPECT_LE(max_abs_diff(sum, Matrix4::identity()), 1e-12);
    EXPECT_LT(min_eigenvalue_hermitian(m.subsystem_a.element(1, 1)), -kPsdTol);
    Distribution16 p = formal_statistics(bell_state(BellState::PsiMinus), m);
    double total = 0;
    for (double v : p) {
        total += v;
    }
    EXPECT_NEAR(total, 1, 1e-12);
}
