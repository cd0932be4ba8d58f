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

#include "ssbell/inversion.hpp"

#include <cmath>
#include <random>

#include "gtest/gtest.h"
#include "oracle.hpp"
#include "ssbell/belltests.hpp"
#include "ssbell/random.hpp"

using namespace ssbell;

namespace {
const double kInvSqrt2 = 1 / std::sqrt(2.0);
}

TEST(inversion, kernel_1d_values) {
    Kernel1d sharp = kernel_1d(1);
    EXPECT_EQ(sharp(1, 1), 1);
    EXPECT_EQ(sharp(-1, 1), 0);
    EXPECT_EQ(sharp(1, -1), 0);
    EXPECT_EQ(sharp(-1, -1), 1);

    Kernel1d k = kernel_1d(kInvSqrt2);
    EXPECT_NEAR(k(1, 1), 0.5 * (1 + std::sqrt(2.0)), 1e-15);
    EXPECT_NEAR(k(1, 1), 1.2071067811865475, 1e-15);
    EXPECT_NEAR(k(-1, 1), -0.20710678118654752, 1e-15);

    std::mt19937_64 gen(21);
    for (int t = 0; t < 100; ++t) {
        double g = random::uniform(gen, 1e-6, 1) * (t % 2 ? 1 : -1);
        Kernel1d r = kernel_1d(g);
        for (int wp : {1, -1}) {
            EXPECT_NEAR(r(1, wp) + r(-1, wp), 1, 1e-12 * std::max(1.0, 1 / std::abs(g)));
        }
    }
    EXPECT_THROW(kernel_1d(0), GammaOutOfRange);
    EXPECT_THROW(kernel_1d(1.01), GammaOutOfRange);
}

TEST(inversion, build_kernel_values) {
    InversionKernel id = build_kernel(GammaSet::equal(1));
    for (std::size_t i = 0; i < kNumOutcomes; ++i) {
        for (std::size_t j = 0; j < kNumOutcomes; ++j) {
            EXPECT_EQ(id.table()[i][j], i == j ? 1.0 : 0.0);
        }
    }
    InversionKernel k = build_kernel(GammaSet::equal(kInvSqrt2));
    double diag = std::pow(0.5 * (1 + std::sqrt(2.0)), 4);
    EXPECT_NEAR(diag, 2.1231, 1e-4);
    for (const auto &xp : all_outcomes()) {
        EXPECT_NEAR(k(xp, xp), diag, 1e-14);
    }
    EXPECT_LT(k.table()[0][15], 0.01);
}

TEST(inversion, kernel_factorizes_and_columns_sum_to_one) {
    std::mt19937_64 gen(22);
    for (int t = 0; t < 100; ++t) {
        GammaSet g = random::admissible_settings(gen).gammas;
        InversionKernel k = build_kernel(g);
        std::array<double, 4> gs{g.x(), g.y(), g.u(), g.v()};
        for (const auto &xp : all_outcomes()) {
            double col = 0;
            for (const auto &xi : all_outcomes()) {
                double expect = oracle::p1d(xi.x, xp.x, gs[0]) * oracle::p1d(xi.y, xp.y, gs[1]) *
                                oracle::p1d(xi.u, xp.u, gs[2]) * oracle::p1d(xi.v, xp.v, gs[3]);
                EXPECT_NEAR(k(xi, xp), expect, 1e-12);
                col += k(xi, xp);
            }
            EXPECT_NEAR(col, 1, 1e-12);
        }
    }
}

TEST(inversion, identity_kernel_and_uniform_input) {
    std::mt19937_64 gen(23);
    DensityMatrix rho = random::density_matrix(gen);
    JointPovm m = build_measurement(chsh_optimal_angles(), GammaSet::equal(kInvSqrt2));
    Distribution16 p = observed_statistics(rho, m);
    QuasiDistribution same = invert_distribution(build_kernel(GammaSet::equal(1)), p);
    for (std::size_t k = 0; k < kNumOutcomes; ++k) {
        EXPECT_DOUBLE_EQ(same.entries[k], p[k]);
    }

    Distribution16 uniform;
    uniform.fill(1.0 / 16);
    QuasiDistribution q = invert_distribution(build_kernel(GammaSet::equal(kInvSqrt2)), uniform);
    // Oracle: plain double loop over the factorized kernel.
    for (const auto &xi : all_outcomes()) {
        double acc = 0;
        for (const auto &xp : all_outcomes()) {
            acc += oracle::p1d(xi.x, xp.x, kInvSqrt2) * oracle::p1d(xi.y, xp.y, kInvSqrt2) *
                   oracle::p1d(xi.u, xp.u, kInvSqrt2) * oracle::p1d(xi.v, xp.v, kInvSqrt2) / 16;
        }
        EXPECT_NEAR(acc, 1.0 / 16, 1e-15);
        EXPECT_NEAR(q[xi], 1.0 / 16, 1e-15);
    }
    EXPECT_NEAR(q.sum(), 1, 1e-12);
}

TEST(inversion, rejects_unnormalized_input) {
    Distribution16 bad{};
    bad[0] = 0.9;
    EXPECT_THROW(invert_distribution(build_kernel(GammaSet::equal(0.5)), bad), InvalidDistribution);
}

TEST(inversion, singlet_quasi_distribution_is_negative) {
    JointPovm m = build_measurement(chsh_optimal_angles(), GammaSet::equal(kInvSqrt2));
    QuasiDistribution q =
        invert_distribution(build_kernel(GammaSet::equal(kInvSqrt2)), observed_statistics(bell_state(BellState::PsiMinus), m));
    EXPECT_LT(q.min_entry(), -1e-10);
    // For the singlet at these settings p(xi) = (1 + (xv - xu - yu - yv)/sqrt2) / 16, minimum (1 - sqrt2)/16.
    EXPECT_NEAR(q.min_entry(), (1 - std::sqrt(2.0)) / 16, 1e-12);
    EXPECT_NEAR(q.sum(), 1, 1e-10);
    EXPECT_GT(q.negativity(), 0);
}

TEST(inversion, reconstructed_sharp_povm) {
    ObservableSpec x = ObservableSpec::make(Label::X, {0, 0, 1});
    ObservableSpec y = ObservableSpec::make(Label::Y, {1, 0, 0});
    ObservableSpec u = ObservableSpec::make(Label::U, {0, 0, 1});
    ObservableSpec v = ObservableSpec::make(Label::V, {1, 0, 0});
    ObservableSet o{x, y, u, v};
    GammaSet g = GammaSet::equal(kInvSqrt2);
    JointPovm m = build_measurement(o, g);
    SharpPovm r = reconstructed_sharp_povm(build_kernel(g), m, Label::X);
    EXPECT_LE(max_abs_diff(r.element_plus, Matrix2::diagonal({1, 0})), 1e-12);
    EXPECT_LE(max_abs_diff(r.element_minus, Matrix2::diagonal({0, 1})), 1e-12);

    EXPECT_THROW(reconstructed_sharp_povm(build_kernel(GammaSet::equal(0.5)), m, Label::X), GammaOutOfRange);

    std::mt19937_64 gen(24);
    for (int t = 0; t < 100; ++t) {
        auto s = random::admissible_settings(gen);
        JointPovm jm = build_measurement(s.observables, s.gammas);
        InversionKernel k = build_kernel(s.gammas);
        for (Label l : kAllLabels) {
            SharpPovm rec = reconstructed_sharp_povm(k, jm, l);
            for (int w : {1, -1}) {
                const Matrix2 &e = rec.element(w);
                EXPECT_LE(max_abs_diff(e * e, e), 1e-10);
                auto ref = oracle::sharp_projector(s.observables.get(l).bloch(), w);
                for (int i = 0; i < 2; ++i) {
                    for (int j = 0; j < 2; ++j) {
                        EXPECT_LE(std::abs(e(i, j) - ref[i][j]), 1e-12);
                    }
                }
            }
        }
    }
}

TEST(inversion, reconstructed_sharp_in_sharp_limit) {
    // gamma = 1 marginals are already sharp; a joint POVM with all gammas 1 is
    // not positive, so the formal construction supplies the marginals.
    GammaSet g = GammaSet::equal(1);
    JointPovm m = build_formal_measurement(chsh_optimal_angles(), g);
    for (Label l : kAllLabels) {
        SharpPovm r = reconstructed_sharp_povm(build_kernel(g), m, l);
        EXPECT_LE(max_abs_diff(r.element_plus, m.marginal(l, 1)), 1e-15);
        EXPECT_LE(max_abs_diff(r.element_plus, sharp_povm(chsh_optimal_angles().get(l)).element_plus), 1e-15);
    }
}

TEST(inversion, cross_marginal_examples) {
    Distribution16 uniform;
    uniform.fill(1.0 / 16);
    auto cm = cross_marginal(QuasiDistribution{uniform}, Label::X, Label::U);
    for (double v : cm) {
        EXPECT_NEAR(v, 0.25, 1e-15);
    }

    ObservableSet o{ObservableSpec::make(Label::X, {0, 0, 1}), ObservableSpec::make(Label::Y, {1, 0, 0}),
                    ObservableSpec::make(Label::U, {0, 0, 1}), ObservableSpec::make(Label::V, {1, 0, 0})};
    GammaSet g = GammaSet::equal(kInvSqrt2);
    QuasiDistribution q =
        invert_distribution(build_kernel(g), observed_statistics(bell_state(BellState::PsiMinus), build_measurement(o, g)));
    auto zz = cross_marginal(q, Label::X, Label::U);
    EXPECT_NEAR(zz[0], 0, 1e-12);    // (+,+)
    EXPECT_NEAR(zz[1], 0.5, 1e-12);  // (+,-)
    EXPECT_NEAR(zz[2], 0.5, 1e-12);  // (-,+)
    EXPECT_NEAR(zz[3], 0, 1e-12);    // (-,-)
    EXPECT_NEAR(zz[0] + zz[1] + zz[2] + zz[3], 1, 1e-12);

    EXPECT_THROW(cross_marginal(q, Label::X, Label::Y), InvalidObservable);
    EXPECT_THROW(cross_marginal(q, Label::U, Label::X), InvalidObservable);
}

TEST(inversion, exact_statistics_property) {
    std::mt19937_64 gen(25);
    for (int t = 0; t < 100; ++t) {
        auto s = random::admissible_settings(gen);
        DensityMatrix rho = random::density_matrix(gen);
        QuasiDistribution q =
            invert_distribution(build_kernel(s.gammas), observed_statistics(rho, build_measurement(s.observables, s.gammas)));
        EXPECT_NEAR(q.sum(), 1, 1e-10);
        auto id = oracle::identity2();
        for (Label a : {Label::X, Label::Y}) {
            for (Label b : {Label::U, Label::V}) {
                auto cm = cross_marginal(q, a, b);
                for (int wa : {1, -1}) {
                    for (int wb : {1, -1}) {
                        double born = oracle::born(
                            rho.matrix(), oracle::tensor(oracle::sharp_projector(s.observables.get(a).bloch(), wa),
                                                         oracle::sharp_projector(s.observables.get(b).bloch(), wb)));
                        EXPECT_NEAR(cm[sign_bit(wa) * 2 + sign_bit(wb)], born, 1e-10);
                    }
                }
            }
        }
        for (Label l : kAllLabels) {
            auto sm = single_marginal(q, l);
            auto p = oracle::sharp_projector(s.observables.get(l).bloch(), 1);
            double born = oracle::born(rho.matrix(), on_subsystem_a(l) ? oracle::tensor(p, id) : oracle::tensor(id, p));
            EXPECT_NEAR(sm[0], born, 1e-10);
        }
    }
}

TEST(inversion, negativity_iff_violation_werner) {
    GammaSet g = GammaSet::equal(kInvSqrt2);
    JointPovm m = build_measurement(chsh_optimal_angles(), g);
    InversionKernel k = build_kernel(g);
    std::mt19937_64 gen(26);
    for (int t = 0; t < 500; ++t) {
        double eta = random::uniform(gen, 0, 1);
        QuasiDistribution q = invert_distribution(k, observed_statistics(werner_state(eta), m));
        bool negative = q.min_entry() < -1e-10;
        bool violates = std::abs(ensemble_chsh(q)) > 2 + 1e-10;
        EXPECT_EQ(negative, violates) << "eta " << eta;
    }
}
