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

// Joint unsharp measurement of two observables per qubit and its product
// over the two subsystems.
//
// Each subsystem POVM has elements
//     D(w1', w2') = (I + g1 w1' n1.sigma + g2 w2' n2.sigma) / 4,
// whose single-observable marginals are (I + g w' n.sigma) / 2.

#include <array>
#include <cmath>
#include <sstream>

#include "ssbell/error.hpp"
#include "ssbell/linalg.hpp"
#include "ssbell/observables.hpp"
#include "ssbell/outcome.hpp"
#include "ssbell/states.hpp"

namespace ssbell {

inline constexpr double kGammaMin = 1e-6;
inline constexpr double kPairConstraintTol = 1e-12;
inline constexpr double kOrthogonalTol = 1e-12;
inline constexpr double kClampTol = 1e-12;

inline void require_gamma(double g, const char *name) {
    if (!(std::abs(g) >= kGammaMin && std::abs(g) <= 1)) {
        std::ostringstream msg;
        msg << "gamma_" << name << " = " << g << " violates the bound " << kGammaMin << " <= |gamma| <= 1";
        throw GammaOutOfRange(msg.str());
    }
}

/// Accuracy factors of the four unsharp observations.
class GammaSet {
   public:
    static GammaSet make(double gx, double gy, double gu, double gv) {
        require_gamma(gx, "x");
        require_gamma(gy, "y");
        require_gamma(gu, "u");
        require_gamma(gv, "v");
        return GammaSet({gx, gy, gu, gv});
    }
    static GammaSet equal(double g) {
        return make(g, g, g, g);
    }

    double get(Label l) const {
        return g_[static_cast<std::size_t>(l)];
    }
    double x() const {
        return g_[0];
    }
    double y() const {
        return g_[1];
    }
    double u() const {
        return g_[2];
    }
    double v() const {
        return g_[3];
    }

   private:
    explicit GammaSet(const std::array<double, 4> &g) : g_(g) {
    }
    std::array<double, 4> g_;
};

/// Four-outcome POVM on one qubit, indexed by (w1', w2').
struct SubsystemPovm {
    Vec3 first_bloch{};
    Vec3 second_bloch{};
    double first_gamma = 1;
    double second_gamma = 1;
    std::array<Matrix2, 4> elements{};

    static constexpr std::size_t slot(int w1, int w2) {
        return sign_bit(w1) * 2 + sign_bit(w2);
    }
    const Matrix2 &element(int w1, int w2) const {
        return elements[slot(w1, w2)];
    }
    /// Marginal of the first (which_first) or second observable at outcome w.
    Matrix2 marginal(bool which_first, int w) const {
        Matrix2 r{};
        for (int o : {1, -1}) {
            r += which_first ? element(w, o) : element(o, w);
        }
        return r;
    }
};

namespace detail {

inline SubsystemPovm assemble_subsystem(const ObservableSpec &first, const ObservableSpec &second, double g1,
                                        double g2) {
    SubsystemPovm p;
    p.first_bloch = first.bloch();
    p.second_bloch = second.bloch();
    p.first_gamma = g1;
    p.second_gamma = g2;
    Matrix2 a = first.op();
    Matrix2 b = second.op();
    for (int w1 : {1, -1}) {
        for (int w2 : {1, -1}) {
            p.elements[SubsystemPovm::slot(w1, w2)] = (pauli::I + a * (g1 * w1) + b * (g2 * w2)) * 0.25;
        }
    }
    return p;
}

}  // namespace detail

/// Builds the joint POVM for an observable pair. Throws NotPositive when an
/// element leaves the positive cone, and GammaOutOfRange for bad gammas.
inline SubsystemPovm build_joint_povm(const ObservableSpec &first, const ObservableSpec &second, double g1,
                                      double g2) {
    require_gamma(g1, label_name(first.label()));
    require_gamma(g2, label_name(second.label()));
    SubsystemPovm p = detail::assemble_subsystem(first, second, g1, g2);
    for (int w1 : {1, -1}) {
        for (int w2 : {1, -1}) {
            double lo = min_eigenvalue_hermitian(p.element(w1, w2));
            if (lo < -kPsdTol) {
                std::ostringstream msg;
                msg << "joint POVM element (" << w1 << "," << w2 << ") for " << label_name(first.label())
                    << "," << label_name(second.label()) << " has min eigenvalue " << lo
                    << "; gamma/direction combination is outside the physical region";
                throw NotPositive(msg.str());
            }
        }
    }
    if (std::abs(dot(first.bloch(), second.bloch())) <= kOrthogonalTol &&
        g1 * g1 + g2 * g2 > 1 + kPairConstraintTol) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "orthogonal pair " << label_name(first.label()) << "," << label_name(second.label())
            << " requires gamma1^2 + gamma2^2 <= 1, got " << g1 * g1 + g2 * g2;
        throw NotPositive(msg.str());
    }
    return p;
}

/// Same algebraic construction without the positivity check. Elements may be
/// indefinite; used for kernel-only sweeps beyond the physical region.
inline SubsystemPovm build_formal_joint_povm(const ObservableSpec &first, const ObservableSpec &second, double g1,
                                             double g2) {
    require_gamma(g1, label_name(first.label()));
    require_gamma(g2, label_name(second.label()));
    return detail::assemble_subsystem(first, second, g1, g2);
}

/// Product POVM over both subsystems, indexed by flat xi'.
struct JointPovm {
    SubsystemPovm subsystem_a;
    SubsystemPovm subsystem_b;
    std::array<Matrix4, kNumOutcomes> product{};

    const Matrix4 &element(const OutcomeIndex &xi_prime) const {
        return product[xi_prime.flat()];
    }

    double gamma(Label l) const {
        switch (l) {
            case Label::X:
                return subsystem_a.first_gamma;
            case Label::Y:
                return subsystem_a.second_gamma;
            case Label::U:
                return subsystem_b.first_gamma;
            case Label::V:
                return subsystem_b.second_gamma;
        }
        return 1;
    }

    /// Single-observable marginal on its own qubit.
    Matrix2 marginal(Label l, int w_prime) const {
        const SubsystemPovm &s = on_subsystem_a(l) ? subsystem_a : subsystem_b;
        bool first = l == Label::X || l == Label::U;
        return s.marginal(first, w_prime);
    }

    /// Single-observable marginal of the 16-element product, summed over the
    /// other three primed outcomes.
    Matrix4 product_marginal(Label l, int w_prime) const {
        Matrix4 r{};
        for (const auto &o : all_outcomes()) {
            if (component(o, l) == w_prime) {
                r += product[o.flat()];
            }
        }
        return r;
    }
};

inline JointPovm product_povm(const SubsystemPovm &a, const SubsystemPovm &b) {
    JointPovm j{a, b, {}};
    for (const auto &o : all_outcomes()) {
        j.product[o.flat()] = kron(a.element(o.x, o.y), b.element(o.u, o.v));
    }
    return j;
}

inline JointPovm build_measurement(const ObservableSet &obs, const GammaSet &g) {
    return product_povm(build_joint_povm(obs.x, obs.y, g.x(), g.y()), build_joint_povm(obs.u, obs.v, g.u(), g.v()));
}

inline JointPovm build_formal_measurement(const ObservableSet &obs, const GammaSet &g) {
    return product_povm(build_formal_joint_povm(obs.x, obs.y, g.x(), g.y()),
                        build_formal_joint_povm(obs.u, obs.v, g.u(), g.v()));
}

/// Signed tr[rho D(xi')] with no clamping.
inline Distribution16 formal_statistics(const DensityMatrix &rho, const JointPovm &povm) {
    Distribution16 p{};
    for (std::size_t k = 0; k < kNumOutcomes; ++k) {
        p[k] = trace_product(rho.matrix(), povm.product[k]).real();
    }
    return p;
}

/// Observed statistics tr[rho D(xi')]. Entries within 1e-12 below zero are
/// clamped; anything more negative raises InternalConsistencyError.
inline Distribution16 observed_statistics(const DensityMatrix &rho, const JointPovm &povm) {
    Distribution16 p = formal_statistics(rho, povm);
    for (std::size_t k = 0; k < kNumOutcomes; ++k) {
        if (p[k] < 0) {
            if (p[k] < -kClampTol) {
                std::ostringstream msg;
                msg << "observed probability for " << OutcomeIndex::from_flat(k).str() << " is " << p[k];
                throw InternalConsistencyError(msg.str());
            }
            p[k] = 0;
        }
    }
    return p;
}

}  // namespace ssbell
