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

// State-independent inversion from measured outcomes xi' to inferred sharp
// values xi.
//
// Per observable, p_W(w|w') = (1 + w w' / gamma_W) / 2. The joint kernel is the
// product over X, Y, U, V and maps observed statistics to a signed
// quasi-distribution over xi. Negative entries are kept: they are the
// nonclassicality witness.

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <sstream>

#include "ssbell/error.hpp"
#include "ssbell/linalg.hpp"
#include "ssbell/measurement.hpp"
#include "ssbell/observables.hpp"
#include "ssbell/outcome.hpp"

namespace ssbell {

inline constexpr double kNormalizationTol = 1e-10;
inline constexpr double kMarginalClampTol = 1e-10;

/// 2x2 conditional table of one observable, indexed by (w, w').
struct Kernel1d {
    double gamma = 1;
    std::array<std::array<double, 2>, 2> table{};

    double operator()(int w, int w_prime) const {
        return table[sign_bit(w)][sign_bit(w_prime)];
    }
};

inline Kernel1d kernel_1d(double gamma) {
    require_gamma(gamma, "w");
    Kernel1d k;
    k.gamma = gamma;
    for (int w : {1, -1}) {
        for (int wp : {1, -1}) {
            k.table[sign_bit(w)][sign_bit(wp)] = 0.5 * (1 + w * wp / gamma);
        }
    }
    return k;
}

/// 16x16 quasi-stochastic table p(xi|xi'), row xi and column xi'.
class InversionKernel {
   public:
    using Table = std::array<std::array<double, kNumOutcomes>, kNumOutcomes>;

    static InversionKernel build(const GammaSet &gammas) {
        InversionKernel k(gammas);
        for (Label l : kAllLabels) {
            k.one_d_[static_cast<std::size_t>(l)] = kernel_1d(gammas.get(l));
        }
        for (const auto &xi : all_outcomes()) {
            for (const auto &xp : all_outcomes()) {
                k.table_[xi.flat()][xp.flat()] =
                    k.conditional(Label::X, xi.x, xp.x) * k.conditional(Label::Y, xi.y, xp.y) *
                    k.conditional(Label::U, xi.u, xp.u) * k.conditional(Label::V, xi.v, xp.v);
            }
        }
        return k;
    }

    const GammaSet &gammas() const {
        return gammas_;
    }
    const Table &table() const {
        return table_;
    }
    double operator()(const OutcomeIndex &xi, const OutcomeIndex &xi_prime) const {
        return table_[xi.flat()][xi_prime.flat()];
    }
    /// p_W(w|w') for one observable.
    double conditional(Label l, int w, int w_prime) const {
        return one_d_[static_cast<std::size_t>(l)](w, w_prime);
    }
    const Kernel1d &one_d(Label l) const {
        return one_d_[static_cast<std::size_t>(l)];
    }

    /// Copy with one table entry shifted; the 1D factors are left untouched.
    /// Used for fault injection in the validation suite.
    InversionKernel with_corrupted_entry(const OutcomeIndex &xi, const OutcomeIndex &xi_prime,
                                         double delta) const {
        InversionKernel k = *this;
        k.table_[xi.flat()][xi_prime.flat()] += delta;
        return k;
    }

   private:
    explicit InversionKernel(const GammaSet &g) : gammas_(g) {
    }
    GammaSet gammas_;
    std::array<Kernel1d, 4> one_d_{};
    Table table_{};
};

inline InversionKernel build_kernel(const GammaSet &gammas) {
    return InversionKernel::build(gammas);
}

/// Signed, normalized distribution over xi.
struct QuasiDistribution {
    Distribution16 entries{};

    double operator[](const OutcomeIndex &xi) const {
        return entries[xi.flat()];
    }
    double sum() const {
        return std::accumulate(entries.begin(), entries.end(), 0.0);
    }
    double min_entry() const {
        return *std::min_element(entries.begin(), entries.end());
    }
    /// Total weight carried by negative entries, as a positive number.
    double negativity() const {
        double n = 0;
        for (double e : entries) {
            n += std::max(0.0, -e);
        }
        return n;
    }
};

inline double total(const Distribution16 &p) {
    return std::accumulate(p.begin(), p.end(), 0.0);
}

/// p(xi|rho) = sum_xi' p(xi|xi') p~(xi'|rho).
inline QuasiDistribution invert_distribution(const InversionKernel &kernel, const Distribution16 &observed) {
    double s = total(observed);
    if (std::abs(s - 1) > kNormalizationTol) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "observed statistics must sum to 1, got " << s;
        throw InvalidDistribution(msg.str());
    }
    QuasiDistribution q;
    for (std::size_t i = 0; i < kNumOutcomes; ++i) {
        double acc = 0;
        for (std::size_t j = 0; j < kNumOutcomes; ++j) {
            acc += kernel.table()[i][j] * observed[j];
        }
        q.entries[i] = acc;
    }
    return q;
}

/// Delta_W(w) = sum_w' p_W(w|w') D~_W(w'), which should be the sharp projector.
inline SharpPovm reconstructed_sharp_povm(const InversionKernel &kernel, const JointPovm &povm, Label l) {
    if (kernel.gammas().get(l) != povm.gamma(l)) {
        std::ostringstream msg;
        msg << "kernel gamma_" << label_name(l) << " = " << kernel.gammas().get(l)
            << " does not match the measurement's " << povm.gamma(l);
        throw GammaOutOfRange(msg.str());
    }
    SharpPovm r{};
    for (int w : {1, -1}) {
        Matrix2 acc{};
        for (int wp : {1, -1}) {
            acc += povm.marginal(l, wp) * kernel.conditional(l, w, wp);
        }
        (w > 0 ? r.element_plus : r.element_minus) = acc;
    }
    return r;
}

namespace detail {
inline void clamp_probabilities(double *first, std::size_t n, const char *what) {
    for (std::size_t i = 0; i < n; ++i) {
        if (first[i] < 0) {
            if (first[i] < -kMarginalClampTol) {
                std::ostringstream msg;
                msg << what << " has negative entry " << first[i];
                throw InternalConsistencyError(msg.str());
            }
            first[i] = 0;
        }
    }
}
}  // namespace detail

/// Two-observable marginal for one A and one B observable, indexed
/// [sign_bit(a) * 2 + sign_bit(b)].
inline std::array<double, 4> cross_marginal(const QuasiDistribution &q, Label a, Label b) {
    if (!on_subsystem_a(a) || on_subsystem_a(b)) {
        throw InvalidObservable(std::string("cross marginal needs one A and one B observable, got ") +
                                label_name(a) + "," + label_name(b));
    }
    std::array<double, 4> r{};
    for (const auto &xi : all_outcomes()) {
        r[sign_bit(component(xi, a)) * 2 + sign_bit(component(xi, b))] += q[xi];
    }
    detail::clamp_probabilities(r.data(), r.size(), "cross marginal");
    return r;
}

/// One-observable marginal, indexed [sign_bit(w)].
inline std::array<double, 2> single_marginal(const QuasiDistribution &q, Label l) {
    std::array<double, 2> r{};
    for (const auto &xi : all_outcomes()) {
        r[sign_bit(component(xi, l))] += q[xi];
    }
    detail::clamp_probabilities(r.data(), r.size(), "single marginal");
    return r;
}

}  // namespace ssbell
