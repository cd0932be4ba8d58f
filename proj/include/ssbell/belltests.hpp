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

// CHSH and Clauser-Horne quantities, both ensemble and single-shot.
//
// Single-shot values are evaluated on the inferred conditional distribution
// p(xi|xi') of one measured outcome. Every single-shot value is computed twice,
// by summing over the kernel table and by the closed form in the gamma factors,
// and the two must agree.

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <span>
#include <string>
#include <vector>

#include "ssbell/error.hpp"
#include "ssbell/inversion.hpp"
#include "ssbell/measurement.hpp"
#include "ssbell/observables.hpp"
#include "ssbell/outcome.hpp"
#include "ssbell/states.hpp"

namespace ssbell {

inline constexpr double kChshBound = 2.0;
inline constexpr double kChUpperBound = 0.0;
inline constexpr double kChLowerBound = -1.0;
inline constexpr double kDualRouteTol = 1e-10;
inline constexpr double kBoundaryTol = 1e-12;

using Grid16x16 = std::array<std::array<double, kNumOutcomes>, kNumOutcomes>;

/// s(xi) = xu - xv + yu + yv, always +-2.
constexpr double s_of_xi(const OutcomeIndex &xi) {
    return xi.x * xi.u - xi.x * xi.v + xi.y * xi.u + xi.y * xi.v;
}

inline Distribution16 s_values() {
    Distribution16 s{};
    for (const auto &xi : all_outcomes()) {
        s[xi.flat()] = s_of_xi(xi);
    }
    return s;
}

/// S = sum_xi s(xi) p(xi|rho).
inline double ensemble_chsh(const QuasiDistribution &q) {
    double acc = 0;
    for (const auto &xi : all_outcomes()) {
        acc += s_of_xi(xi) * q[xi];
    }
    return acc;
}

namespace detail {

inline void require_agreement(double a, double b, double scale, const char *what) {
    double tol = kDualRouteTol * std::max(1.0, scale);
    if (!(std::abs(a - b) <= tol)) {
        std::ostringstream msg;
        msg.precision(17);
        msg << what << ": summation gives " << a << " but closed form gives " << b;
        throw InternalConsistencyError(msg.str());
    }
}

}  // namespace detail

/// S(xi') by summing s(xi) p(xi|xi') over the kernel table.
inline double single_shot_chsh_sum(const InversionKernel &kernel, const OutcomeIndex &xi_prime) {
    double acc = 0;
    for (const auto &xi : all_outcomes()) {
        acc += s_of_xi(xi) * kernel(xi, xi_prime);
    }
    return acc;
}

/// S(xi') = [gY gV x'u' - gY gU x'v' + gX gV y'u' + gX gU y'v'] / (gX gY gU gV).
inline double single_shot_chsh_closed_form(const GammaSet &g, const OutcomeIndex &xp) {
    double num = g.y() * g.v() * xp.x * xp.u - g.y() * g.u() * xp.x * xp.v + g.x() * g.v() * xp.y * xp.u +
                 g.x() * g.u() * xp.y * xp.v;
    return num / (g.x() * g.y() * g.u() * g.v());
}

/// Single-shot CHSH value; cross-checks both routes and returns the closed form.
inline double single_shot_chsh(const InversionKernel &kernel, const OutcomeIndex &xi_prime) {
    double by_sum = single_shot_chsh_sum(kernel, xi_prime);
    double closed = single_shot_chsh_closed_form(kernel.gammas(), xi_prime);
    double scale = 0;
    for (const auto &xi : all_outcomes()) {
        scale += std::abs(s_of_xi(xi) * kernel(xi, xi_prime));
    }
    detail::require_agreement(by_sum, closed, scale, "single-shot CHSH");
    return closed;
}

inline Distribution16 single_shot_chsh_table(const InversionKernel &kernel) {
    Distribution16 t{};
    for (const auto &xp : all_outcomes()) {
        t[xp.flat()] = single_shot_chsh(kernel, xp);
    }
    return t;
}

/// sum_xi' S(xi') p(xi'), the ensemble value seen from the measured side.
inline double chsh_from_observed(const InversionKernel &kernel, const Distribution16 &observed) {
    Distribution16 t = single_shot_chsh_table(kernel);
    double acc = 0;
    for (std::size_t k = 0; k < kNumOutcomes; ++k) {
        acc += t[k] * observed[k];
    }
    return acc;
}

/// Mean of S(xi') over recorded shots. Throws EmptyShotList.
inline double ensemble_from_shots(const InversionKernel &kernel, std::span<const OutcomeIndex> shots) {
    if (shots.empty()) {
        throw EmptyShotList("cannot average the single-shot CHSH value over zero shots");
    }
    Distribution16 t = single_shot_chsh_table(kernel);
    double acc = 0;
    for (const auto &s : shots) {
        acc += t[s.flat()];
    }
    return acc / static_cast<double>(shots.size());
}

/// Born probabilities of sharp measurements, for the independent route.
struct SharpProbabilities {
    const DensityMatrix &rho;
    const ObservableSet &obs;

    double pair(Label a, int wa, Label b, int wb) const {
        Matrix4 op = kron(sharp_povm(obs.get(a)).element(wa), sharp_povm(obs.get(b)).element(wb));
        return trace_product(rho.matrix(), op).real();
    }
    double single(Label l, int w) const {
        Matrix2 e = sharp_povm(obs.get(l)).element(w);
        Matrix4 op = on_subsystem_a(l) ? kron(e, pauli::I) : kron(pauli::I, e);
        return trace_product(rho.matrix(), op).real();
    }
};

/// CHSH value from tr[rho (n.sigma (x) m.sigma)] correlators with sharp observables.
inline double ensemble_chsh_sharp(const DensityMatrix &rho, const ObservableSet &obs) {
    auto corr = [&](const ObservableSpec &a, const ObservableSpec &b) {
        return trace_product(rho.matrix(), kron(a.op(), b.op())).real();
    };
    return corr(obs.x, obs.u) - corr(obs.x, obs.v) + corr(obs.y, obs.u) + corr(obs.y, obs.v);
}

/// C = pXU - pXV + pYU + pYV - pY - pU.
constexpr double ch_combination(double pxu, double pxv, double pyu, double pyv, double py, double pu) {
    return pxu - pxv + pyu + pyv - py - pu;
}

/// C(xi|xi') with the conditionals marginalized out of the kernel table.
inline double single_shot_ch_substitution(const InversionKernel &kernel, const OutcomeIndex &xi,
                                          const OutcomeIndex &xp) {
    auto pair = [&](Label a, Label b) {
        double acc = 0;
        for (const auto &z : all_outcomes()) {
            if (component(z, a) == component(xi, a) && component(z, b) == component(xi, b)) {
                acc += kernel(z, xp);
            }
        }
        return acc;
    };
    auto single = [&](Label l) {
        double acc = 0;
        for (const auto &z : all_outcomes()) {
            if (component(z, l) == component(xi, l)) {
                acc += kernel(z, xp);
            }
        }
        return acc;
    };
    return ch_combination(pair(Label::X, Label::U), pair(Label::X, Label::V), pair(Label::Y, Label::U),
                          pair(Label::Y, Label::V), single(Label::Y), single(Label::U));
}

inline double single_shot_ch_closed_form(const GammaSet &g, const OutcomeIndex &xi, const OutcomeIndex &xp) {
    double ax = xi.x * xp.x;
    double ay = xi.y * xp.y;
    double au = xi.u * xp.u;
    double av = xi.v * xp.v;
    return -0.5 - ax * av / (4 * g.x() * g.v()) + ay * av / (4 * g.y() * g.v()) + ax * au / (4 * g.x() * g.u()) +
           ay * au / (4 * g.y() * g.u());
}

/// Single-shot CH value; cross-checks both routes and returns the closed form.
inline double single_shot_ch(const InversionKernel &kernel, const OutcomeIndex &xi, const OutcomeIndex &xp) {
    double by_sum = single_shot_ch_substitution(kernel, xi, xp);
    double closed = single_shot_ch_closed_form(kernel.gammas(), xi, xp);
    double scale = 0;
    for (const auto &z : all_outcomes()) {
        scale += std::abs(kernel(z, xp));
    }
    detail::require_agreement(by_sum, closed, 6 * scale, "single-shot CH");
    return closed;
}

/// C(xi|xi') for all pairs, row xi and column xi'.
inline Grid16x16 single_shot_ch_grid(const InversionKernel &kernel) {
    Grid16x16 g{};
    for (const auto &xi : all_outcomes()) {
        for (const auto &xp : all_outcomes()) {
            g[xi.flat()][xp.flat()] = single_shot_ch(kernel, xi, xp);
        }
    }
    return g;
}

/// C(xi) = sum_xi' C(xi|xi') p(xi').
inline double ensemble_ch(const InversionKernel &kernel, const Distribution16 &observed, const OutcomeIndex &xi) {
    double acc = 0;
    for (const auto &xp : all_outcomes()) {
        acc += single_shot_ch(kernel, xi, xp) * observed[xp.flat()];
    }
    return acc;
}

/// C(xi) from sharp-projector Born probabilities.
inline double ensemble_ch_sharp(const DensityMatrix &rho, const ObservableSet &obs, const OutcomeIndex &xi) {
    SharpProbabilities p{rho, obs};
    return ch_combination(p.pair(Label::X, xi.x, Label::U, xi.u), p.pair(Label::X, xi.x, Label::V, xi.v),
                          p.pair(Label::Y, xi.y, Label::U, xi.u), p.pair(Label::Y, xi.y, Label::V, xi.v),
                          p.single(Label::Y, xi.y), p.single(Label::U, xi.u));
}

struct ChshReport {
    Distribution16 s_values{};
    double ensemble_S = 0;
    /// sum_xi' S(xi') p~(xi'), must equal ensemble_S.
    double ensemble_S_from_observed = 0;
    Distribution16 single_shot_S{};
    double bound = kChshBound;
};

struct ChReport {
    Grid16x16 single_shot_C{};
    Distribution16 ensemble_C{};
    double upper_bound = kChUpperBound;
    double lower_bound = kChLowerBound;
};

/// Builds the CHSH report and enforces sum_xi s p(xi) = sum_xi' S(xi') p~(xi').
inline ChshReport chsh_report(const InversionKernel &kernel, const Distribution16 &observed) {
    ChshReport r;
    r.s_values = s_values();
    r.single_shot_S = single_shot_chsh_table(kernel);
    r.ensemble_S = ensemble_chsh(invert_distribution(kernel, observed));
    double scale = 0;
    for (std::size_t k = 0; k < kNumOutcomes; ++k) {
        r.ensemble_S_from_observed += r.single_shot_S[k] * observed[k];
        scale += std::abs(r.single_shot_S[k] * observed[k]);
    }
    detail::require_agreement(r.ensemble_S, r.ensemble_S_from_observed, scale, "ensemble CHSH");
    return r;
}

inline ChReport ch_report(const InversionKernel &kernel, const Distribution16 &observed) {
    ChReport r;
    r.single_shot_C = single_shot_ch_grid(kernel);
    for (std::size_t i = 0; i < kNumOutcomes; ++i) {
        double acc = 0;
        for (std::size_t j = 0; j < kNumOutcomes; ++j) {
            acc += r.single_shot_C[i][j] * observed[j];
        }
        r.ensemble_C[i] = acc;
    }
    return r;
}

/// As above, additionally checking each C(xi) against sharp Born probabilities.
inline ChReport ch_report(const InversionKernel &kernel, const Distribution16 &observed, const DensityMatrix &rho,
                          const ObservableSet &obs) {
    ChReport r = ch_report(kernel, observed);
    for (const auto &xi : all_outcomes()) {
        double sharp = ensemble_ch_sharp(rho, obs, xi);
        double scale = 0;
        for (std::size_t j = 0; j < kNumOutcomes; ++j) {
            scale += std::abs(r.single_shot_C[xi.flat()][j] * observed[j]);
        }
        detail::require_agreement(r.ensemble_C[xi.flat()], sharp, scale, "ensemble CH");
    }
    return r;
}

enum class BoundStatus { Satisfied, Boundary, Violated };

inline const char *status_name(BoundStatus s) {
    switch (s) {
        case BoundStatus::Satisfied:
            return "satisfied";
        case BoundStatus::Boundary:
            return "satisfied (boundary)";
        case BoundStatus::Violated:
            return "violated";
    }
    return "?";
}

/// Classical-bound verdict. `margin` is the signed excess over the nearest
/// bound: positive when violated, negative slack otherwise.
struct Verdict {
    std::string quantity;
    double value = 0;
    BoundStatus status = BoundStatus::Satisfied;
    std::string bound;
    double margin = 0;

    bool violated() const {
        return status == BoundStatus::Violated;
    }
};

/// |S| <= 2.
inline Verdict check_chsh(double s, std::string quantity = "S") {
    Verdict v{std::move(quantity), s, BoundStatus::Satisfied, "|S| <= 2", std::abs(s) - kChshBound};
    if (std::abs(v.margin) <= kBoundaryTol) {
        v.status = BoundStatus::Boundary;
    } else if (v.margin > 0) {
        v.status = BoundStatus::Violated;
    }
    return v;
}

/// 0 >= C >= -1.
inline Verdict check_ch(double c, std::string quantity = "C") {
    double over = c - kChUpperBound;
    double under = kChLowerBound - c;
    Verdict v{std::move(quantity), c, BoundStatus::Satisfied, "", 0};
    if (over >= under) {
        v.bound = "C <= 0";
        v.margin = over;
    } else {
        v.bound = "C >= -1";
        v.margin = under;
    }
    if (std::abs(v.margin) <= kBoundaryTol) {
        v.status = BoundStatus::Boundary;
    } else if (v.margin > 0) {
        v.status = BoundStatus::Violated;
    }
    return v;
}

struct ChshVerdicts {
    Verdict ensemble;
    std::vector<Verdict> single_shot;
};

struct ChVerdicts {
    std::vector<Verdict> ensemble;
    std::size_t single_shot_violated = 0;
    std::size_t single_shot_boundary = 0;
    std::size_t single_shot_satisfied = 0;
};

inline ChshVerdicts classical_bounds_check(const ChshReport &r) {
    ChshVerdicts v{check_chsh(r.ensemble_S, "ensemble_S"), {}};
    for (const auto &xp : all_outcomes()) {
        v.single_shot.push_back(check_chsh(r.single_shot_S[xp.flat()], "S" + xp.str()));
    }
    return v;
}

inline ChVerdicts classical_bounds_check(const ChReport &r) {
    ChVerdicts v;
    for (const auto &xi : all_outcomes()) {
        v.ensemble.push_back(check_ch(r.ensemble_C[xi.flat()], "C" + xi.str()));
        for (const auto &xp : all_outcomes()) {
            switch (check_ch(r.single_shot_C[xi.flat()][xp.flat()]).status) {
                case BoundStatus::Violated:
                    ++v.single_shot_violated;
                    break;
                case BoundStatus::Boundary:
                    ++v.single_shot_boundary;
                    break;
                case BoundStatus::Satisfied:
                    ++v.single_shot_satisfied;
                    break;
            }
        }
    }
    return v;
}

}  // namespace ssbell
