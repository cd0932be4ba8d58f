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

// Randomized invariant suite run by `ssbell validate`. Every check draws from
// a generator seeded with the reported seed, so any failure can be replayed.

#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ssbell/belltests.hpp"
#include "ssbell/inversion.hpp"
#include "ssbell/linalg.hpp"
#include "ssbell/measurement.hpp"
#include "ssbell/observables.hpp"
#include "ssbell/random.hpp"
#include "ssbell/sampler.hpp"
#include "ssbell/states.hpp"

namespace ssbell {

struct ValidationOptions {
    std::uint64_t seed = 0x5eedULL;
    std::size_t trials = 50;
    /// Corrupts one inversion-kernel entry so that kernel-dependent checks fail.
    bool inject_fault = false;
};

struct CheckResult {
    std::string name;
    std::size_t assertions = 0;
    std::vector<std::string> failures;

    bool passed() const {
        return failures.empty();
    }
};

struct ValidationReport {
    std::uint64_t seed = 0;
    std::vector<CheckResult> checks;

    bool passed() const {
        for (const auto &c : checks) {
            if (!c.passed()) {
                return false;
            }
        }
        return true;
    }
    std::size_t assertions() const {
        std::size_t n = 0;
        for (const auto &c : checks) {
            n += c.assertions;
        }
        return n;
    }
};

namespace detail {

class Checker {
   public:
    explicit Checker(CheckResult &r) : r_(r) {
    }
    void expect(bool ok, const std::string &what) {
        ++r_.assertions;
        if (!ok && r_.failures.size() < 5) {
            r_.failures.push_back(what);
        }
    }
    void near(double a, double b, double tol, const std::string &what) {
        std::ostringstream msg;
        msg.precision(17);
        msg << what << ": " << a << " vs " << b << " (tol " << tol << ")";
        expect(std::abs(a - b) <= tol, msg.str());
    }

   private:
    CheckResult &r_;
};

}  // namespace detail

inline ValidationReport run_validation(const ValidationOptions &opt) {
    using detail::Checker;
    ValidationReport report;
    report.seed = opt.seed;
    std::mt19937_64 gen(opt.seed);
    const double inv_sqrt2 = 1 / std::sqrt(2.0);

    auto make_kernel = [&](const GammaSet &g) {
        InversionKernel k = build_kernel(g);
        if (opt.inject_fault) {
            k = k.with_corrupted_entry(OutcomeIndex::from_flat(0), OutcomeIndex::from_flat(0), 1e-3);
        }
        return k;
    };

    auto run = [&](const std::string &name, const std::function<void(Checker &)> &body) {
        CheckResult r{name, 0, {}};
        Checker c(r);
        try {
            body(c);
        } catch (const std::exception &e) {
            r.failures.push_back(std::string("exception: ") + e.what());
        }
        report.checks.push_back(std::move(r));
    };

    run("linalg.kron_bilinear", [&](Checker &c) {
        for (std::size_t t = 0; t < opt.trials; ++t) {
            auto a = random::complex_gaussian<2>(gen), b = random::complex_gaussian<2>(gen);
            auto d = random::complex_gaussian<2>(gen);
            c.expect(max_abs_diff(kron(a + b, d), kron(a, d) + kron(b, d)) <= 1e-12, "kron(a+b,c)");
            c.expect(std::abs(kron(a, b).trace() - a.trace() * b.trace()) <= 1e-12, "tr kron");
        }
    });

    run("linalg.eigen_sum_trace", [&](Checker &c) {
        for (std::size_t t = 0; t < opt.trials; ++t) {
            auto h = random::hermitian<4>(gen);
            auto ev = eigenvalues_hermitian(h);
            c.near(ev[0] + ev[1] + ev[2] + ev[3], h.trace().real(), 1e-10, "sum of eigenvalues");
        }
    });

    run("states.constructors", [&](Checker &c) {
        for (BellState b : {BellState::PhiPlus, BellState::PhiMinus, BellState::PsiPlus, BellState::PsiMinus}) {
            c.near(bell_state(b).purity(), 1, 1e-12, "Bell purity");
        }
        for (std::size_t t = 0; t < opt.trials; ++t) {
            double eta = random::uniform(gen, 0, 1);
            c.near(werner_state(eta).matrix().trace().real(), 1, 1e-12, "Werner trace");
            product_state(random::qubit_density_matrix(gen), random::qubit_density_matrix(gen));
            c.expect(true, "product state");
        }
    });

    run("observables.sharp_povm", [&](Checker &c) {
        for (std::size_t t = 0; t < opt.trials; ++t) {
            auto obs = ObservableSpec::make(Label::X, random::unit_vector(gen));
            SharpPovm p = sharp_povm(obs);
            c.expect(max_abs_diff(p.element_plus * p.element_plus, p.element_plus) <= 1e-10, "projector");
            c.expect(max_abs_diff(p.element_plus + p.element_minus, pauli::I) <= 1e-12, "completeness");
            c.near(trace_product(p.element_plus - p.element_minus, obs.op()).real() / 2, 1, 1e-12, "expectation");
        }
    });

    run("measurement.povm_structure", [&](Checker &c) {
        for (std::size_t t = 0; t < opt.trials; ++t) {
            auto s = random::admissible_settings(gen);
            JointPovm m = build_measurement(s.observables, s.gammas);
            Matrix4 sum{};
            for (const auto &e : m.product) {
                sum += e;
                c.expect(min_eigenvalue_hermitian(e) >= -kPsdTol, "product element PSD");
            }
            c.expect(max_abs_diff(sum, Matrix4::identity()) <= 1e-12, "product completeness");
            for (Label l : kAllLabels) {
                for (int w : {1, -1}) {
                    Matrix2 expect =
                        (pauli::I + s.observables.get(l).op() * (s.gammas.get(l) * w)) * 0.5;
                    c.expect(max_abs_diff(m.marginal(l, w), expect) <= 1e-12, "marginal");
                }
            }
        }
    });

    run("measurement.marginal_statistics_and_linearity", [&](Checker &c) {
        for (std::size_t t = 0; t < opt.trials; ++t) {
            auto s = random::admissible_settings(gen);
            JointPovm m = build_measurement(s.observables, s.gammas);
            DensityMatrix r1 = random::density_matrix(gen), r2 = random::density_matrix(gen);
            Distribution16 p1 = observed_statistics(r1, m), p2 = observed_statistics(r2, m);
            for (Label l : kAllLabels) {
                Matrix2 e = (pauli::I + s.observables.get(l).op() * s.gammas.get(l)) * 0.5;
                Matrix4 op = on_subsystem_a(l) ? kron(e, pauli::I) : kron(pauli::I, e);
                double marg = 0;
                for (const auto &o : all_outcomes()) {
                    if (component(o, l) == 1) {
                        marg += p1[o.flat()];
                    }
                }
                c.near(marg, trace_product(r1.matrix(), op).real(), 1e-12, "marginal statistics");
            }
            double alpha = random::uniform(gen, 0, 1);
            DensityMatrix mix = DensityMatrix::from_matrix(r1.matrix() * alpha + r2.matrix() * (1 - alpha));
            Distribution16 pm = observed_statistics(mix, m);
            for (std::size_t k = 0; k < kNumOutcomes; ++k) {
                c.near(pm[k], alpha * p1[k] + (1 - alpha) * p2[k], 1e-12, "linearity");
            }
        }
    });

    run("inversion.kernel_columns", [&](Checker &c) {
        for (std::size_t t = 0; t < opt.trials; ++t) {
            InversionKernel k = make_kernel(random::admissible_settings(gen).gammas);
            for (std::size_t j = 0; j < kNumOutcomes; ++j) {
                double col = 0;
                for (std::size_t i = 0; i < kNumOutcomes; ++i) {
                    col += k.table()[i][j];
                }
                c.near(col, 1, 1e-12, "kernel column sum");
            }
        }
    });

    run("inversion.exact_statistics", [&](Checker &c) {
        for (std::size_t t = 0; t < opt.trials; ++t) {
            auto s = random::admissible_settings(gen);
            JointPovm m = build_measurement(s.observables, s.gammas);
            InversionKernel k = make_kernel(s.gammas);
            DensityMatrix rho = random::density_matrix(gen);
            QuasiDistribution q = invert_distribution(k, observed_statistics(rho, m));
            SharpProbabilities sharp{rho, s.observables};
            for (Label l : kAllLabels) {
                SharpPovm rec = reconstructed_sharp_povm(k, m, l);
                SharpPovm ref = sharp_povm(s.observables.get(l));
                c.expect(max_abs_diff(rec.element_plus, ref.element_plus) <= 1e-12, "reconstructed projector");
                auto single = single_marginal(q, l);
                c.near(single[0], sharp.single(l, 1), 1e-10, "single marginal");
            }
            for (Label a : {Label::X, Label::Y}) {
                for (Label b : {Label::U, Label::V}) {
                    auto cm = cross_marginal(q, a, b);
                    for (int wa : {1, -1}) {
                        for (int wb : {1, -1}) {
                            c.near(cm[sign_bit(wa) * 2 + sign_bit(wb)], sharp.pair(a, wa, b, wb), 1e-10,
                                   "cross marginal");
                        }
                    }
                }
            }
        }
    });

    run("inversion.negativity_iff_violation", [&](Checker &c) {
        ObservableSet obs = chsh_optimal_angles();
        GammaSet g = GammaSet::equal(inv_sqrt2);
        JointPovm m = build_measurement(obs, g);
        InversionKernel k = make_kernel(g);
        for (std::size_t t = 0; t < opt.trials; ++t) {
            double eta = random::uniform(gen, 0, 1);
            QuasiDistribution q = invert_distribution(k, observed_statistics(werner_state(eta), m));
            bool negative = q.min_entry() < -1e-10;
            bool violates = std::abs(ensemble_chsh(q)) > 2 + 1e-10;
            c.expect(negative == violates, "negativity <=> violation at eta " + std::to_string(eta));
        }
    });

    run("belltests.single_shot_chsh", [&](Checker &c) {
        for (double gamma : {0.99, 0.9, 0.8, inv_sqrt2, 0.5}) {
            InversionKernel k = make_kernel(GammaSet::equal(gamma));
            for (const auto &xp : all_outcomes()) {
                c.near(std::abs(single_shot_chsh(k, xp)), 2 / (gamma * gamma), 1e-12, "|S(xi')| = 2/gamma^2");
            }
        }
        for (std::size_t t = 0; t < opt.trials; ++t) {
            InversionKernel k = make_kernel(random::orthogonal_pair_gammas(gen));
            for (const auto &xp : all_outcomes()) {
                c.near(single_shot_chsh_sum(k, xp), single_shot_chsh_closed_form(k.gammas(), xp), 1e-10,
                       "CHSH sum vs closed form");
                for (const auto &xi : all_outcomes()) {
                    c.near(single_shot_ch_substitution(k, xi, xp), single_shot_ch_closed_form(k.gammas(), xi, xp),
                           1e-10, "CH substitution vs closed form");
                }
            }
        }
    });

    run("belltests.ensemble_consistency", [&](Checker &c) {
        for (std::size_t t = 0; t < opt.trials; ++t) {
            auto s = random::admissible_settings(gen);
            JointPovm m = build_measurement(s.observables, s.gammas);
            InversionKernel k = make_kernel(s.gammas);
            DensityMatrix rho = random::density_matrix(gen);
            Distribution16 p = observed_statistics(rho, m);
            ChshReport chsh = chsh_report(k, p);
            c.near(chsh.ensemble_S, chsh.ensemble_S_from_observed, 1e-10, "CHSH decompositions");
            c.near(chsh.ensemble_S, ensemble_chsh_sharp(rho, s.observables), 1e-10, "CHSH vs sharp");
            ChReport ch = ch_report(k, p);
            for (const auto &xi : all_outcomes()) {
                c.near(ch.ensemble_C[xi.flat()], ensemble_ch_sharp(rho, s.observables, xi), 1e-10,
                       "CH decompositions");
            }
        }
    });

    run("belltests.sharp_limit_and_tsirelson", [&](Checker &c) {
        InversionKernel k = make_kernel(GammaSet::equal(1));
        for (const auto &xp : all_outcomes()) {
            c.near(single_shot_chsh(k, xp), s_of_xi(xp), 1e-12, "sharp S(xi') = s(xi')");
            for (const auto &xi : all_outcomes()) {
                double v = single_shot_ch(k, xi, xp);
                c.expect(std::abs(v) <= 1e-12 || std::abs(v + 1) <= 1e-12, "sharp C in {0,-1}");
                c.expect(!check_ch(v).violated(), "sharp C not violated");
            }
        }
        DensityMatrix singlet = bell_state(BellState::PsiMinus);
        for (std::size_t t = 0; t < opt.trials; ++t) {
            ObservableSet obs{ObservableSpec::make(Label::X, random::unit_vector(gen)),
                              ObservableSpec::make(Label::Y, random::unit_vector(gen)),
                              ObservableSpec::make(Label::U, random::unit_vector(gen)),
                              ObservableSpec::make(Label::V, random::unit_vector(gen))};
            c.expect(std::abs(ensemble_chsh_sharp(singlet, obs)) <= 2 * std::numbers::sqrt2 + 1e-9, "Tsirelson");
        }
    });

    run("sampler.determinism_and_paths", [&](Checker &c) {
        GammaSet g = GammaSet::equal(inv_sqrt2);
        JointPovm m = build_measurement(chsh_optimal_angles(), g);
        InversionKernel k = make_kernel(g);
        Distribution16 p = observed_statistics(random::density_matrix(gen), m);
        std::uint64_t seed = gen();
        auto a = sample_shots(p, 2000, RngConfig{seed, 3});
        auto b = sample_shots(p, 2000, RngConfig{seed, 3});
        c.expect(a == b, "identical RngConfig gives identical shots");
        double via_shots = ensemble_from_shots(k, a);
        double via_freq = ensemble_chsh(invert_distribution(k, empirical_frequencies(a)));
        c.near(via_shots, via_freq, 1e-10, "shot mean vs inverted frequencies");
    });

    return report;
}

}  // namespace ssbell
