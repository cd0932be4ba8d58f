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

// Experiment orchestration behind the command-line driver: exact evaluation,
// sampled runs and parameter sweeps, plus their file formats.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <iostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "ssbell/belltests.hpp"
#include "ssbell/config.hpp"
#include "ssbell/inversion.hpp"
#include "ssbell/measurement.hpp"
#include "ssbell/sampler.hpp"

namespace ssbell {

using nlohmann::json;

inline constexpr double kGammaWarnThreshold = 0.1;
inline constexpr const char *kOrderingNote =
    "16-entry arrays are indexed by (x,y,u,v) in lexicographic order with +1 before -1";

/// Writes through a temporary sibling file and renames it into place, so a
/// failed write never leaves a partial file at `path`.
inline void write_atomically(const std::filesystem::path &path, const std::function<void(std::ostream &)> &body) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw Error("cannot open " + tmp.string() + " for writing");
        }
        try {
            body(out);
        } catch (...) {
            out.close();
            std::filesystem::remove(tmp);
            throw;
        }
        out.flush();
        if (!out) {
            out.close();
            std::filesystem::remove(tmp);
            throw Error("write to " + tmp.string() + " failed");
        }
    }
    std::filesystem::rename(tmp, path);
}

inline void write_json(const std::filesystem::path &path, const json &j) {
    write_atomically(path, [&](std::ostream &out) { out << j.dump(2) << '\n'; });
}

/// Warnings for gamma factors small enough to blow up single-shot values.
inline std::vector<std::string> gamma_warnings(const std::array<double, 4> &gammas) {
    std::vector<std::string> w;
    const char *names[] = {"x", "y", "u", "v"};
    for (std::size_t i = 0; i < 4; ++i) {
        if (std::abs(gammas[i]) < kGammaWarnThreshold) {
            std::ostringstream msg;
            msg << "gamma_" << names[i] << " = " << gammas[i]
                << " is small: single-shot values scale as 1/gamma^2 and sampling variance as 1/gamma^4";
            w.push_back(msg.str());
        }
    }
    return w;
}

namespace detail {

inline json to_json(const Distribution16 &d) {
    return json(std::vector<double>(d.begin(), d.end()));
}

inline json to_json(const Grid16x16 &g) {
    json rows = json::array();
    for (const auto &row : g) {
        rows.push_back(std::vector<double>(row.begin(), row.end()));
    }
    return rows;
}

inline json to_json(const Verdict &v) {
    return json{{"quantity", v.quantity},
                {"value", v.value},
                {"status", status_name(v.status)},
                {"bound", v.bound},
                {"margin", v.margin}};
}

inline json outcomes_json() {
    json a = json::array();
    for (const auto &o : all_outcomes()) {
        a.push_back({o.x, o.y, o.u, o.v});
    }
    return a;
}

inline json config_echo(const ExperimentConfig &c) {
    json state;
    std::visit(
        [&](const auto &s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, NamedBellState>) {
                state = {{"kind", "bell"}, {"which", bell_state_name(s.which)}};
            } else if constexpr (std::is_same_v<T, WernerSpec>) {
                state = {{"kind", "werner"}, {"eta", s.eta}};
            } else {
                state = {{"kind", "custom"}, {"real", s.re}, {"imag", s.im}};
            }
        },
        c.state);
    return json{{"state", state},
                {"observables",
                 {{"x", c.observables[0]}, {"y", c.observables[1]}, {"u", c.observables[2]}, {"v", c.observables[3]}}},
                {"gammas", {{"x", c.gammas[0]}, {"y", c.gammas[1]}, {"u", c.gammas[2]}, {"v", c.gammas[3]}}}};
}

}  // namespace detail

/// Everything computable without sampling, as a JSON document.
inline json exact_results(const ExperimentConfig &cfg) {
    validate_config(cfg);
    DensityMatrix rho = cfg.build_state();
    ObservableSet obs = cfg.build_observables();
    GammaSet gammas = cfg.build_gammas();
    JointPovm povm = build_measurement(obs, gammas);
    InversionKernel kernel = build_kernel(gammas);

    Distribution16 observed = observed_statistics(rho, povm);
    QuasiDistribution quasi = invert_distribution(kernel, observed);
    ChshReport chsh = chsh_report(kernel, observed);
    ChReport ch = ch_report(kernel, observed, rho, obs);
    ChshVerdicts chsh_verdicts = classical_bounds_check(chsh);
    ChVerdicts ch_verdicts = classical_bounds_check(ch);

    json cross = json::object();
    for (Label a : {Label::X, Label::Y}) {
        for (Label b : {Label::U, Label::V}) {
            auto m = cross_marginal(quasi, a, b);
            cross[std::string(label_name(a)) + label_name(b)] = std::vector<double>(m.begin(), m.end());
        }
    }

    json single_S = json::array();
    for (const auto &v : chsh_verdicts.single_shot) {
        single_S.push_back(detail::to_json(v));
    }
    json ens_C = json::array();
    for (const auto &v : ch_verdicts.ensemble) {
        ens_C.push_back(detail::to_json(v));
    }

    return json{
        {"ordering", kOrderingNote},
        {"outcomes", detail::outcomes_json()},
        {"config", detail::config_echo(cfg)},
        {"warnings", gamma_warnings(cfg.gammas)},
        {"observed", detail::to_json(observed)},
        {"quasi", detail::to_json(quasi.entries)},
        {"quasi_min_entry", quasi.min_entry()},
        {"quasi_negativity", quasi.negativity()},
        {"cross_marginals", cross},
        {"s_values", detail::to_json(chsh.s_values)},
        {"ensemble_S", chsh.ensemble_S},
        {"ensemble_S_from_observed", chsh.ensemble_S_from_observed},
        {"ensemble_S_sharp", ensemble_chsh_sharp(rho, obs)},
        {"single_shot_S", detail::to_json(chsh.single_shot_S)},
        {"ensemble_C", detail::to_json(ch.ensemble_C)},
        {"single_shot_C", detail::to_json(ch.single_shot_C)},
        {"verdicts",
         {{"ensemble_S", detail::to_json(chsh_verdicts.ensemble)},
          {"single_shot_S", single_S},
          {"ensemble_C", ens_C},
          {"single_shot_C",
           {{"violated", ch_verdicts.single_shot_violated},
            {"boundary", ch_verdicts.single_shot_boundary},
            {"satisfied", ch_verdicts.single_shot_satisfied},
            {"total", kNumOutcomes * kNumOutcomes}}}}},
    };
}

struct RunOutput {
    std::vector<ShotRecord> records;
    json summary;
};

/// Samples cfg.shots outcomes from the exact statistics and summarizes them.
inline RunOutput run_shots(const ExperimentConfig &cfg) {
    validate_config(cfg);
    if (cfg.shots == 0) {
        throw ConfigError("shots: run needs at least one shot");
    }
    DensityMatrix rho = cfg.build_state();
    GammaSet gammas = cfg.build_gammas();
    JointPovm povm = build_measurement(cfg.build_observables(), gammas);
    InversionKernel kernel = build_kernel(gammas);
    Distribution16 observed = observed_statistics(rho, povm);

    std::vector<OutcomeIndex> shots = sample_shots(observed, cfg.shots, RngConfig{cfg.seed, cfg.streams});
    RunOutput out;
    out.records = shot_records(kernel, shots);
    ConvergenceReport conv = convergence_report(kernel, shots);
    double exact_S = ensemble_chsh(invert_distribution(kernel, observed));

    Distribution16 freq = empirical_frequencies(shots);
    QuasiDistribution emp_quasi = invert_distribution(kernel, freq);

    json std_dev = conv.std_dev ? json(*conv.std_dev) : json(nullptr);
    json std_err = conv.std_error ? json(*conv.std_error) : json(nullptr);
    json deviation = conv.std_error && *conv.std_error > 0 ? json((conv.mean_S - exact_S) / *conv.std_error)
                                                           : json(nullptr);
    out.summary = json{
        {"ordering", kOrderingNote},
        {"config", detail::config_echo(cfg)},
        {"warnings", gamma_warnings(cfg.gammas)},
        {"shots", cfg.shots},
        {"seed", cfg.seed},
        {"streams", cfg.streams},
        {"empirical_S", conv.mean_S},
        {"std_dev", std_dev},
        {"std_error", std_err},
        {"exact_S", exact_S},
        {"deviation_in_std_errors", deviation},
        {"verdict", detail::to_json(check_chsh(conv.mean_S, "empirical_S"))},
        {"last_shot",
         {{"x_prime", shots.back().x},
          {"y_prime", shots.back().y},
          {"u_prime", shots.back().u},
          {"v_prime", shots.back().v},
          {"S_single", out.records.back().s_single}}},
        {"empirical_frequencies", detail::to_json(freq)},
        {"empirical_quasi", detail::to_json(emp_quasi.entries)},
        {"empirical_quasi_min_entry", emp_quasi.min_entry()},
        {"empirical_quasi_negative", emp_quasi.min_entry() < -kNormalizationTol},
        {"empirical_S_from_frequencies", ensemble_chsh(emp_quasi)},
    };
    return out;
}

inline constexpr const char *kSweepCsvHeader =
    "gamma,eta,physical,exact_S,abs_single_shot_S,ch_single_shot_max,ch_single_shot_min,ensemble_C_max,"
    "min_quasi_entry";

/// One CSV row per grid point. Gamma sweeps set all four gammas equal; grid
/// points outside the positive region of the joint POVM are evaluated with
/// the formal (indefinite) measurement and flagged physical = 0.
inline std::string sweep_csv(const ExperimentConfig &cfg) {
    if (!cfg.sweep) {
        throw ConfigError("sweep: missing sweep section (axis and grid)");
    }
    validate_config(cfg);
    ObservableSet obs = cfg.build_observables();
    std::ostringstream out;
    out << kSweepCsvHeader << '\n';
    for (double value : cfg.sweep->grid) {
        ExperimentConfig point = cfg;
        double eta = std::numeric_limits<double>::quiet_NaN();
        if (cfg.sweep->axis == SweepAxis::Gamma) {
            point.gammas.fill(value);
        } else {
            point.state = WernerSpec{value};
            eta = value;
        }
        if (const auto *w = std::get_if<WernerSpec>(&point.state)) {
            eta = w->eta;
        }
        DensityMatrix rho = point.build_state();
        GammaSet gammas = point.build_gammas();
        bool physical = true;
        JointPovm povm;
        try {
            povm = build_measurement(obs, gammas);
        } catch (const NotPositive &) {
            physical = false;
            povm = build_formal_measurement(obs, gammas);
        }
        InversionKernel kernel = build_kernel(gammas);
        Distribution16 observed = physical ? observed_statistics(rho, povm) : formal_statistics(rho, povm);
        ChshReport chsh = chsh_report(kernel, observed);
        ChReport ch = ch_report(kernel, observed);
        QuasiDistribution quasi = invert_distribution(kernel, observed);

        double abs_single = 0;
        for (double s : chsh.single_shot_S) {
            abs_single = std::max(abs_single, std::abs(s));
        }
        double ch_max = -1e300, ch_min = 1e300;
        for (const auto &row : ch.single_shot_C) {
            for (double c : row) {
                ch_max = std::max(ch_max, c);
                ch_min = std::min(ch_min, c);
            }
        }
        double ens_c_max = *std::max_element(ch.ensemble_C.begin(), ch.ensemble_C.end());

        out << format_real(point.gammas[0]) << ',' << (std::isnan(eta) ? std::string() : format_real(eta)) << ','
            << (physical ? 1 : 0) << ',' << format_real(chsh.ensemble_S) << ',' << format_real(abs_single) << ','
            << format_real(ch_max) << ',' << format_real(ch_min) << ',' << format_real(ens_c_max) << ','
            << format_real(quasi.min_entry()) << '\n';
    }
    return out.str();
}

}  // namespace ssbell
