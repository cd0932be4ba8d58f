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

// Experiment configuration, read from a single JSON document.
//
//   {
//     "state": {"kind": "bell", "which": "psi_minus"}
//            | {"kind": "werner", "eta": 0.9}
//            | {"kind": "custom", "real": [[4x4]], "imag": [[4x4]]},
//     "observables": {"x": [nx,ny,nz], "y": [...], "u": [...], "v": [...]},
//     "gammas": {"x": gx, "y": gy, "u": gu, "v": gv} | g,
//     "shots": 1000,
//     "seed": 42,
//     "streams": 1,
//     "outputs": {"exact": "exact.json", "shots_csv": "shots.csv",
//                 "summary": "summary.json", "sweep": "sweep.csv"},
//     "sweep": {"axis": "gamma" | "werner_eta",
//               "grid": [..] | {"from": a, "to": b, "points": n}}
//   }
//
// Every field is optional. Defaults: singlet state, the CHSH-optimal
// observables, all gammas 1/sqrt2, zero shots, seed 0, one stream. Bloch
// vectors are given directly; angles are not accepted.

#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "ssbell/error.hpp"
#include "ssbell/measurement.hpp"
#include "ssbell/observables.hpp"
#include "ssbell/states.hpp"

namespace ssbell {


struct NamedBellState {
    BellState which = BellState::PsiMinus;
};
struct WernerSpec {
    double eta = 1;
};
struct CustomSpec {
    Table4 re{};
    Table4 im{};
};
using StateSpec = std::variant<NamedBellState, WernerSpec, CustomSpec>;

enum class SweepAxis { Gamma, WernerEta };

struct SweepSpec {
    SweepAxis axis = SweepAxis::Gamma;
    std::vector<double> grid;
};

struct OutputPaths {
    std::string exact = "exact.json";
    std::string shots_csv = "shots.csv";
    std::string summary = "summary.json";
    std::string sweep = "sweep.csv";
};

struct ExperimentConfig {
    StateSpec state = NamedBellState{};
    std::array<Vec3, 4> observables{};
    std::array<double, 4> gammas{};
    std::uint64_t shots = 0;
    std::uint64_t seed = 0;
    std::size_t streams = 1;
    OutputPaths outputs;
    std::optional<SweepSpec> sweep;

    ExperimentConfig() {
        ObservableSet def = chsh_optimal_angles();
        observables = {def.x.bloch(), def.y.bloch(), def.u.bloch(), def.v.bloch()};
        gammas.fill(1 / std::sqrt(2.0));
    }

    DensityMatrix build_state() const;
    ObservableSet build_observables() const {
        return ObservableSet{ObservableSpec::make(Label::X, observables[0]),
                             ObservableSpec::make(Label::Y, observables[1]),
                             ObservableSpec::make(Label::U, observables[2]),
                             ObservableSpec::make(Label::V, observables[3])};
    }
    GammaSet build_gammas() const {
        return GammaSet::make(gammas[0], gammas[1], gammas[2], gammas[3]);
    }
};

inline const char *bell_state_name(BellState b) {
    switch (b) {
        case BellState::PhiPlus:
            return "phi_plus";
        case BellState::PhiMinus:
            return "phi_minus";
        case BellState::PsiPlus:
            return "psi_plus";
        case BellState::PsiMinus:
            return "psi_minus";
    }
    return "?";
}

inline DensityMatrix ExperimentConfig::build_state() const {
    struct Visitor {
        DensityMatrix operator()(const NamedBellState &b) const {
            return bell_state(b.which);
        }
        DensityMatrix operator()(const WernerSpec &w) const {
            return werner_state(w.eta);
        }
        DensityMatrix operator()(const CustomSpec &c) const {
            return custom_state(c.re, c.im);
        }
    };
    return std::visit(Visitor{}, state);
}

namespace detail {

using nlohmann::json;

[[noreturn]] inline void config_fail(const std::string &field, const std::string &what) {
    throw ConfigError(field + ": " + what);
}

inline double get_real(const json &j, const std::string &field) {
    if (!j.is_number()) {
        config_fail(field, "expected a number");
    }
    double v = j.get<double>();
    if (!std::isfinite(v)) {
        config_fail(field, "must be finite");
    }
    return v;
}

inline std::uint64_t get_count(const json &j, const std::string &field) {
    if (j.is_number_unsigned()) {
        return j.get<std::uint64_t>();
    }
    if (j.is_number_integer() && j.get<std::int64_t>() >= 0) {
        return static_cast<std::uint64_t>(j.get<std::int64_t>());
    }
    config_fail(field, "expected a nonnegative integer");
}

inline Vec3 get_vec3(const json &j, const std::string &field) {
    if (!j.is_array() || j.size() != 3) {
        config_fail(field, "expected an array of 3 numbers");
    }
    return {get_real(j[0], field + "[0]"), get_real(j[1], field + "[1]"), get_real(j[2], field + "[2]")};
}

inline Table4 get_table4(const json &j, const std::string &field) {
    if (!j.is_array() || j.size() != 4) {
        config_fail(field, "expected a 4x4 array");
    }
    Table4 t{};
    for (std::size_t i = 0; i < 4; ++i) {
        if (!j[i].is_array() || j[i].size() != 4) {
            config_fail(field + "[" + std::to_string(i) + "]", "expected 4 numbers");
        }
        for (std::size_t k = 0; k < 4; ++k) {
            t[i][k] = get_real(j[i][k], field + "[" + std::to_string(i) + "][" + std::to_string(k) + "]");
        }
    }
    return t;
}

inline StateSpec parse_state(const json &j) {
    if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) {
        config_fail("state", "expected an object with a string \"kind\"");
    }
    std::string kind = j["kind"].get<std::string>();
    if (kind == "bell") {
        std::string which = j.value("which", std::string("psi_minus"));
        for (BellState b : {BellState::PhiPlus, BellState::PhiMinus, BellState::PsiPlus, BellState::PsiMinus}) {
            if (which == bell_state_name(b)) {
                return NamedBellState{b};
            }
        }
        config_fail("state.which", "unknown Bell state \"" + which + "\"");
    }
    if (kind == "werner") {
        if (!j.contains("eta")) {
            config_fail("state.eta", "missing");
        }
        return WernerSpec{get_real(j["eta"], "state.eta")};
    }
    if (kind == "custom") {
        if (!j.contains("real")) {
            config_fail("state.real", "missing");
        }
        CustomSpec c;
        c.re = get_table4(j["real"], "state.real");
        if (j.contains("imag")) {
            c.im = get_table4(j["imag"], "state.imag");
        }
        return c;
    }
    config_fail("state.kind", "unknown kind \"" + kind + "\" (expected bell, werner or custom)");
}

inline std::vector<double> parse_grid(const json &j) {
    if (j.is_array()) {
        std::vector<double> g;
        for (std::size_t i = 0; i < j.size(); ++i) {
            g.push_back(get_real(j[i], "sweep.grid[" + std::to_string(i) + "]"));
        }
        return g;
    }
    if (j.is_object()) {
        double from = get_real(j.at("from"), "sweep.grid.from");
        double to = get_real(j.at("to"), "sweep.grid.to");
        std::uint64_t points = get_count(j.at("points"), "sweep.grid.points");
        if (points < 2) {
            config_fail("sweep.grid.points", "need at least 2 points");
        }
        std::vector<double> g(points);
        for (std::uint64_t i = 0; i < points; ++i) {
            g[i] = from + (to - from) * static_cast<double>(i) / static_cast<double>(points - 1);
        }
        return g;
    }
    config_fail("sweep.grid", "expected an array or {from, to, points}");
}

}  // namespace detail

inline SweepAxis parse_sweep_axis(const std::string &name) {
    if (name == "gamma") {
        return SweepAxis::Gamma;
    }
    if (name == "werner_eta") {
        return SweepAxis::WernerEta;
    }
    throw ConfigError("sweep.axis: unknown axis \"" + name + "\" (expected gamma or werner_eta)");
}

/// Checks every component so that no computation starts on a bad config.
/// Throws ConfigError naming the offending field.
inline void validate_config(const ExperimentConfig &c) {
    auto wrap = [](const std::string &field, auto &&fn) {
        try {
            fn();
        } catch (const ConfigError &) {
            throw;
        } catch (const Error &e) {
            throw ConfigError(field + ": " + e.what());
        }
    };
    wrap("state", [&] { c.build_state(); });
    wrap("observables", [&] { c.build_observables(); });
    const char *names[] = {"x", "y", "u", "v"};
    for (std::size_t i = 0; i < 4; ++i) {
        wrap(std::string("gammas.") + names[i], [&] { require_gamma(c.gammas[i], names[i]); });
    }
    // Sweeps over gamma replace the configured gammas, so only check positivity
    // for the configured ones when they will actually be used.
    if (!c.sweep || c.sweep->axis != SweepAxis::Gamma) {
        wrap("gammas", [&] { build_measurement(c.build_observables(), c.build_gammas()); });
    }
    if (c.streams == 0) {
        throw ConfigError("streams: must be positive");
    }
    if (c.sweep) {
        const char *axis = c.sweep->axis == SweepAxis::Gamma ? "gamma" : "werner_eta";
        if (c.sweep->grid.empty()) {
            throw ConfigError("sweep.grid: empty");
        }
        for (std::size_t i = 0; i < c.sweep->grid.size(); ++i) {
            double g = c.sweep->grid[i];
            std::string field = "sweep.grid[" + std::to_string(i) + "]";
            if (c.sweep->axis == SweepAxis::Gamma) {
                wrap(field, [&] { require_gamma(g, "sweep"); });
            } else if (!(g >= 0 && g <= 1)) {
                throw ConfigError(field + ": " + axis + " value " + std::to_string(g) + " outside [0, 1]");
            }
        }
    }
}

namespace detail {
inline ExperimentConfig parse_config_fields(const nlohmann::json &j) {
    if (!j.is_object()) {
        config_fail("<root>", "expected a JSON object");
    }
    ExperimentConfig c;
    if (j.contains("state")) {
        c.state = detail::parse_state(j["state"]);
    }
    if (j.contains("observables")) {
        const auto &o = j["observables"];
        const char *names[] = {"x", "y", "u", "v"};
        for (std::size_t i = 0; i < 4; ++i) {
            if (o.contains(names[i])) {
                c.observables[i] = detail::get_vec3(o[names[i]], std::string("observables.") + names[i]);
            }
        }
    }
    if (j.contains("gammas")) {
        const auto &g = j["gammas"];
        if (g.is_number()) {
            c.gammas.fill(detail::get_real(g, "gammas"));
        } else if (g.is_object()) {
            const char *names[] = {"x", "y", "u", "v"};
            for (std::size_t i = 0; i < 4; ++i) {
                if (g.contains(names[i])) {
                    c.gammas[i] = detail::get_real(g[names[i]], std::string("gammas.") + names[i]);
                }
            }
        } else {
            config_fail("gammas", "expected a number or an object with x, y, u, v");
        }
    }
    if (j.contains("shots")) {
        c.shots = detail::get_count(j["shots"], "shots");
    }
    if (j.contains("seed")) {
        c.seed = detail::get_count(j["seed"], "seed");
    }
    if (j.contains("streams")) {
        c.streams = detail::get_count(j["streams"], "streams");
    }
    if (j.contains("outputs")) {
        const auto &o = j["outputs"];
        auto path = [&](const char *key, std::string &dst) {
            if (o.contains(key)) {
                if (!o[key].is_string()) {
                    config_fail(std::string("outputs.") + key, "expected a string");
                }
                dst = o[key].get<std::string>();
            }
        };
        path("exact", c.outputs.exact);
        path("shots_csv", c.outputs.shots_csv);
        path("summary", c.outputs.summary);
        path("sweep", c.outputs.sweep);
    }
    if (j.contains("sweep")) {
        const auto &s = j["sweep"];
        SweepSpec spec;
        if (s.contains("axis")) {
            if (!s["axis"].is_string()) {
                config_fail("sweep.axis", "expected a string");
            }
            spec.axis = parse_sweep_axis(s["axis"].get<std::string>());
        }
        if (s.contains("grid")) {
            spec.grid = detail::parse_grid(s["grid"]);
        }
        c.sweep = spec;
    }
    return c;
}
}  // namespace detail

/// Parses a config document. Throws ConfigError naming the offending field.
inline ExperimentConfig parse_config(const nlohmann::json &j) {
    try {
        return detail::parse_config_fields(j);
    } catch (const nlohmann::json::exception &e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
}

inline ExperimentConfig load_config(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("config: cannot open " + path);
    }
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error &e) {
        throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }
    return parse_config(j);
}

}  // namespace ssbell
