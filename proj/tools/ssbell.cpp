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

// Command-line driver.
//
//   ssbell exact    --config cfg.json [--out DIR]
//   ssbell run      --config cfg.json [--out DIR] [--seed N] [--shots N]
//   ssbell sweep    --config cfg.json [--out DIR] [--axis gamma|werner_eta] [--grid a,b,c]
//   ssbell validate [--seed N] [--trials N] [--inject-fault]
//
// Exit status: 0 success, 1 validation or runtime failure, 2 config error.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ssbell/config.hpp"
#include "ssbell/experiment.hpp"
#include "ssbell/validation.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;

struct CommonOptions {
    std::string config_path;
    std::string out_dir = ".";
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> shots;
};

ssbell::ExperimentConfig load(const CommonOptions &o) {
    ssbell::ExperimentConfig cfg = o.config_path.empty() ? ssbell::ExperimentConfig{} : ssbell::load_config(o.config_path);
    if (o.seed) {
        cfg.seed = *o.seed;
    }
    if (o.shots) {
        cfg.shots = *o.shots;
    }
    return cfg;
}

std::filesystem::path output_path(const CommonOptions &o, const std::string &name) {
    std::filesystem::path dir(o.out_dir);
    std::filesystem::create_directories(dir);
    return dir / name;
}

void print_warnings(const ssbell::ExperimentConfig &cfg) {
    for (const auto &w : ssbell::gamma_warnings(cfg.gammas)) {
        std::cerr << "warning: " << w << '\n';
    }
}

int cmd_exact(const CommonOptions &o) {
    ssbell::ExperimentConfig cfg = load(o);
    print_warnings(cfg);
    auto j = ssbell::exact_results(cfg);
    auto path = output_path(o, cfg.outputs.exact);
    ssbell::write_json(path, j);
    std::cout << "ensemble_S = " << ssbell::format_real(j["ensemble_S"].get<double>()) << '\n'
              << "wrote " << path.string() << '\n';
    return kExitOk;
}

int cmd_run(const CommonOptions &o) {
    ssbell::ExperimentConfig cfg = load(o);
    print_warnings(cfg);
    ssbell::RunOutput r = ssbell::run_shots(cfg);
    auto csv = output_path(o, cfg.outputs.shots_csv);
    auto summary = output_path(o, cfg.outputs.summary);
    ssbell::write_atomically(csv, [&](std::ostream &out) { ssbell::write_shot_csv(out, r.records); });
    ssbell::write_json(summary, r.summary);
    std::cout << "empirical_S = " << ssbell::format_real(r.summary["empirical_S"].get<double>())
              << "  exact_S = " << ssbell::format_real(r.summary["exact_S"].get<double>()) << '\n'
              << "wrote " << csv.string() << " and " << summary.string() << '\n';
    return kExitOk;
}

int cmd_sweep(const CommonOptions &o, const std::string &axis, const std::string &grid) {
    ssbell::ExperimentConfig cfg = load(o);
    if (!axis.empty() || !grid.empty()) {
        ssbell::SweepSpec spec = cfg.sweep.value_or(ssbell::SweepSpec{});
        if (!axis.empty()) {
            spec.axis = ssbell::parse_sweep_axis(axis);
        }
        if (!grid.empty()) {
            spec.grid.clear();
            std::stringstream in(grid);
            std::string item;
            while (std::getline(in, item, ',')) {
                try {
                    spec.grid.push_back(std::stod(item));
                } catch (const std::exception &) {
                    throw ssbell::ConfigError("--grid: cannot parse \"" + item + "\" as a number");
                }
            }
        }
        cfg.sweep = spec;
    }
    auto text = ssbell::sweep_csv(cfg);
    auto path = output_path(o, cfg.outputs.sweep);
    ssbell::write_atomically(path, [&](std::ostream &out) { out << text; });
    std::cout << "wrote " << path.string() << '\n';
    return kExitOk;
}

int cmd_validate(std::uint64_t seed, std::size_t trials, bool fault) {
    std::cout << "validation seed " << seed << (fault ? " (fault injection enabled)" : "") << '\n';
    ssbell::ValidationReport rep = ssbell::run_validation({seed, trials, fault});
    for (const auto &c : rep.checks) {
        std::cout << (c.passed() ? "[PASS] " : "[FAIL] ") << c.name << " (" << c.assertions << " checks)\n";
        for (const auto &f : c.failures) {
            std::cout << "       " << f << '\n';
        }
    }
    std::cout << rep.assertions() << " checks in " << rep.checks.size() << " groups; "
              << (rep.passed() ? "all passed" : "FAILURES") << "; reproduce with --seed " << seed << '\n';
    return rep.passed() ? kExitOk : kExitFailure;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Single-shot Bell analysis of joint unsharp two-qubit measurements"};
    app.require_subcommand(1);

    CommonOptions common;
    auto add_common = [&](CLI::App *sub, bool with_sampling) {
        sub->add_option("--config", common.config_path, "experiment config (JSON)");
        sub->add_option("--out", common.out_dir, "output directory");
        if (with_sampling) {
            sub->add_option("--seed", common.seed, "RNG seed (overrides config)");
            sub->add_option("--shots", common.shots, "number of shots (overrides config)");
        }
    };

    auto *exact = app.add_subcommand("exact", "exact statistics, quasi-distribution and Bell quantities");
    add_common(exact, false);
    auto *run = app.add_subcommand("run", "Monte Carlo shots with single-shot CHSH values");
    add_common(run, true);
    auto *sweep = app.add_subcommand("sweep", "sweep gamma or Werner eta");
    add_common(sweep, false);
    std::string axis, grid;
    sweep->add_option("--axis", axis, "gamma or werner_eta (overrides config)");
    sweep->add_option("--grid", grid, "comma-separated grid values (overrides config)");

    auto *validate = app.add_subcommand("validate", "randomized invariant suite");
    std::uint64_t vseed = 0x5eedULL;
    std::size_t trials = 50;
    bool fault = false;
    validate->add_option("--seed", vseed, "seed for the randomized checks");
    validate->add_option("--trials", trials, "random trials per check");
    validate->add_flag("--inject-fault", fault, "corrupt the inversion kernel (self-test)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (*exact) {
            return cmd_exact(common);
        }
        if (*run) {
            return cmd_run(common);
        }
        if (*sweep) {
            return cmd_sweep(common, axis, grid);
        }
        return cmd_validate(vseed, trials, fault);
    } catch (const ssbell::ConfigError &e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFailure;
    }
}
