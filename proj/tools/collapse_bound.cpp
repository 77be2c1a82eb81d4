// collapse-bound: computes collapse-model heating signals, electromechanical
// couplings, open-system protocol simulations and the full noise budget for a
// qubit-coupled bulk-acoustic-wave resonator, emitting machine-readable CSV
// and JSON artifacts.
//
// Exit codes: 0 success, 1 configuration error, 2 numeric failure, 3 I/O error.

#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <filesystem>
#include <optional>
#include <string>

#include "cbound/commands.hpp"
#include "cbound/dynamics.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitNumeric = 2;
constexpr int kExitIo = 3;

int run(const std::function<cbound::commands::CommandResult()>& command) {
    try {
        const auto result = command();
        for (const auto& artifact : result.artifacts) {
            std::printf("wrote %s\n", artifact.c_str());
        }
        return kExitOk;
    } catch (const cbound::config::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    } catch (const std::domain_error& e) {
        std::fprintf(stderr, "numeric error: %s\n", e.what());
        return kExitNumeric;
    } catch (const cbound::numerics::ConvergenceError& e) {
        std::fprintf(stderr, "numeric error: %s (best estimate %g, error bound %g)\n", e.what(),
                     e.best_estimate, e.error_bound);
        return kExitNumeric;
    } catch (const cbound::dynamics::IntegrationError& e) {
        std::fprintf(stderr, "numeric error: %s (t = %g, step = %g)\n", e.what(), e.time,
                     e.step_size);
        return kExitNumeric;
    } catch (const cbound::csl::ScanError& e) {
        std::fprintf(stderr, "numeric error: %s; scan grid follows\n", e.what());
        for (const auto& [x, y] : e.scan) {
            std::fprintf(stderr, "  %.17g,%.17g\n", x, y);
        }
        return kExitNumeric;
    } catch (const std::ios_base::failure& e) {
        std::fprintf(stderr, "i/o error: %s\n", e.what());
        return kExitIo;
    } catch (const std::filesystem::filesystem_error& e) {
        std::fprintf(stderr, "i/o error: %s\n", e.what());
        return kExitIo;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "numeric error: %s\n", e.what());
        return kExitNumeric;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"collapse-model test toolkit for qubit-coupled acoustic resonators"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "out";
    std::string bounds_path;
    std::string simulate_mode = "swap";

    const auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "experiment configuration JSON")->required();
        cmd->add_option("--out", out_dir, "output directory");
    };

    auto* cross = app.add_subcommand("cross-section",
                                     "collapse cross-section, diffusion and heating scan");
    add_common(cross);
    auto* coupling = app.add_subcommand("coupling-map",
                                        "mode census and qubit-mode coupling strengths");
    add_common(coupling);
    auto* simulate = app.add_subcommand("simulate", "open-system protocol simulation");
    add_common(simulate);
    simulate->add_option("mode", simulate_mode, "swap | cooling | protocol");
    auto* budget = app.add_subcommand("budget", "noise budget and minimum testable rates");
    add_common(budget);
    auto* exclusion = app.add_subcommand("exclusion",
                                         "exclusion curves and diffusion trade-off data");
    add_common(exclusion);
    exclusion->add_option("--bounds", bounds_path, "curated published-bounds CSV");

    CLI11_PARSE(app, argc, argv);

    cbound::config::ExperimentConfig cfg;
    try {
        cfg = cbound::config::load(config_path);
    } catch (const cbound::config::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "i/o error: %s\n", e.what());
        return kExitIo;
    }

    const std::filesystem::path out{out_dir};
    if (cross->parsed()) {
        return run([&] { return cbound::commands::cmd_cross_section(cfg, out); });
    }
    if (coupling->parsed()) {
        return run([&] { return cbound::commands::cmd_coupling_map(cfg, out); });
    }
    if (simulate->parsed()) {
        return run([&] { return cbound::commands::cmd_simulate(cfg, simulate_mode, out); });
    }
    if (budget->parsed()) {
        return run([&] { return cbound::commands::cmd_budget(cfg, out); });
    }
    if (exclusion->parsed()) {
        std::optional<std::filesystem::path> bounds;
        if (!bounds_path.empty()) {
            bounds = bounds_path;
        }
        return run([&] { return cbound::commands::cmd_exclusion(cfg, bounds, out); });
    }
    return kExitConfig;
}
