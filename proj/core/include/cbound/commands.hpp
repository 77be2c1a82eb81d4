// Subcommand implementations shared by the collapse-bound CLI and the test
// suite. Every command writes its artifacts plus a manifest.json into the
// output directory and is deterministic: identical configs produce
// byte-identical JSON and CSV output.
//
// Environment overrides: COLLAPSE_BOUND_WORKERS caps the sweep worker count,
// COLLAPSE_BOUND_TOL_SCALE multiplies the quadrature tolerances.

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "cbound/config.hpp"

namespace cbound::commands {

struct CommandResult {
    std::vector<std::string> artifacts;  // file names relative to the output directory
};

struct PublishedBounds {
    struct Row {
        std::string kind;   // "exclusion" or "tradeoff"
        std::string label;
        double r_c_m = 0.0;
        double value = 0.0;  // lambda_c upper bound (1/s) or eta_max (1/m^2)
    };
    std::vector<Row> rows;
};

// Strict parse of the curated bounds CSV; errors name the offending row.
PublishedBounds parse_bounds_file(const std::filesystem::path& path);

CommandResult cmd_cross_section(const config::ExperimentConfig& cfg,
                                const std::filesystem::path& out_dir);
CommandResult cmd_coupling_map(const config::ExperimentConfig& cfg,
                               const std::filesystem::path& out_dir);
// mode is one of "swap", "cooling", "protocol".
CommandResult cmd_simulate(const config::ExperimentConfig& cfg, const std::string& mode,
                           const std::filesystem::path& out_dir);
CommandResult cmd_budget(const config::ExperimentConfig& cfg,
                         const std::filesystem::path& out_dir);
CommandResult cmd_exclusion(const config::ExperimentConfig& cfg,
                            const std::optional<std::filesystem::path>& bounds_file,
                            const std::filesystem::path& out_dir);

// Assembled from the config the way cmd_budget does it (coupling, cross
// section and fluxes recomputed from first principles).
noise::BudgetInputs budget_inputs_from_config(const config::ExperimentConfig& cfg);
std::string budget_to_text(const noise::NoiseBudget& budget);

int worker_count();
double tolerance_scale();

}  // namespace cbound::commands
