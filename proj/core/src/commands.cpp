#include "cbound/commands.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "cbound/constants.hpp"
#include "cbound/dynamics.hpp"
#include "cbound/io.hpp"

namespace cbound::commands {

namespace {

using json = nlohmann::ordered_json;
using constants::two_pi;

numerics::QuadratureSpec quad_spec() {
    numerics::QuadratureSpec spec;
    const double scale = tolerance_scale();
    spec.relative_tolerance *= scale;
    spec.absolute_tolerance *= scale;
    return spec;
}

// Evaluates f(i) for i in [0, n) across the worker pool.
template <typename F>
void parallel_for(int n, F&& f) {
    const int workers = std::min(worker_count(), std::max(1, n));
    if (workers <= 1) {
        for (int i = 0; i < n; ++i) {
            f(i);
        }
        return;
    }
    std::vector<std::thread> pool;
    std::exception_ptr first_error;
    std::mutex error_mutex;
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w]() {
            try {
                for (int i = w; i < n; i += workers) {
                    f(i);
                }
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) {
                    first_error = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) {
        t.join();
    }
    if (first_error) {
        std::rethrow_exception(first_error);
    }
}

std::string config_hash(const config::ExperimentConfig& cfg) {
    return io::hex64(io::fnv1a64(config::serialize(cfg)));
}

void write_json_artifact(const std::filesystem::path& out_dir, const std::string& name,
                         const json& payload) {
    io::write_text_file(out_dir / name, payload.dump(2) + "\n");
}

double target_mode_omega(const config::ExperimentConfig& cfg) {
    return electromech::mode_frequency(cfg.longitudinal_mode, 0, cfg.piezo_params(),
                                       cfg.resonator_height_m);
}

dynamics::ModeRegister make_register(const config::ExperimentConfig& cfg) {
    dynamics::ModeRegister reg;
    reg.modes = electromech::make_register_modes(cfg.longitudinal_mode, cfg.transverse_modes_max,
                                                 cfg.include_adjacent_longitudinal,
                                                 cfg.geometry(), cfg.piezo_params());
    reg.fock_cutoff = cfg.fock_cutoff;
    reg.dimension_cap = cfg.dimension_cap;
    reg.validate();
    return reg;
}

int register_target_index(const dynamics::ModeRegister& reg) {
    int target = 0;
    for (size_t k = 1; k < reg.modes.size(); ++k) {
        if (reg.modes[k].coupling > reg.modes[target].coupling) {
            target = static_cast<int>(k);
        }
    }
    return target;
}

dynamics::NoiseRates rates_from_config(const config::ExperimentConfig& cfg, double omega_rad,
                                       double n_dot_c) {
    dynamics::NoiseRates rates;
    rates.gamma_q_hz = cfg.gamma_q_hz;
    rates.gamma_phi_hz = cfg.gamma_phi_hz;
    rates.gamma_r_hz = cfg.gamma_r_hz;
    rates.gamma_qp_hz = cfg.gamma_qp_hz;
    rates.gamma_p_hz = cfg.gamma_p_hz;
    rates.n_thermal = dynamics::NoiseRates::bose_occupation(omega_rad, cfg.temperature_k);
    rates.n_dot_c = n_dot_c;
    return rates;
}

double collapse_flux(const config::ExperimentConfig& cfg, double cross_section,
                     double frequency_hz) {
    const csl::CollapseParams params{cfg.lambda_c_per_s, cfg.r_c_m, cfg.omega_cutoff_hz};
    return csl::heating_rate(params, cross_section, frequency_hz);
}

}  // namespace

int worker_count() {
    if (const char* env = std::getenv("COLLAPSE_BOUND_WORKERS")) {
        const int n = std::atoi(env);
        if (n >= 1) {
            return std::min(n, 64);
        }
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return static_cast<int>(std::clamp(hw, 1u, 8u));
}

double tolerance_scale() {
    if (const char* env = std::getenv("COLLAPSE_BOUND_TOL_SCALE")) {
        const double s = std::atof(env);
        if (s > 0.0) {
            return s;
        }
    }
    return 1.0;
}

PublishedBounds parse_bounds_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::ios_base::failure("cannot open bounds file: " + path.string());
    }
    PublishedBounds bounds;
    std::string line;
    int line_number = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_number;
        if (line.empty() || line[0] == '#') {
            continue;
        }
        if (!header_seen) {
            if (line != "kind,label,r_c_m,value") {
                throw config::ConfigError("bounds file " + path.string() + ": line " +
                                          std::to_string(line_number) +
                                          ": expected header 'kind,label,r_c_m,value'");
            }
            header_seen = true;
            continue;
        }
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) {
            fields.push_back(field);
        }
        const auto fail = [&](const std::string& why) {
            throw config::ConfigError("bounds file " + path.string() + ": line " +
                                      std::to_string(line_number) + ": " + why);
        };
        if (fields.size() != 4) {
            fail("expected 4 comma-separated fields");
        }
        PublishedBounds::Row row;
        row.kind = fields[0];
        row.label = fields[1];
        if (row.kind != "exclusion" && row.kind != "tradeoff") {
            fail("kind must be 'exclusion' or 'tradeoff'");
        }
        try {
            size_t used = 0;
            row.r_c_m = std::stod(fields[2], &used);
            if (used != fields[2].size()) {
                fail("r_c_m is not a number");
            }
            row.value = std::stod(fields[3], &used);
            if (used != fields[3].size()) {
                fail("value is not a number");
            }
        } catch (const config::ConfigError&) {
            throw;
        } catch (const std::exception&) {
            fail("numeric field does not parse");
        }
        if (!(row.r_c_m > 0.0) || !(row.value > 0.0)) {
            fail("r_c_m and value must be > 0");
        }
        bounds.rows.push_back(std::move(row));
    }
    return bounds;
}

CommandResult cmd_cross_section(const config::ExperimentConfig& cfg,
                                const std::filesystem::path& out_dir) {
    cfg.validate();
    std::filesystem::create_directories(out_dir);
    const auto spec = quad_spec();
    const auto geom = cfg.geometry();
    const double omega = target_mode_omega(cfg);
    const double frequency_hz = omega / two_pi;

    const auto geom_single = csl::ResonatorGeometry::from_wavelength(
        cfg.resonator_radius_m, geom.phonon_wavelength, 1, cfg.density_kg_per_m3);
    const double d_single = csl::cross_section(geom_single, cfg.r_c_m, omega, cfg.mass_model,
                                               spec);
    const double d_at_l = csl::cross_section(geom, cfg.r_c_m, omega, cfg.mass_model, spec);
    const auto optimum = csl::optimal_wavelength(cfg.r_c_m, geom, 50, spec);

    CommandResult result;
    const auto grid = cfg.r_c_scan.grid();
    {
        io::CsvWriter csv(out_dir / "cross_section_scan.csv",
                          {"r_c_m", "cross_section", "diffusion_constant_per_m2",
                           "heating_rate_per_s"});
        std::vector<std::array<double, 4>> rows(grid.size());
        parallel_for(static_cast<int>(grid.size()), [&](int i) {
            const double r = grid[i];
            const double d = csl::cross_section(geom, r, omega, cfg.mass_model, spec);
            const double eta = csl::diffusion_constant(geom, r, spec);
            rows[i] = {r, d, eta, collapse_flux(cfg, d, frequency_hz)};
        });
        for (const auto& r : rows) {
            csv.row(std::vector<double>(r.begin(), r.end()));
        }
        csv.close();
        result.artifacts.push_back("cross_section_scan.csv");
    }

    {
        // Signal strength versus the collapse rate: flux, steady occupancy
        // and single-resonator measurement time along the lambda_c grid.
        io::CsvWriter csv(out_dir / "signal_vs_lambda_c.csv",
                          {"lambda_c_per_s", "heating_rate_per_s", "steady_state_occupancy",
                           "measurement_time_s"});
        for (double lambda_c : cfg.lambda_c_scan.grid()) {
            csl::CollapseParams point{lambda_c, cfg.r_c_m, cfg.omega_cutoff_hz};
            const double flux = csl::heating_rate(point, d_at_l, frequency_hz);
            csv.row({lambda_c, flux, dynamics::steady_state_occupancy(flux, cfg.gamma_r_hz),
                     noise::measurement_time(flux, cfg.eta_swap_assumed, cfg.eta_disp_assumed,
                                             1)});
        }
        csv.close();
        result.artifacts.push_back("signal_vs_lambda_c.csv");
    }

    const double longitudinal = csl::longitudinal_integral(geom.phonon_wavelength, cfg.r_c_m,
                                                           spec);
    const double longitudinal_exact =
        csl::longitudinal_integral_exact_sin(geom.phonon_wavelength, cfg.r_c_m, spec);
    json summary;
    summary["schema_version"] = 1;
    summary["config_hash"] = config_hash(cfg);
    summary["D_single_node"] = d_single;
    summary["D_at_l"] = d_at_l;
    summary["optimal_lambda_m"] = optimum.lambda_star;
    summary["optimal_lambda_over_r_c"] = optimum.lambda_star / cfg.r_c_m;
    summary["transverse_factor"] = csl::transverse_factor(cfg.resonator_radius_m, cfg.r_c_m);
    summary["longitudinal_integral"] = longitudinal;
    summary["longitudinal_integral_exact_sin"] = longitudinal_exact;
    // Relative effect of the quadratic mode-shape approximation, reported
    // rather than bounded.
    summary["quadratic_shape_discrepancy"] = (longitudinal - longitudinal_exact) /
                                             longitudinal_exact;
    summary["heating_rate_per_s"] = collapse_flux(cfg, d_at_l, frequency_hz);
    summary["steady_state_occupancy"] =
        dynamics::steady_state_occupancy(collapse_flux(cfg, d_at_l, frequency_hz),
                                         cfg.gamma_r_hz);
    write_json_artifact(out_dir, "cross_section_summary.json", summary);
    result.artifacts.push_back("cross_section_summary.json");

    io::write_manifest(out_dir, "cross-section", config_hash(cfg), result.artifacts);
    return result;
}

CommandResult cmd_coupling_map(const config::ExperimentConfig& cfg,
                               const std::filesystem::path& out_dir) {
    cfg.validate();
    std::filesystem::create_directories(out_dir);
    const auto geom = cfg.geometry();
    const auto piezo = cfg.piezo_params();

    const auto census = electromech::enumerate_modes(piezo, geom, cfg.qubit_band_min_hz,
                                                     cfg.qubit_band_max_hz);
    CommandResult result;
    {
        io::CsvWriter csv(out_dir / "coupling_map.csv",
                          {"l", "m", "frequency_hz", "coupling_hz"});
        for (const auto& mode : census) {
            csv.row({static_cast<double>(mode.l), static_cast<double>(mode.m),
                     mode.omega / two_pi, mode.coupling / two_pi});
        }
        csv.close();
        result.artifacts.push_back("coupling_map.csv");
    }
    {
        const auto reg_modes = electromech::make_register_modes(
            cfg.longitudinal_mode, cfg.transverse_modes_max, cfg.include_adjacent_longitudinal,
            geom, piezo);
        io::CsvWriter csv(out_dir / "register_modes.csv",
                          {"l", "m", "frequency_hz", "coupling_hz"});
        for (const auto& mode : reg_modes) {
            csv.row({static_cast<double>(mode.l), static_cast<double>(mode.m),
                     mode.omega / two_pi, mode.coupling / two_pi});
        }
        csv.close();
        result.artifacts.push_back("register_modes.csv");
    }

    const auto target = electromech::make_mode(cfg.longitudinal_mode, 0, geom, piezo);
    json summary;
    summary["schema_version"] = 1;
    summary["config_hash"] = config_hash(cfg);
    summary["mode_count"] = census.size();
    summary["free_spectral_range_hz"] = cfg.v_longitudinal_m_per_s / (2.0 * geom.height);
    summary["target"] = {{"l", target.l},
                         {"m", target.m},
                         {"frequency_hz", target.omega / two_pi},
                         {"coupling_hz", target.coupling / two_pi}};
    write_json_artifact(out_dir, "coupling_summary.json", summary);
    result.artifacts.push_back("coupling_summary.json");

    io::write_manifest(out_dir, "coupling-map", config_hash(cfg), result.artifacts);
    return result;
}

CommandResult cmd_simulate(const config::ExperimentConfig& cfg, const std::string& mode,
                           const std::filesystem::path& out_dir) {
    cfg.validate();
    if (mode != "swap" && mode != "cooling" && mode != "protocol") {
        throw config::ConfigError("simulate mode must be swap, cooling or protocol");
    }
    std::filesystem::create_directories(out_dir);

    const auto reg = make_register(cfg);
    const int target = register_target_index(reg);
    const double omega = reg.modes[target].omega;
    const double d_at_l =
        csl::cross_section(cfg.geometry(), cfg.r_c_m, omega, cfg.mass_model, quad_spec());
    const double flux = collapse_flux(cfg, d_at_l, omega / two_pi);
    const auto rates = rates_from_config(cfg, omega, flux);

    dynamics::EvolveOptions options;
    options.rel_tol = cfg.evolve_rel_tol;

    CommandResult result;
    json summary;
    summary["schema_version"] = 1;
    summary["config_hash"] = config_hash(cfg);

    if (mode == "swap") {
        const auto swap = dynamics::swap_efficiency(reg, rates, target, options, true);
        const double g = reg.modes[target].coupling;
        if (cfg.trajectory_csv) {
            std::vector<std::string> header = {"t_s", "g_t_over_2pi", "qubit_population"};
            for (const auto& m : reg.modes) {
                header.push_back("mode_l" + std::to_string(m.l) + "_m" + std::to_string(m.m));
            }
            header.push_back("trace_error");
            io::CsvWriter csv(out_dir / "swap_trajectory.csv", header);
            const auto& traj = swap.trajectory;
            for (size_t i = 0; i < traj.times.size(); ++i) {
                std::vector<double> row = {traj.times[i], g * traj.times[i] / two_pi,
                                           traj.qubit_population[i]};
                for (double p : traj.mode_population[i]) {
                    row.push_back(p);
                }
                row.push_back(traj.trace_error[i]);
                csv.row(row);
            }
            csv.close();
            result.artifacts.push_back("swap_trajectory.csv");
        }
        summary["eta_swap"] = swap.efficiency;
        summary["time_at_max_s"] = swap.time_at_max;
        summary["target"] = {{"l", reg.modes[target].l},
                             {"m", reg.modes[target].m},
                             {"coupling_hz", g / two_pi}};
        write_json_artifact(out_dir, "swap_summary.json", summary);
        result.artifacts.push_back("swap_summary.json");
    } else if (mode == "cooling") {
        const auto cooling = dynamics::cooling_protocol(reg, rates, cfg.cooling_swaps, -1.0,
                                                        options);
        if (cfg.trajectory_csv) {
            io::CsvWriter csv(out_dir / "cooling.csv",
                              {"swap_index", "qubit_population", "measure_time_s"});
            for (size_t i = 0; i < cooling.occupancies.size(); ++i) {
                csv.row({static_cast<double>(i + 1), cooling.occupancies[i],
                         cooling.measure_times[i]});
            }
            csv.close();
            result.artifacts.push_back("cooling.csv");
        }
        summary["initial_population"] = cooling.initial_population;
        summary["floor"] = cooling.occupancies.back();
        summary["n_swaps"] = cfg.cooling_swaps;
        write_json_artifact(out_dir, "cooling_summary.json", summary);
        result.artifacts.push_back("cooling_summary.json");
    } else {
        dynamics::CycleConfig cycle;
        cycle.measure_time = cfg.readout.measurement_time_s;
        cycle.eta_swap = cfg.eta_swap_assumed;
        cycle.eta_disp = cfg.eta_disp_assumed;
        const auto schedule = dynamics::protocol_schedule(reg, rates, cycle);
        if (cfg.trajectory_csv) {
            io::CsvWriter csv(out_dir / "schedule.csv",
                              {"event", "mode_index", "t_start_s", "duration_s"});
            static const char* names[] = {"tune", "swap", "measure", "discard_initialization",
                                          "decouple"};
            for (const auto& ev : schedule.events) {
                csv.row({std::string(names[static_cast<int>(ev.kind)]),
                         std::to_string(ev.mode_index), io::format_float(ev.t_start),
                         io::format_float(ev.duration)});
            }
            csv.close();
            result.artifacts.push_back("schedule.csv");
        }
        int coupled = 0;
        for (const auto& m : reg.modes) {
            coupled += m.coupling > 0.0 ? 1 : 0;
        }
        summary["expected_true_positives_per_cycle"] =
            schedule.expected_true_positives_per_cycle;
        summary["cycle_duration_s"] = schedule.cycle_duration;
        summary["detection_rate_per_s"] = schedule.detection_rate;
        summary["measurement_time_s"] = noise::measurement_time(
            rates.n_dot_c, cfg.eta_swap_assumed, cfg.eta_disp_assumed, coupled);
        write_json_artifact(out_dir, "protocol_summary.json", summary);
        result.artifacts.push_back("protocol_summary.json");
    }

    io::write_manifest(out_dir, "simulate-" + mode, config_hash(cfg), result.artifacts);
    return result;
}

noise::BudgetInputs budget_inputs_from_config(const config::ExperimentConfig& cfg) {
    noise::BudgetInputs inputs;
    inputs.readout = cfg.readout;
    inputs.gamma_qp_hz = cfg.gamma_qp_hz;
    inputs.gamma_qp_reduced_hz = cfg.gamma_qp_reduced_hz;
    inputs.gamma_p_hz = cfg.gamma_p_hz;
    inputs.gamma_q_hz = cfg.gamma_q_hz;
    inputs.gamma_r_hz = cfg.gamma_r_hz;
    const auto geom = cfg.geometry();
    const double omega = target_mode_omega(cfg);
    inputs.g_mech_hz =
        electromech::coupling_strength(cfg.longitudinal_mode, 0, geom, cfg.piezo_params()) /
        two_pi;
    inputs.cross_section = csl::cross_section(geom, cfg.r_c_m, omega, cfg.mass_model,
                                              quad_spec());
    inputs.eta_swap = cfg.eta_swap_assumed;
    inputs.mode_frequency_hz = omega / two_pi;
    inputs.temperature_k = cfg.temperature_k;
    inputs.n_dot_c = collapse_flux(cfg, inputs.cross_section, omega / two_pi);
    return inputs;
}

std::string budget_to_text(const noise::NoiseBudget& budget) {
    std::ostringstream out;
    const auto line = [&](const std::string& name, const std::string& scaling,
                          const std::string& occ, const std::string& lam) {
        out << name;
        out << std::string(name.size() < 34 ? 34 - name.size() : 1, ' ');
        out << scaling;
        out << std::string(scaling.size() < 30 ? 30 - scaling.size() : 1, ' ');
        out << occ;
        out << std::string(occ.size() < 26 ? 26 - occ.size() : 1, ' ');
        out << lam << "\n";
    };
    line("Noise type", "Scaling", "Occupation", "lambda_c_min_per_s");
    for (const auto& row : budget.rows) {
        line(row.name, row.scaling, io::format_float(row.occupation),
             row.lambda_min > 0.0 ? io::format_float(row.lambda_min) : "-");
    }
    line("All noise (current)", "-", io::format_float(budget.total_occupation_current),
         io::format_float(budget.lambda_min_current));
    line("All noise (improved)", "-", io::format_float(budget.total_occupation_improved),
         io::format_float(budget.lambda_min_improved));
    return out.str();
}

CommandResult cmd_budget(const config::ExperimentConfig& cfg,
                         const std::filesystem::path& out_dir) {
    cfg.validate();
    std::filesystem::create_directories(out_dir);
    const auto inputs = budget_inputs_from_config(cfg);
    const auto budget = noise::assemble_budget(inputs);

    CommandResult result;
    json payload;
    payload["schema_version"] = 1;
    payload["config_hash"] = config_hash(cfg);
    payload["rows"] = json::array();
    for (const auto& row : budget.rows) {
        payload["rows"].push_back({{"name", row.name},
                                   {"scaling", row.scaling},
                                   {"occupation", row.occupation},
                                   {"lambda_min_per_s", row.lambda_min}});
    }
    payload["totals"] = {
        {"occupation_current", budget.total_occupation_current},
        {"occupation_improved", budget.total_occupation_improved},
        {"lambda_min_current_per_s", budget.lambda_min_current},
        {"lambda_min_improved_per_s", budget.lambda_min_improved},
        {"lambda_min_current_no_swap_per_s", budget.lambda_min_current_no_swap},
        {"lambda_min_improved_no_swap_per_s", budget.lambda_min_improved_no_swap}};
    payload["inputs"] = {{"g_mech_hz", inputs.g_mech_hz},
                         {"cross_section", inputs.cross_section},
                         {"n_dot_c_per_s", inputs.n_dot_c},
                         {"eta_swap", inputs.eta_swap}};
    write_json_artifact(out_dir, "budget.json", payload);
    result.artifacts.push_back("budget.json");

    io::write_text_file(out_dir / "budget.txt", budget_to_text(budget));
    result.artifacts.push_back("budget.txt");

    io::write_manifest(out_dir, "budget", config_hash(cfg), result.artifacts);
    return result;
}

CommandResult cmd_exclusion(const config::ExperimentConfig& cfg,
                            const std::optional<std::filesystem::path>& bounds_file,
                            const std::filesystem::path& out_dir) {
    cfg.validate();
    std::filesystem::create_directories(out_dir);
    const auto spec = quad_spec();
    const auto geom = cfg.geometry();
    const double omega = target_mode_omega(cfg);

    PublishedBounds bounds;
    if (bounds_file) {
        bounds = parse_bounds_file(*bounds_file);
    }

    const auto inputs = budget_inputs_from_config(cfg);
    const auto budget = noise::assemble_budget(inputs);

    CommandResult result;
    const auto grid = cfg.r_c_scan.grid();
    std::vector<double> cross(grid.size());
    std::vector<double> diffusion(grid.size());
    parallel_for(static_cast<int>(grid.size()), [&](int i) {
        cross[i] = csl::cross_section(geom, grid[i], omega, cfg.mass_model, spec);
        diffusion[i] = csl::diffusion_constant(geom, grid[i], spec);
    });

    {
        io::CsvWriter csv(out_dir / "proposal_exclusion.csv",
                          {"r_c_m", "lambda_min_current_per_s", "lambda_min_improved_per_s"});
        for (size_t i = 0; i < grid.size(); ++i) {
            csv.row({grid[i],
                     noise::min_testable_rate(budget.total_occupation_current, cross[i],
                                              cfg.gamma_r_hz, cfg.eta_swap_assumed),
                     noise::min_testable_rate(budget.total_occupation_improved, cross[i],
                                              cfg.gamma_r_hz, cfg.eta_swap_assumed)});
        }
        csv.close();
        result.artifacts.push_back("proposal_exclusion.csv");
    }

    // Trade-off data: the diffusion peak of this geometry plus the curated
    // published points and a slope -4 reference line fitted through them.
    double r_star = cfg.r_c_m;
    double eta_star = 0.0;
    for (size_t i = 0; i < grid.size(); ++i) {
        if (diffusion[i] > eta_star) {
            eta_star = diffusion[i];
            r_star = grid[i];
        }
    }
    double reference_intercept = 0.0;  // log10(C) of eta = C r^-4
    int tradeoff_rows = 0;
    for (const auto& row : bounds.rows) {
        if (row.kind == "tradeoff") {
            reference_intercept += std::log10(row.value) + 4.0 * std::log10(row.r_c_m);
            ++tradeoff_rows;
        }
    }
    if (tradeoff_rows > 0) {
        reference_intercept /= tradeoff_rows;
    }
    {
        io::CsvWriter csv(out_dir / "tradeoff.csv", {"series", "r_c_m", "eta_per_m2"});
        csv.row({std::string("proposal"), io::format_float(r_star), io::format_float(eta_star)});
        for (const auto& row : bounds.rows) {
            if (row.kind == "tradeoff") {
                csv.row({row.label, io::format_float(row.r_c_m), io::format_float(row.value)});
            }
        }
        if (tradeoff_rows > 0) {
            for (size_t i = 0; i < grid.size(); ++i) {
                const double eta_ref =
                    std::pow(10.0, reference_intercept - 4.0 * std::log10(grid[i]));
                csv.row({std::string("reference_line"), io::format_float(grid[i]),
                         io::format_float(eta_ref)});
            }
        }
        csv.close();
        result.artifacts.push_back("tradeoff.csv");
    }

    {
        io::CsvWriter csv(out_dir / "published_bounds_plot.csv",
                          {"label", "r_c_m", "lambda_c_per_s"});
        for (const auto& row : bounds.rows) {
            if (row.kind == "exclusion") {
                csv.row({row.label, io::format_float(row.r_c_m), io::format_float(row.value)});
            }
        }
        csv.close();
        result.artifacts.push_back("published_bounds_plot.csv");
    }

    json summary;
    summary["schema_version"] = 1;
    summary["config_hash"] = config_hash(cfg);
    summary["lambda_min_current_at_r_c"] = noise::min_testable_rate(
        budget.total_occupation_current, inputs.cross_section, cfg.gamma_r_hz,
        cfg.eta_swap_assumed);
    summary["lambda_min_improved_at_r_c"] = noise::min_testable_rate(
        budget.total_occupation_improved, inputs.cross_section, cfg.gamma_r_hz,
        cfg.eta_swap_assumed);
    summary["r_c_star_m"] = r_star;
    summary["eta_max_per_m2"] = eta_star;
    summary["reference_slope"] = -4.0;
    summary["reference_log10_intercept"] = tradeoff_rows > 0 ? json(reference_intercept)
                                                             : json();
    write_json_artifact(out_dir, "exclusion_summary.json", summary);
    result.artifacts.push_back("exclusion_summary.json");

    io::write_manifest(out_dir, "exclusion", config_hash(cfg), result.artifacts);
    return result;
}

}  // namespace cbound::commands
