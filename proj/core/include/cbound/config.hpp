// Experiment configuration: a versioned JSON schema covering geometry,
// collapse parameters, piezo/qubit constants, noise rates, readout and
// simulation controls. Parsing is strict: every block and field is required
// (omega_cutoff_hz may be null) and unknown keys are rejected. Frequencies are
// ordinary frequencies in Hz throughout; lengths are SI metres.

#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "cbound/csl.hpp"
#include "cbound/electromech.hpp"
#include "cbound/noise.hpp"

namespace cbound::config {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ScanSpec {
    double lo = 1e-9;
    double hi = 1e-5;
    int points_per_decade = 200;

    bool empty() const { return points_per_decade < 1 || !(lo < hi); }
    std::vector<double> grid() const;  // log-spaced, inclusive of both ends
};

struct ExperimentConfig {
    int schema_version = 1;

    // resonator
    double resonator_radius_m = 35e-6;
    double resonator_height_m = 240e-6;
    int longitudinal_mode = 503;
    double density_kg_per_m3 = 2648.0;

    // collapse
    double lambda_c_per_s = 1e-12;
    double r_c_m = 1e-7;
    std::optional<double> omega_cutoff_hz;
    ScanSpec r_c_scan;
    ScanSpec lambda_c_scan{1e-13, 1e-8, 20};

    // piezo_qubit
    double d33_m_per_v = 80e-12;
    double c33_pa = 106e9;
    double e_field_v_per_m = 2.8e-2;
    double electrode_diameter_m = 55e-6;
    double v_longitudinal_m_per_s = 6320.0;
    double v_transverse_m_per_s = 3900.0;
    double qubit_band_min_hz = 4e9;
    double qubit_band_max_hz = 9e9;

    // noise_rates
    double gamma_q_hz = 27e3;
    double gamma_phi_hz = 0.3e6;
    double gamma_r_hz = 300.0;
    double gamma_qp_hz = 30.0;
    double gamma_qp_reduced_hz = 3.0;
    double gamma_p_hz = 0.5;
    double temperature_k = 0.01;

    // readout
    noise::ReadoutParams readout;
    double eta_swap_assumed = 0.8;
    double eta_disp_assumed = 0.1;

    // simulation
    int fock_cutoff = 1;
    int dimension_cap = 4096;
    int transverse_modes_max = 3;
    bool include_adjacent_longitudinal = true;
    double evolve_rel_tol = 1e-10;
    csl::MassModel mass_model = csl::MassModel::cylinder;
    int cooling_swaps = 4;

    // output
    bool trajectory_csv = true;
    bool summary_json = true;

    csl::ResonatorGeometry geometry() const;
    electromech::PiezoQubitParams piezo_params() const;
    void validate() const;
};

ExperimentConfig parse(const std::string& json_text);
ExperimentConfig load(const std::filesystem::path& path);
// Stable key order; parse(serialize(c)) reproduces c and the same bytes.
std::string serialize(const ExperimentConfig& config);

}  // namespace cbound::config
