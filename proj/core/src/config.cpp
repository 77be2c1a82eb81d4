#include "cbound/config.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace cbound::config {

namespace {

using json = nlohmann::ordered_json;

void require_keys(const json& block, const std::string& name,
                  const std::set<std::string>& allowed) {
    if (!block.is_object()) {
        throw ConfigError("config block '" + name + "' must be an object");
    }
    for (const auto& item : block.items()) {
        if (!allowed.count(item.key())) {
            throw ConfigError("config block '" + name + "' has unknown key '" + item.key() + "'");
        }
    }
    for (const auto& key : allowed) {
        if (!block.contains(key)) {
            throw ConfigError("config block '" + name + "' is missing key '" + key + "'");
        }
    }
}

double number(const json& block, const std::string& name, const std::string& key) {
    const auto& v = block.at(key);
    if (!v.is_number()) {
        throw ConfigError("config field '" + name + "." + key + "' must be a number");
    }
    return v.get<double>();
}

int integer(const json& block, const std::string& name, const std::string& key) {
    const auto& v = block.at(key);
    if (!v.is_number_integer()) {
        throw ConfigError("config field '" + name + "." + key + "' must be an integer");
    }
    return v.get<int>();
}

bool boolean(const json& block, const std::string& name, const std::string& key) {
    const auto& v = block.at(key);
    if (!v.is_boolean()) {
        throw ConfigError("config field '" + name + "." + key + "' must be a boolean");
    }
    return v.get<bool>();
}

}  // namespace

std::vector<double> ScanSpec::grid() const {
    std::vector<double> points;
    if (empty()) {
        return points;
    }
    const double decades = std::log10(hi / lo);
    const int n = std::max(2, static_cast<int>(std::round(decades * points_per_decade)) + 1);
    points.reserve(n);
    for (int i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / (n - 1);
        points.push_back(lo * std::pow(hi / lo, t));
    }
    return points;
}

csl::ResonatorGeometry ExperimentConfig::geometry() const {
    return csl::ResonatorGeometry::from_height(resonator_radius_m, resonator_height_m,
                                               longitudinal_mode, density_kg_per_m3);
}

electromech::PiezoQubitParams ExperimentConfig::piezo_params() const {
    electromech::PiezoQubitParams p;
    p.d33 = d33_m_per_v;
    p.c33 = c33_pa;
    p.e_field = e_field_v_per_m;
    p.electrode_diameter = electrode_diameter_m;
    p.cavity_diameter = 2.0 * resonator_radius_m;
    p.v_longitudinal = v_longitudinal_m_per_s;
    p.v_transverse = v_transverse_m_per_s;
    p.band_min_hz = qubit_band_min_hz;
    p.band_max_hz = qubit_band_max_hz;
    return p;
}

void ExperimentConfig::validate() const {
    if (schema_version != 1) {
        throw ConfigError("unsupported schema_version (expected 1)");
    }
    try {
        geometry();
        piezo_params().validate();
        readout.validate();
        csl::CollapseParams collapse{lambda_c_per_s, r_c_m, omega_cutoff_hz};
        collapse.validate();
    } catch (const std::exception& e) {
        throw ConfigError(std::string("invalid configuration: ") + e.what());
    }
    if (gamma_q_hz <= 0.0 || gamma_phi_hz < 0.0 || gamma_r_hz <= 0.0 || gamma_qp_hz < 0.0 ||
        gamma_qp_reduced_hz < 0.0 || gamma_p_hz < 0.0) {
        throw ConfigError("invalid configuration: noise rates out of range");
    }
    if (!(temperature_k > 0.0)) {
        throw ConfigError("invalid configuration: temperature must be > 0");
    }
    if (!(eta_swap_assumed > 0.0 && eta_swap_assumed <= 1.0) ||
        !(eta_disp_assumed > 0.0 && eta_disp_assumed <= 1.0)) {
        throw ConfigError("invalid configuration: efficiencies must be in (0, 1]");
    }
    if (fock_cutoff < 1 || fock_cutoff > 4 || dimension_cap < 4 || transverse_modes_max < 0 ||
        cooling_swaps < 1 || cooling_swaps > 64) {
        throw ConfigError("invalid configuration: simulation block out of range");
    }
    if (!(evolve_rel_tol > 0.0)) {
        throw ConfigError("invalid configuration: evolve_rel_tol must be > 0");
    }
}

ExperimentConfig parse(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    require_keys(root, "(root)",
                 {"schema_version", "resonator", "collapse", "piezo_qubit", "noise_rates",
                  "readout", "simulation", "output"});

    ExperimentConfig c;
    if (!root.at("schema_version").is_number_integer()) {
        throw ConfigError("schema_version must be an integer");
    }
    c.schema_version = root.at("schema_version").get<int>();

    const json& res = root.at("resonator");
    require_keys(res, "resonator",
                 {"radius_m", "height_m", "longitudinal_mode", "density_kg_per_m3"});
    c.resonator_radius_m = number(res, "resonator", "radius_m");
    c.resonator_height_m = number(res, "resonator", "height_m");
    c.longitudinal_mode = integer(res, "resonator", "longitudinal_mode");
    c.density_kg_per_m3 = number(res, "resonator", "density_kg_per_m3");

    const json& col = root.at("collapse");
    require_keys(col, "collapse",
                 {"lambda_c_per_s", "r_c_m", "omega_cutoff_hz", "r_c_scan", "lambda_c_scan"});
    c.lambda_c_per_s = number(col, "collapse", "lambda_c_per_s");
    c.r_c_m = number(col, "collapse", "r_c_m");
    if (col.at("omega_cutoff_hz").is_null()) {
        c.omega_cutoff_hz.reset();
    } else {
        c.omega_cutoff_hz = number(col, "collapse", "omega_cutoff_hz");
    }
    const json& scan = col.at("r_c_scan");
    require_keys(scan, "collapse.r_c_scan", {"min_m", "max_m", "points_per_decade"});
    c.r_c_scan.lo = number(scan, "r_c_scan", "min_m");
    c.r_c_scan.hi = number(scan, "r_c_scan", "max_m");
    c.r_c_scan.points_per_decade = integer(scan, "r_c_scan", "points_per_decade");
    const json& lscan = col.at("lambda_c_scan");
    require_keys(lscan, "collapse.lambda_c_scan", {"min_per_s", "max_per_s", "points_per_decade"});
    c.lambda_c_scan.lo = number(lscan, "lambda_c_scan", "min_per_s");
    c.lambda_c_scan.hi = number(lscan, "lambda_c_scan", "max_per_s");
    c.lambda_c_scan.points_per_decade = integer(lscan, "lambda_c_scan", "points_per_decade");

    const json& pz = root.at("piezo_qubit");
    require_keys(pz, "piezo_qubit",
                 {"d33_m_per_v", "c33_pa", "e_field_v_per_m", "electrode_diameter_m",
                  "v_longitudinal_m_per_s", "v_transverse_m_per_s", "qubit_band_hz"});
    c.d33_m_per_v = number(pz, "piezo_qubit", "d33_m_per_v");
    c.c33_pa = number(pz, "piezo_qubit", "c33_pa");
    c.e_field_v_per_m = number(pz, "piezo_qubit", "e_field_v_per_m");
    c.electrode_diameter_m = number(pz, "piezo_qubit", "electrode_diameter_m");
    c.v_longitudinal_m_per_s = number(pz, "piezo_qubit", "v_longitudinal_m_per_s");
    c.v_transverse_m_per_s = number(pz, "piezo_qubit", "v_transverse_m_per_s");
    const json& band = pz.at("qubit_band_hz");
    if (!band.is_array() || band.size() != 2 || !band[0].is_number() || !band[1].is_number()) {
        throw ConfigError("piezo_qubit.qubit_band_hz must be [min_hz, max_hz]");
    }
    c.qubit_band_min_hz = band[0].get<double>();
    c.qubit_band_max_hz = band[1].get<double>();

    const json& nr = root.at("noise_rates");
    require_keys(nr, "noise_rates",
                 {"gamma_q_hz", "gamma_phi_hz", "gamma_r_hz", "gamma_qp_hz",
                  "gamma_qp_reduced_hz", "gamma_p_hz", "temperature_k"});
    c.gamma_q_hz = number(nr, "noise_rates", "gamma_q_hz");
    c.gamma_phi_hz = number(nr, "noise_rates", "gamma_phi_hz");
    c.gamma_r_hz = number(nr, "noise_rates", "gamma_r_hz");
    c.gamma_qp_hz = number(nr, "noise_rates", "gamma_qp_hz");
    c.gamma_qp_reduced_hz = number(nr, "noise_rates", "gamma_qp_reduced_hz");
    c.gamma_p_hz = number(nr, "noise_rates", "gamma_p_hz");
    c.temperature_k = number(nr, "noise_rates", "temperature_k");

    const json& rd = root.at("readout");
    require_keys(rd, "readout",
                 {"snr", "discrimination_divisor", "epsilon_drive_hz", "g_readout_hz", "delta_hz",
                  "kappa_hz", "n_bar", "measurement_time_s", "purcell_filter_factor",
                  "eta_swap_assumed", "eta_disp_assumed"});
    c.readout.snr = number(rd, "readout", "snr");
    c.readout.discrimination_divisor = number(rd, "readout", "discrimination_divisor");
    c.readout.epsilon_drive_hz = number(rd, "readout", "epsilon_drive_hz");
    c.readout.g_readout_hz = number(rd, "readout", "g_readout_hz");
    c.readout.delta_hz = number(rd, "readout", "delta_hz");
    c.readout.kappa_hz = number(rd, "readout", "kappa_hz");
    c.readout.n_bar = number(rd, "readout", "n_bar");
    c.readout.measurement_time_s = number(rd, "readout", "measurement_time_s");
    c.readout.purcell_filter_factor = number(rd, "readout", "purcell_filter_factor");
    c.eta_swap_assumed = number(rd, "readout", "eta_swap_assumed");
    c.eta_disp_assumed = number(rd, "readout", "eta_disp_assumed");

    const json& sim = root.at("simulation");
    require_keys(sim, "simulation",
                 {"fock_cutoff", "dimension_cap", "transverse_modes_max",
                  "include_adjacent_longitudinal", "evolve_rel_tol", "mass_model",
                  "cooling_swaps"});
    c.fock_cutoff = integer(sim, "simulation", "fock_cutoff");
    c.dimension_cap = integer(sim, "simulation", "dimension_cap");
    c.transverse_modes_max = integer(sim, "simulation", "transverse_modes_max");
    c.include_adjacent_longitudinal = boolean(sim, "simulation", "include_adjacent_longitudinal");
    c.evolve_rel_tol = number(sim, "simulation", "evolve_rel_tol");
    const auto& mm = sim.at("mass_model");
    if (!mm.is_string() || (mm != "cylinder" && mm != "box")) {
        throw ConfigError("simulation.mass_model must be \"cylinder\" or \"box\"");
    }
    c.mass_model = mm == "cylinder" ? csl::MassModel::cylinder : csl::MassModel::box;
    c.cooling_swaps = integer(sim, "simulation", "cooling_swaps");

    const json& out = root.at("output");
    require_keys(out, "output", {"trajectory_csv", "summary_json"});
    c.trajectory_csv = boolean(out, "output", "trajectory_csv");
    c.summary_json = boolean(out, "output", "summary_json");

    c.validate();
    return c;
}

ExperimentConfig load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::ios_base::failure("cannot open config file: " + path.string());
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse(buffer.str());
}

std::string serialize(const ExperimentConfig& c) {
    json root;
    root["schema_version"] = c.schema_version;
    root["resonator"] = {{"radius_m", c.resonator_radius_m},
                         {"height_m", c.resonator_height_m},
                         {"longitudinal_mode", c.longitudinal_mode},
                         {"density_kg_per_m3", c.density_kg_per_m3}};
    json cutoff;
    if (c.omega_cutoff_hz) {
        cutoff = *c.omega_cutoff_hz;
    }
    root["collapse"] = {{"lambda_c_per_s", c.lambda_c_per_s},
                        {"r_c_m", c.r_c_m},
                        {"omega_cutoff_hz", cutoff},
                        {"r_c_scan",
                         {{"min_m", c.r_c_scan.lo},
                          {"max_m", c.r_c_scan.hi},
                          {"points_per_decade", c.r_c_scan.points_per_decade}}},
                        {"lambda_c_scan",
                         {{"min_per_s", c.lambda_c_scan.lo},
                          {"max_per_s", c.lambda_c_scan.hi},
                          {"points_per_decade", c.lambda_c_scan.points_per_decade}}}};
    root["piezo_qubit"] = {{"d33_m_per_v", c.d33_m_per_v},
                           {"c33_pa", c.c33_pa},
                           {"e_field_v_per_m", c.e_field_v_per_m},
                           {"electrode_diameter_m", c.electrode_diameter_m},
                           {"v_longitudinal_m_per_s", c.v_longitudinal_m_per_s},
                           {"v_transverse_m_per_s", c.v_transverse_m_per_s},
                           {"qubit_band_hz", {c.qubit_band_min_hz, c.qubit_band_max_hz}}};
    root["noise_rates"] = {{"gamma_q_hz", c.gamma_q_hz},
                           {"gamma_phi_hz", c.gamma_phi_hz},
                           {"gamma_r_hz", c.gamma_r_hz},
                           {"gamma_qp_hz", c.gamma_qp_hz},
                           {"gamma_qp_reduced_hz", c.gamma_qp_reduced_hz},
                           {"gamma_p_hz", c.gamma_p_hz},
                           {"temperature_k", c.temperature_k}};
    root["readout"] = {{"snr", c.readout.snr},
                       {"discrimination_divisor", c.readout.discrimination_divisor},
                       {"epsilon_drive_hz", c.readout.epsilon_drive_hz},
                       {"g_readout_hz", c.readout.g_readout_hz},
                       {"delta_hz", c.readout.delta_hz},
                       {"kappa_hz", c.readout.kappa_hz},
                       {"n_bar", c.readout.n_bar},
                       {"measurement_time_s", c.readout.measurement_time_s},
                       {"purcell_filter_factor", c.readout.purcell_filter_factor},
                       {"eta_swap_assumed", c.eta_swap_assumed},
                       {"eta_disp_assumed", c.eta_disp_assumed}};
    root["simulation"] = {{"fock_cutoff", c.fock_cutoff},
                          {"dimension_cap", c.dimension_cap},
                          {"transverse_modes_max", c.transverse_modes_max},
                          {"include_adjacent_longitudinal", c.include_adjacent_longitudinal},
                          {"evolve_rel_tol", c.evolve_rel_tol},
                          {"mass_model",
                           c.mass_model == csl::MassModel::cylinder ? "cylinder" : "box"},
                          {"cooling_swaps", c.cooling_swaps}};
    root["output"] = {{"trajectory_csv", c.trajectory_csv}, {"summary_json", c.summary_json}};
    return root.dump(2) + "\n";
}

}  // namespace cbound::config
