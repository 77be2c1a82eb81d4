#include "cbound/noise.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "cbound/constants.hpp"
#include "cbound/numerics.hpp"

namespace cbound::noise {

namespace {

using constants::k_boltzmann;
using constants::two_pi;

double planck_exponent(double frequency_hz, double temperature_k) {
    if (!(temperature_k > 0.0)) {
        throw std::domain_error("thermal model: temperature must be > 0");
    }
    // h f = hbar * (2 pi f)
    return constants::hbar * two_pi * frequency_hz / (k_boltzmann * temperature_k);
}

}  // namespace

double ReadoutParams::n_critical() const {
    return delta_hz * delta_hz / (4.0 * g_readout_hz * g_readout_hz);
}

void ReadoutParams::validate() const {
    if (snr < 0.0) {
        throw std::invalid_argument("ReadoutParams: snr must be >= 0");
    }
    if (!(discrimination_divisor > 0.0)) {
        throw std::invalid_argument("ReadoutParams: discrimination divisor must be > 0");
    }
    if (delta_hz == 0.0) {
        throw std::invalid_argument("ReadoutParams: detuning must be nonzero");
    }
    if (epsilon_drive_hz < 0.0 || g_readout_hz <= 0.0 || kappa_hz < 0.0 || n_bar < 0.0) {
        throw std::invalid_argument("ReadoutParams: rates must be physical");
    }
    if (!(n_bar < n_critical())) {
        throw std::invalid_argument("ReadoutParams: n_bar must stay below n_crit = D^2/4g^2");
    }
    if (!(measurement_time_s > 0.0) || !(purcell_filter_factor >= 1.0)) {
        throw std::invalid_argument("ReadoutParams: invalid measurement time or filter factor");
    }
}

double false_positive_prob(const ReadoutParams& readout) {
    readout.validate();
    return 0.5 * numerics::erfc(std::sqrt(readout.snr) / readout.discrimination_divisor);
}

double true_positive_prob(const ReadoutParams& readout) {
    readout.validate();
    const double a = readout.discrimination_divisor;
    return 0.5 * numerics::erfc(std::sqrt(readout.snr) * (1.0 - a) / a);
}

double measurement_heating(const ReadoutParams& readout) {
    readout.validate();
    const double x = readout.epsilon_drive_hz * readout.g_readout_hz /
                     (readout.delta_hz * readout.delta_hz);
    return x * x;
}

double purcell_rate(const ReadoutParams& readout, bool filtered) {
    readout.validate();
    const double photon_ratio = readout.n_bar / readout.n_critical();
    const double g_over_delta = readout.g_readout_hz / readout.delta_hz;
    double rate = readout.kappa_hz * g_over_delta * g_over_delta / 16.0 * photon_ratio *
                  photon_ratio;
    if (filtered) {
        rate /= readout.purcell_filter_factor;
    }
    return rate;
}

double quasiparticle_equilibrium(double gamma_qp_hz, double gamma_p_hz, double gamma_q_hz) {
    if (!(gamma_q_hz > 0.0)) {
        throw std::domain_error("quasiparticle_equilibrium: gamma_q must be > 0");
    }
    if (gamma_qp_hz < 0.0 || gamma_p_hz < 0.0) {
        throw std::domain_error("quasiparticle_equilibrium: rates must be >= 0");
    }
    return (gamma_qp_hz + gamma_p_hz) / gamma_q_hz;
}

double thermal_rate(double gamma_hz, double frequency_hz, double temperature_k) {
    if (gamma_hz < 0.0) {
        throw std::domain_error("thermal_rate: gamma must be >= 0");
    }
    return gamma_hz * std::exp(-planck_exponent(frequency_hz, temperature_k));
}

double thermal_occupation(double frequency_hz, double temperature_k) {
    return std::exp(-planck_exponent(frequency_hz, temperature_k));
}

double min_testable_rate(double occupation_noise, double cross_section, double gamma_r_hz,
                         double eta_swap) {
    if (!(cross_section > 0.0) || !(gamma_r_hz > 0.0)) {
        throw std::domain_error("min_testable_rate: cross-section and gamma_r must be > 0");
    }
    if (occupation_noise < 0.0 || !(eta_swap > 0.0)) {
        throw std::domain_error("min_testable_rate: invalid occupation or swap efficiency");
    }
    return occupation_noise * gamma_r_hz / (eta_swap * cross_section);
}

double measurement_time(double n_dot_c, double eta_swap, double eta_disp, int n_resonators) {
    if (!(eta_swap > 0.0) || !(eta_disp > 0.0) || n_resonators < 1) {
        throw std::domain_error("measurement_time: efficiencies and resonator count must be > 0");
    }
    if (n_dot_c < 0.0) {
        throw std::domain_error("measurement_time: collapse flux must be >= 0");
    }
    if (n_dot_c == 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    return 1.0 / (n_dot_c * eta_swap * eta_disp * n_resonators);
}

NoiseBudget assemble_budget(const BudgetInputs& in) {
    in.readout.validate();
    if (!(in.g_mech_hz > 0.0) || !(in.gamma_q_hz > 0.0) || !(in.gamma_r_hz > 0.0) ||
        !(in.cross_section > 0.0) || !(in.eta_swap > 0.0)) {
        throw std::invalid_argument("assemble_budget: rates and couplings must be > 0");
    }

    NoiseBudget budget;
    const auto implied = [&](double occupation) {
        return min_testable_rate(occupation, in.cross_section, in.gamma_r_hz, 1.0);
    };

    const double signal = in.eta_swap * in.n_dot_c / in.gamma_r_hz;
    budget.rows.push_back({"CSL collapse (signal)", "eta_swap*lambda_c*D/gamma_r", signal, 0.0});

    const double thermal = thermal_occupation(in.mode_frequency_hz, in.temperature_k);
    budget.rows.push_back(
        {"Thermal", "exp(-h f/(k_B T))", thermal, implied(thermal)});

    const double sde = false_positive_prob(in.readout);
    budget.rows.push_back({"State discrimination", "erfc(sqrt(SNR)/a)/2", sde, implied(sde)});

    const double meas = measurement_heating(in.readout);
    budget.rows.push_back({"Measurement", "|eps*g/Delta^2|^2", meas, implied(meas)});

    // Post-swap qubit floor: the cooling protocol saturates at the ratio of
    // the spurious excitation rate to the electromechanical coupling.
    const double qp_current = (in.gamma_qp_hz + in.gamma_p_hz) / in.g_mech_hz;
    budget.rows.push_back(
        {"Quasiparticle+Purcell (current)", "(G_QP+G_P)/g", qp_current, implied(qp_current)});

    const double qp_improved = (in.gamma_qp_reduced_hz + in.gamma_p_hz) / in.g_mech_hz;
    budget.rows.push_back(
        {"Quasiparticle+Purcell (reduced)", "(G_QP+G_P)/g", qp_improved, implied(qp_improved)});

    const double common = thermal + sde + meas;
    budget.total_occupation_current = common + qp_current;
    budget.total_occupation_improved = common + qp_improved;
    budget.lambda_min_current = min_testable_rate(budget.total_occupation_current,
                                                  in.cross_section, in.gamma_r_hz, in.eta_swap);
    budget.lambda_min_improved = min_testable_rate(budget.total_occupation_improved,
                                                   in.cross_section, in.gamma_r_hz, in.eta_swap);
    budget.lambda_min_current_no_swap = implied(budget.total_occupation_current);
    budget.lambda_min_improved_no_swap = implied(budget.total_occupation_improved);
    return budget;
}

}  // namespace cbound::noise
