// Statistical models for every non-collapse excitation channel, the
// machine-readable noise budget, minimum testable collapse rates and
// measurement-time estimates. Rates follow the ordinary-frequency convention
// (the X in "rate/2pi = X Hz").

#pragma once

#include <string>
#include <vector>

namespace cbound::noise {

struct ReadoutParams {
    double snr = 8.0;
    double discrimination_divisor = 0.76;  // a; the threshold sits at x0 + (x1-x0)/a
    double epsilon_drive_hz = 25e6;        // measurement drive strength
    double g_readout_hz = 100e6;           // qubit-cavity coupling
    double delta_hz = 2e9;                 // qubit-cavity detuning
    double kappa_hz = 4.16e6;              // cavity linewidth (calibrated default)
    double n_bar = 20.0;                   // readout photon number (calibrated default)
    double measurement_time_s = 56e-9;
    double purcell_filter_factor = 50.0;

    double n_critical() const;  // Delta^2 / (4 g^2)
    void validate() const;
};

struct NoiseBudget {
    struct Row {
        std::string name;
        std::string scaling;     // formula label for the table's scaling column
        double occupation = 0.0;
        double lambda_min = 0.0; // 0 marks the signal row (no implied bound)
    };

    std::vector<Row> rows;
    double total_occupation_current = 0.0;
    double total_occupation_improved = 0.0;
    // Totals converted to minimum testable collapse rates, with and without
    // the swap-efficiency factor.
    double lambda_min_current = 0.0;
    double lambda_min_improved = 0.0;
    double lambda_min_current_no_swap = 0.0;
    double lambda_min_improved_no_swap = 0.0;
};

struct BudgetInputs {
    ReadoutParams readout;
    double gamma_qp_hz = 30.0;
    double gamma_qp_reduced_hz = 3.0;
    double gamma_p_hz = 0.5;
    double gamma_q_hz = 27e3;
    double gamma_r_hz = 300.0;
    double g_mech_hz = 2.9e6;     // qubit-mode coupling, sets the cooled-qubit floor
    double cross_section = 3.7e8; // converts occupations into collapse rates
    double eta_swap = 0.8;
    double mode_frequency_hz = 6.65e9;
    double temperature_k = 0.01;
    double n_dot_c = 3.8e-4;      // collapse flux for the signal row, 1/s
};

// P(false |e>) = erfc(sqrt(SNR)/a)/2.
double false_positive_prob(const ReadoutParams& readout);

// P(true |e>) = erfc(sqrt(SNR)(1-a)/a)/2.
double true_positive_prob(const ReadoutParams& readout);

// Residual excitation from the readout drive, |eps g/Delta^2|^2.
double measurement_heating(const ReadoutParams& readout);

// Purcell excitation rate kappa g^2/(16 Delta^2) (n_bar/n_crit)^2, optionally
// divided by the filter factor.
double purcell_rate(const ReadoutParams& readout, bool filtered);

// Equilibrium qubit occupancy (Gamma_QP + Gamma_P)/gamma_q.
double quasiparticle_equilibrium(double gamma_qp_hz, double gamma_p_hz, double gamma_q_hz);

// Boltzmann-suppressed heating flux gamma * exp(-h f / k_B T), 1/s.
double thermal_rate(double gamma_hz, double frequency_hz, double temperature_k);

// exp(-h f / k_B T): the deep-cold limit of the Bose occupancy.
double thermal_occupation(double frequency_hz, double temperature_k);

// occupation * gamma_r / (eta_swap * D).
double min_testable_rate(double occupation_noise, double cross_section, double gamma_r_hz,
                         double eta_swap);

// (n_dot_c * eta_swap * eta_disp)^-1 / n_resonators; +inf when the flux is 0.
double measurement_time(double n_dot_c, double eta_swap, double eta_disp, int n_resonators);

NoiseBudget assemble_budget(const BudgetInputs& inputs);

}  // namespace cbound::noise
