// Open-system simulator for a qubit exchanging single excitations with a
// register of acoustic modes: Hamiltonian assembly, Lindblad evolution with
// adaptive step-doubling RK4, swap and multi-swap cooling protocols, and the
// deterministic measurement schedule.
//
// Unit convention: decay/excitation rates are stored as ordinary frequencies
// (the X in "gamma/2pi = X Hz") and converted to angular rates inside the
// generator; the collapse heating rate n_dot_c is a plain flux in 1/s and
// enters unconverted. Couplings and detunings in ModeSpec are angular.

#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include "cbound/electromech.hpp"

namespace cbound::dynamics {

using Complex = std::complex<double>;
using SparseOp = Eigen::SparseMatrix<Complex>;
using DenseMatrix = Eigen::MatrixXcd;

struct ModeRegister {
    std::vector<electromech::ModeSpec> modes;
    int fock_cutoff = 1;
    int dimension_cap = 4096;

    int mode_levels() const { return fock_cutoff + 1; }
    int dimension() const;
    void validate() const;
};

struct InvariantTolerances {
    double hermiticity = 1e-10;
    double trace = 1e-9;
    double positivity = 1e-8;
    double purity = 1e-9;
};

struct DensityMatrix {
    DenseMatrix matrix;

    static DensityMatrix vacuum(const ModeRegister& reg);
    // Diagonal mixture {1 - p_excited, p_excited} on the qubit, modes in vacuum.
    static DensityMatrix qubit_mixture(const ModeRegister& reg, double p_excited);
    // |g> with a single phonon in the given register mode.
    static DensityMatrix single_phonon(const ModeRegister& reg, int mode_index);

    double trace_error() const;
    double hermiticity_error() const;
    double purity() const;
    double min_eigenvalue() const;
    void check_invariants(const InvariantTolerances& tol = {}) const;
};

struct NoiseRates {
    double gamma_q_hz = 27e3;     // qubit decay
    double gamma_phi_hz = 0.3e6;  // qubit dephasing
    double gamma_r_hz = 300.0;    // mechanical decay, shared by all modes
    double gamma_qp_hz = 30.0;    // quasiparticle excitation
    double gamma_p_hz = 0.5;      // Purcell excitation
    double n_thermal = 0.0;       // mechanical thermal occupancy
    double n_dot_c = 0.0;         // collapse heating flux, 1/s (not an angular rate)

    void validate() const;
    static double bose_occupation(double omega_rad, double temperature_k);
};

class IntegrationError : public std::runtime_error {
public:
    IntegrationError(const std::string& what, double t, double step)
        : std::runtime_error(what), time(t), step_size(step) {}

    double time;
    double step_size;
};

// Jaynes-Cummings Hamiltonian in the rotating frame of a reference mode:
// delta_q sigma+sigma- + sum_k delta_k b_k^dag b_k + g_k (sigma+ b_k + h.c.).
// Detunings in rad/s; one detuning per register mode.
SparseOp build_hamiltonian(const ModeRegister& reg, double qubit_detuning,
                           const std::vector<double>& mode_detunings);

// Detunings of every register mode relative to the mode at target_index.
std::vector<double> detunings_from_target(const ModeRegister& reg, int target_index);

// Precomputed Lindblad generator for one (H, rates) pair. The anticommutator
// halves of every dissipator are folded into a single non-Hermitian drift
// K = -iH - (1/2) sum L^dag L, so one evaluation costs two drift products and
// one sandwich per jump operator.
class LindbladGenerator {
public:
    LindbladGenerator(const ModeRegister& reg, SparseOp hamiltonian, const NoiseRates& rates);

    DenseMatrix rhs(const DenseMatrix& rho) const;
    // Allocation-free form for the integrator hot loop.
    void rhs_into(const DenseMatrix& rho, DenseMatrix& out, DenseMatrix& scratch) const;
    int dimension() const { return dim_; }

private:
    int dim_ = 0;
    SparseOp drift_;         // -iH - 1/2 sum L^dag L
    SparseOp drift_adjoint_;
    struct Channel {
        SparseOp op;  // sqrt(rate) * jump operator
        SparseOp op_dag;
    };
    std::vector<Channel> channels_;
};

// One-shot master-equation right-hand side; trace of the result vanishes.
DenseMatrix lindblad_rhs(const DensityMatrix& rho, const SparseOp& hamiltonian,
                         const NoiseRates& rates, const ModeRegister& reg);

struct EvolveOptions {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double initial_step = 0.0;  // 0: chosen from the first sample interval
    double fixed_dt = 0.0;      // >0: plain RK4 with this step (no adaptivity)
    bool store_states = false;
    bool check_invariants = true;
    InvariantTolerances invariant_tol = {};
};

struct Trajectory {
    std::vector<double> times;
    std::vector<double> qubit_population;
    std::vector<std::vector<double>> mode_population;  // [sample][mode]
    std::vector<double> trace_error;
    std::vector<double> purity;
    std::vector<DensityMatrix> states;  // filled when store_states
    DensityMatrix final_state;
};

Trajectory evolve(const ModeRegister& reg, const SparseOp& hamiltonian, const NoiseRates& rates,
                  const DensityMatrix& rho0, const std::vector<double>& sample_times,
                  const EvolveOptions& options = {});

double qubit_population(const DensityMatrix& rho, const ModeRegister& reg);
double mode_population(const DensityMatrix& rho, const ModeRegister& reg, int mode_index);
DenseMatrix partial_trace_modes(const DensityMatrix& rho, const ModeRegister& reg);

// 1/2 * trace norm of (a - b).
double trace_distance(const DenseMatrix& a, const DenseMatrix& b);

struct SwapResult {
    double efficiency = 0.0;  // max qubit population over the swap window
    double time_at_max = 0.0;
    Trajectory trajectory;
};

// Single-excitation swap figure: start in |g>|1_target>, qubit resonant with
// the target, scan t in [0, pi/g].
SwapResult swap_efficiency(const ModeRegister& reg, const NoiseRates& rates, int target_index,
                           const EvolveOptions& options = {}, bool keep_trajectory = false);

struct CoolingResult {
    std::vector<double> occupancies;    // qubit population after each swap
    std::vector<double> measure_times;  // within-swap time of each reading
    double initial_population = 0.0;
};

// Repeated swaps against fresh cold registers, starting from the
// quasiparticle/Purcell equilibrium mixture (or an explicit override).
CoolingResult cooling_protocol(const ModeRegister& reg, const NoiseRates& rates, int n_swaps,
                               double initial_excited_population = -1.0,
                               const EvolveOptions& options = {});

// n_dot_c / gamma_r, both in the ordinary-frequency convention.
double steady_state_occupancy(double n_dot_c, double gamma_r_hz);

enum class EventKind { tune, swap, measure, discard_initialization, decouple };

struct ScheduleEvent {
    EventKind kind = EventKind::tune;
    int mode_index = -1;  // -1 for decouple
    double t_start = 0.0;
    double duration = 0.0;
};

struct CycleConfig {
    int cycles = 1;
    double tune_time = 0.0;
    double measure_time = 56e-9;
    double decouple_time = 0.0;  // 0: defaults to 1/gamma_r
    int discard_initial = 0;     // leading measurements used only to initialize
    double eta_swap = 0.8;
    double eta_disp = 0.1;
};

struct Schedule {
    std::vector<ScheduleEvent> events;
    double cycle_duration = 0.0;
    double expected_true_positives_per_cycle = 0.0;
    double detection_rate = 0.0;  // expected true positives per second
};

// Deterministic tune/swap/measure/decouple timeline over the coupled register
// modes, with expected-count accounting at the steady-state collapse occupancy.
Schedule protocol_schedule(const ModeRegister& reg, const NoiseRates& rates,
                           const CycleConfig& config);

}  // namespace cbound::dynamics
