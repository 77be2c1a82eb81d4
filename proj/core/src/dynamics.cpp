#include "cbound/dynamics.hpp"

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cbound/constants.hpp"

namespace cbound::dynamics {

namespace {

using constants::two_pi;
using Triplet = Eigen::Triplet<Complex>;

SparseOp identity_op(int n) {
    SparseOp id(n, n);
    id.setIdentity();
    return id;
}

SparseOp qubit_sigma_minus() {
    SparseOp op(2, 2);
    op.insert(0, 1) = 1.0;  // |g><e|
    op.makeCompressed();
    return op;
}

SparseOp qubit_sigma_z() {
    SparseOp op(2, 2);
    op.insert(0, 0) = -1.0;
    op.insert(1, 1) = 1.0;
    op.makeCompressed();
    return op;
}

SparseOp mode_annihilation(int levels) {
    SparseOp op(levels, levels);
    for (int n = 1; n < levels; ++n) {
        op.insert(n - 1, n) = std::sqrt(static_cast<double>(n));
    }
    op.makeCompressed();
    return op;
}

// Embeds a local operator at one slot of the qubit (x) mode_0 (x) ... chain;
// slot 0 is the qubit and is the slowest index.
SparseOp embed(const SparseOp& local, int slot, const ModeRegister& reg) {
    const int levels = reg.mode_levels();
    SparseOp full = slot == 0 ? local : identity_op(2);
    for (int k = 0; k < static_cast<int>(reg.modes.size()); ++k) {
        const SparseOp& next = (slot == k + 1) ? local : identity_op(levels);
        full = Eigen::kroneckerProduct(full, next).eval();
    }
    full.makeCompressed();
    return full;
}

int mode_block_size(const ModeRegister& reg) {
    int size = 1;
    for (size_t k = 0; k < reg.modes.size(); ++k) {
        size *= reg.mode_levels();
    }
    return size;
}

int mode_digit(int basis_index, int mode_index, const ModeRegister& reg) {
    const int levels = reg.mode_levels();
    int stride = 1;
    for (int k = static_cast<int>(reg.modes.size()) - 1; k > mode_index; --k) {
        stride *= levels;
    }
    return (basis_index / stride) % levels;
}

struct Rk4Workspace {
    DenseMatrix k1, k2, k3, k4, stage, scratch;

    explicit Rk4Workspace(int dim)
        : k1(dim, dim), k2(dim, dim), k3(dim, dim), k4(dim, dim), stage(dim, dim),
          scratch(dim, dim) {}
};

// out must not alias rho.
void rk4_into(const LindbladGenerator& gen, const DenseMatrix& rho, double h, DenseMatrix& out,
              Rk4Workspace& ws) {
    gen.rhs_into(rho, ws.k1, ws.scratch);
    ws.stage = rho + (0.5 * h) * ws.k1;
    gen.rhs_into(ws.stage, ws.k2, ws.scratch);
    ws.stage = rho + (0.5 * h) * ws.k2;
    gen.rhs_into(ws.stage, ws.k3, ws.scratch);
    ws.stage = rho + h * ws.k3;
    gen.rhs_into(ws.stage, ws.k4, ws.scratch);
    out = rho + (h / 6.0) * (ws.k1 + 2.0 * ws.k2 + 2.0 * ws.k3 + ws.k4);
}

}  // namespace

int ModeRegister::dimension() const {
    double dim = 2.0;
    for (size_t k = 0; k < modes.size(); ++k) {
        dim *= mode_levels();
    }
    return dim > 1e9 ? 1 << 30 : static_cast<int>(dim);
}

void ModeRegister::validate() const {
    if (modes.empty()) {
        throw std::invalid_argument("ModeRegister: needs at least one mode");
    }
    if (fock_cutoff < 1) {
        throw std::invalid_argument("ModeRegister: fock_cutoff must be >= 1");
    }
    if (dimension() > dimension_cap) {
        std::ostringstream msg;
        msg << "ModeRegister: Hilbert dimension " << dimension() << " exceeds cap "
            << dimension_cap;
        throw std::invalid_argument(msg.str());
    }
}

DensityMatrix DensityMatrix::vacuum(const ModeRegister& reg) {
    DensityMatrix rho;
    rho.matrix = DenseMatrix::Zero(reg.dimension(), reg.dimension());
    rho.matrix(0, 0) = 1.0;
    return rho;
}

DensityMatrix DensityMatrix::qubit_mixture(const ModeRegister& reg, double p_excited) {
    if (p_excited < 0.0 || p_excited > 1.0) {
        throw std::domain_error("qubit_mixture: population must be in [0, 1]");
    }
    DensityMatrix rho = vacuum(reg);
    const int excited_index = mode_block_size(reg);  // |e, vac>
    rho.matrix(0, 0) = 1.0 - p_excited;
    rho.matrix(excited_index, excited_index) = p_excited;
    return rho;
}

DensityMatrix DensityMatrix::single_phonon(const ModeRegister& reg, int mode_index) {
    if (mode_index < 0 || mode_index >= static_cast<int>(reg.modes.size())) {
        throw std::out_of_range("single_phonon: mode index out of range");
    }
    const int levels = reg.mode_levels();
    int stride = 1;
    for (int k = static_cast<int>(reg.modes.size()) - 1; k > mode_index; --k) {
        stride *= levels;
    }
    DensityMatrix rho;
    rho.matrix = DenseMatrix::Zero(reg.dimension(), reg.dimension());
    rho.matrix(stride, stride) = 1.0;  // |g, 1_k>
    return rho;
}

double DensityMatrix::trace_error() const { return std::abs(matrix.trace().real() - 1.0) +
                                                   std::abs(matrix.trace().imag()); }

double DensityMatrix::hermiticity_error() const {
    return (matrix - matrix.adjoint()).cwiseAbs().maxCoeff();
}

// tr(rho^2) evaluated as the Frobenius norm; exact for Hermitian states, and
// hermiticity is enforced to 1e-10 wherever purity is checked.
double DensityMatrix::purity() const { return matrix.squaredNorm(); }

double DensityMatrix::min_eigenvalue() const {
    const DenseMatrix herm = 0.5 * (matrix + matrix.adjoint());
    Eigen::SelfAdjointEigenSolver<DenseMatrix> solver(herm, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

void DensityMatrix::check_invariants(const InvariantTolerances& tol) const {
    std::ostringstream msg;
    if (hermiticity_error() > tol.hermiticity) {
        msg << "density matrix lost hermiticity: " << hermiticity_error();
        throw std::runtime_error(msg.str());
    }
    if (trace_error() > tol.trace) {
        msg << "density matrix lost unit trace: deviation " << trace_error();
        throw std::runtime_error(msg.str());
    }
    if (min_eigenvalue() < -tol.positivity) {
        msg << "density matrix lost positivity: min eigenvalue " << min_eigenvalue();
        throw std::runtime_error(msg.str());
    }
    if (purity() > 1.0 + tol.purity) {
        msg << "density matrix purity exceeds 1: " << purity();
        throw std::runtime_error(msg.str());
    }
}

void NoiseRates::validate() const {
    if (gamma_q_hz < 0.0 || gamma_phi_hz < 0.0 || gamma_r_hz < 0.0 || gamma_qp_hz < 0.0 ||
        gamma_p_hz < 0.0 || n_thermal < 0.0 || n_dot_c < 0.0) {
        throw std::invalid_argument("NoiseRates: rates must be >= 0");
    }
}

double NoiseRates::bose_occupation(double omega_rad, double temperature_k) {
    if (!(temperature_k > 0.0)) {
        throw std::domain_error("bose_occupation: temperature must be > 0");
    }
    const double x = constants::hbar * omega_rad / (constants::k_boltzmann * temperature_k);
    return 1.0 / std::expm1(x);
}

SparseOp build_hamiltonian(const ModeRegister& reg, double qubit_detuning,
                           const std::vector<double>& mode_detunings) {
    reg.validate();
    if (mode_detunings.size() != reg.modes.size()) {
        throw std::invalid_argument("build_hamiltonian: one detuning per mode required");
    }
    for (double d : mode_detunings) {
        if (!std::isfinite(d)) {
            throw std::invalid_argument("build_hamiltonian: detunings must be finite");
        }
    }
    const SparseOp sm = qubit_sigma_minus();
    const SparseOp sp = SparseOp(sm.adjoint());
    const SparseOp b_local = mode_annihilation(reg.mode_levels());

    const SparseOp sp_full = embed(sp, 0, reg);
    const SparseOp sm_full = embed(sm, 0, reg);
    SparseOp h = SparseOp(reg.dimension(), reg.dimension());
    h = (qubit_detuning * (sp_full * sm_full)).pruned();
    for (size_t k = 0; k < reg.modes.size(); ++k) {
        const SparseOp b = embed(b_local, static_cast<int>(k) + 1, reg);
        const SparseOp b_dag = SparseOp(b.adjoint());
        h += mode_detunings[k] * (b_dag * b);
        const double g = reg.modes[k].coupling;
        if (g != 0.0) {
            h += g * SparseOp(sp_full * b) + g * SparseOp(sm_full * b_dag);
        }
    }
    h.makeCompressed();
    return h;
}

std::vector<double> detunings_from_target(const ModeRegister& reg, int target_index) {
    if (target_index < 0 || target_index >= static_cast<int>(reg.modes.size())) {
        throw std::out_of_range("detunings_from_target: target index out of range");
    }
    std::vector<double> detunings(reg.modes.size());
    const double omega_ref = reg.modes[target_index].omega;
    for (size_t k = 0; k < reg.modes.size(); ++k) {
        detunings[k] = reg.modes[k].omega - omega_ref;
    }
    return detunings;
}

LindbladGenerator::LindbladGenerator(const ModeRegister& reg, SparseOp hamiltonian,
                                     const NoiseRates& rates)
    : dim_(reg.dimension()) {
    reg.validate();
    rates.validate();
    if (hamiltonian.rows() != dim_ || hamiltonian.cols() != dim_) {
        throw std::invalid_argument("LindbladGenerator: Hamiltonian dimension mismatch");
    }

    const Complex i_unit(0.0, 1.0);
    drift_ = SparseOp((-i_unit) * hamiltonian);

    const auto add_channel = [this](double rate, const SparseOp& op) {
        if (rate <= 0.0) {
            return;
        }
        Channel ch;
        ch.op = std::sqrt(rate) * op;
        ch.op_dag = SparseOp(ch.op.adjoint());
        drift_ -= SparseOp(Complex(0.5) * (ch.op_dag * ch.op));
        channels_.push_back(std::move(ch));
    };

    const SparseOp sm = embed(qubit_sigma_minus(), 0, reg);
    const SparseOp sp = SparseOp(sm.adjoint());
    const SparseOp sz = embed(qubit_sigma_z(), 0, reg);
    add_channel(two_pi * rates.gamma_q_hz, sm);
    add_channel(two_pi * (rates.gamma_qp_hz + rates.gamma_p_hz), sp);
    add_channel(two_pi * rates.gamma_phi_hz / 2.0, sz);

    const SparseOp b_local = mode_annihilation(reg.mode_levels());
    for (size_t k = 0; k < reg.modes.size(); ++k) {
        const SparseOp b = embed(b_local, static_cast<int>(k) + 1, reg);
        const SparseOp b_dag = SparseOp(b.adjoint());
        add_channel(two_pi * rates.gamma_r_hz * (1.0 + rates.n_thermal), b);
        // The collapse flux is a plain rate in 1/s; only the thermal part of
        // the heating channel carries the angular conversion.
        add_channel(two_pi * rates.gamma_r_hz * rates.n_thermal + rates.n_dot_c, b_dag);
    }

    drift_.makeCompressed();
    drift_adjoint_ = SparseOp(drift_.adjoint());
    drift_adjoint_.makeCompressed();
}

DenseMatrix LindbladGenerator::rhs(const DenseMatrix& rho) const {
    DenseMatrix out(dim_, dim_);
    DenseMatrix scratch(dim_, dim_);
    rhs_into(rho, out, scratch);
    return out;
}

void LindbladGenerator::rhs_into(const DenseMatrix& rho, DenseMatrix& out,
                                 DenseMatrix& scratch) const {
    out.noalias() = drift_ * rho;
    out.noalias() += rho * drift_adjoint_;
    for (const Channel& ch : channels_) {
        scratch.noalias() = ch.op * rho;
        out.noalias() += scratch * ch.op_dag;
    }
}

DenseMatrix lindblad_rhs(const DensityMatrix& rho, const SparseOp& hamiltonian,
                         const NoiseRates& rates, const ModeRegister& reg) {
    LindbladGenerator gen(reg, hamiltonian, rates);
    return gen.rhs(rho.matrix);
}

Trajectory evolve(const ModeRegister& reg, const SparseOp& hamiltonian, const NoiseRates& rates,
                  const DensityMatrix& rho0, const std::vector<double>& sample_times,
                  const EvolveOptions& options) {
    reg.validate();
    if (sample_times.empty()) {
        throw std::invalid_argument("evolve: need at least one sample time");
    }
    if (!std::is_sorted(sample_times.begin(), sample_times.end()) || sample_times.front() < 0.0) {
        throw std::invalid_argument("evolve: sample times must be sorted and >= 0");
    }

    const LindbladGenerator gen(reg, hamiltonian, rates);
    const int n_modes = static_cast<int>(reg.modes.size());

    Trajectory traj;
    traj.times = sample_times;
    traj.qubit_population.reserve(sample_times.size());
    traj.mode_population.reserve(sample_times.size());
    traj.trace_error.reserve(sample_times.size());
    traj.purity.reserve(sample_times.size());

    DensityMatrix state = rho0;
    double t = 0.0;
    const double t_final = sample_times.back();
    double h = options.fixed_dt > 0.0
                   ? options.fixed_dt
                   : (options.initial_step > 0.0 ? options.initial_step
                                                 : std::max(t_final, 1e-12) / 1000.0);

    const auto record = [&](const DensityMatrix& rho) {
        traj.qubit_population.push_back(qubit_population(rho, reg));
        std::vector<double> pops(n_modes);
        for (int k = 0; k < n_modes; ++k) {
            pops[k] = mode_population(rho, reg, k);
        }
        traj.mode_population.push_back(std::move(pops));
        traj.trace_error.push_back(rho.trace_error());
        traj.purity.push_back(rho.purity());
        if (options.check_invariants) {
            rho.check_invariants(options.invariant_tol);
        }
        if (options.store_states) {
            traj.states.push_back(rho);
        }
    };

    const int dim = reg.dimension();
    Rk4Workspace ws(dim);
    DenseMatrix full(dim, dim);
    DenseMatrix half(dim, dim);
    DenseMatrix half2(dim, dim);

    for (double ts : sample_times) {
        while (ts - t > 1e-14 * std::max(ts, 1e-30)) {
            if (options.fixed_dt > 0.0) {
                const int n = std::max(
                    1, static_cast<int>(std::ceil((ts - t) / options.fixed_dt - 1e-12)));
                const double dt = (ts - t) / n;
                for (int i = 0; i < n; ++i) {
                    rk4_into(gen, state.matrix, dt, full, ws);
                    state.matrix.swap(full);
                }
                t = ts;
                break;
            }
            const bool clipped = (ts - t) < h;
            const double h_try = clipped ? (ts - t) : h;
            rk4_into(gen, state.matrix, h_try, full, ws);
            rk4_into(gen, state.matrix, 0.5 * h_try, half, ws);
            rk4_into(gen, half, 0.5 * h_try, half2, ws);
            const double err = (half2 - full).cwiseAbs().maxCoeff() / 15.0;
            const double scale = std::max(1.0, state.matrix.cwiseAbs().maxCoeff());
            const double tol = std::max(options.abs_tol, options.rel_tol * scale);
            if (err <= tol) {
                state.matrix = half2 + (half2 - full) / 15.0;
                t += h_try;
                if (!clipped) {
                    const double grow = err > 0.0 ? 0.9 * std::pow(tol / err, 0.2) : 5.0;
                    h *= std::clamp(grow, 0.2, 5.0);
                }
            } else {
                h = h_try * std::clamp(0.9 * std::pow(tol / err, 0.2), 0.2, 0.9);
                if (h < 1e-16 * std::max(t_final, 1e-12)) {
                    throw IntegrationError("evolve: step size underflow", t, h);
                }
            }
        }
        record(state);
    }
    traj.final_state = state;
    return traj;
}

double qubit_population(const DensityMatrix& rho, const ModeRegister& reg) {
    const int block = mode_block_size(reg);
    double pop = 0.0;
    for (int i = block; i < 2 * block; ++i) {
        pop += rho.matrix(i, i).real();
    }
    return pop;
}

double mode_population(const DensityMatrix& rho, const ModeRegister& reg, int mode_index) {
    if (mode_index < 0 || mode_index >= static_cast<int>(reg.modes.size())) {
        throw std::out_of_range("mode_population: mode index out of range");
    }
    const int dim = reg.dimension();
    const int block = mode_block_size(reg);
    double pop = 0.0;
    for (int i = 0; i < dim; ++i) {
        const int digit = mode_digit(i % block, mode_index, reg);
        if (digit > 0) {
            pop += digit * rho.matrix(i, i).real();
        }
    }
    return pop;
}

DenseMatrix partial_trace_modes(const DensityMatrix& rho, const ModeRegister& reg) {
    const int block = mode_block_size(reg);
    DenseMatrix reduced = DenseMatrix::Zero(2, 2);
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
            Complex sum = 0.0;
            for (int j = 0; j < block; ++j) {
                sum += rho.matrix(a * block + j, b * block + j);
            }
            reduced(a, b) = sum;
        }
    }
    return reduced;
}

double trace_distance(const DenseMatrix& a, const DenseMatrix& b) {
    const DenseMatrix diff = 0.5 * ((a - b) + (a - b).adjoint().eval());
    Eigen::SelfAdjointEigenSolver<DenseMatrix> solver(diff, Eigen::EigenvaluesOnly);
    return 0.5 * solver.eigenvalues().cwiseAbs().sum();
}

SwapResult swap_efficiency(const ModeRegister& reg, const NoiseRates& rates, int target_index,
                           const EvolveOptions& options, bool keep_trajectory) {
    reg.validate();
    const double g = reg.modes.at(target_index).coupling;
    if (!(g > 0.0)) {
        throw std::domain_error("swap_efficiency: target mode is uncoupled");
    }
    const SparseOp h = build_hamiltonian(reg, 0.0, detunings_from_target(reg, target_index));
    const double window = constants::pi / g;
    const int n_samples = 321;
    std::vector<double> times(n_samples);
    for (int i = 0; i < n_samples; ++i) {
        times[i] = window * i / (n_samples - 1);
    }
    Trajectory traj = evolve(reg, h, rates, DensityMatrix::single_phonon(reg, target_index),
                             times, options);

    int best = static_cast<int>(std::max_element(traj.qubit_population.begin(),
                                                 traj.qubit_population.end()) -
                                traj.qubit_population.begin());
    SwapResult result;
    result.efficiency = traj.qubit_population[best];
    result.time_at_max = traj.times[best];
    if (best > 0 && best + 1 < n_samples) {
        // parabolic refinement on the uniform sample grid
        const double y0 = traj.qubit_population[best - 1];
        const double y1 = traj.qubit_population[best];
        const double y2 = traj.qubit_population[best + 1];
        const double denom = y0 - 2.0 * y1 + y2;
        if (denom < 0.0) {
            const double shift = 0.5 * (y0 - y2) / denom;
            result.time_at_max += shift * (traj.times[1] - traj.times[0]);
            result.efficiency = y1 - 0.25 * (y0 - y2) * shift;
        }
    }
    if (keep_trajectory) {
        result.trajectory = std::move(traj);
    }
    return result;
}

CoolingResult cooling_protocol(const ModeRegister& reg, const NoiseRates& rates, int n_swaps,
                               double initial_excited_population, const EvolveOptions& options) {
    reg.validate();
    rates.validate();
    if (n_swaps < 1 || n_swaps > 64) {
        throw std::invalid_argument("cooling_protocol: n_swaps must be in [1, 64]");
    }
    int target = 0;
    for (size_t k = 1; k < reg.modes.size(); ++k) {
        if (reg.modes[k].coupling > reg.modes[target].coupling) {
            target = static_cast<int>(k);
        }
    }
    const double g = reg.modes[target].coupling;
    if (!(g > 0.0)) {
        throw std::domain_error("cooling_protocol: register has no coupled mode");
    }

    CoolingResult result;
    result.initial_population = initial_excited_population >= 0.0
                                    ? initial_excited_population
                                    : (rates.gamma_qp_hz + rates.gamma_p_hz) / rates.gamma_q_hz;

    const SparseOp h = build_hamiltonian(reg, 0.0, detunings_from_target(reg, target));
    const double t_swap = constants::pi / (2.0 * g);

    // Measurement happens at the within-window population minimum, scanned
    // over [0.5, 1.3] swap times; the qubit then retunes to a fresh register.
    const int n_samples = 161;
    std::vector<double> times(n_samples);
    for (int i = 0; i < n_samples; ++i) {
        times[i] = 1.3 * t_swap * i / (n_samples - 1);
    }
    const int window_start = static_cast<int>((0.5 / 1.3) * (n_samples - 1));

    DensityMatrix state = DensityMatrix::qubit_mixture(reg, result.initial_population);
    for (int s = 0; s < n_swaps; ++s) {
        Trajectory scan = evolve(reg, h, rates, state, times, options);
        int best = window_start;
        for (int i = window_start; i < n_samples; ++i) {
            if (scan.qubit_population[i] < scan.qubit_population[best]) {
                best = i;
            }
        }
        result.occupancies.push_back(scan.qubit_population[best]);
        result.measure_times.push_back(times[best]);

        // Re-evolve to the measurement time and hand the qubit a fresh
        // vacuum register for the next swap.
        std::vector<double> to_measure = {times[best]};
        Trajectory seg = evolve(reg, h, rates, state, to_measure, options);
        const DenseMatrix qubit = partial_trace_modes(seg.final_state, reg);
        state = DensityMatrix::vacuum(reg);
        const int block = mode_block_size(reg);
        state.matrix.setZero();
        for (int a = 0; a < 2; ++a) {
            for (int b = 0; b < 2; ++b) {
                state.matrix(a * block, b * block) = qubit(a, b);
            }
        }
    }
    return result;
}

double steady_state_occupancy(double n_dot_c, double gamma_r_hz) {
    if (!(gamma_r_hz > 0.0)) {
        throw std::domain_error("steady_state_occupancy: gamma_r must be > 0");
    }
    if (n_dot_c < 0.0) {
        throw std::domain_error("steady_state_occupancy: n_dot_c must be >= 0");
    }
    return n_dot_c / gamma_r_hz;
}

Schedule protocol_schedule(const ModeRegister& reg, const NoiseRates& rates,
                           const CycleConfig& config) {
    reg.validate();
    rates.validate();
    if (config.cycles < 1) {
        throw std::invalid_argument("protocol_schedule: cycles must be >= 1");
    }

    std::vector<int> coupled;
    for (size_t k = 0; k < reg.modes.size(); ++k) {
        if (reg.modes[k].coupling > 0.0) {
            coupled.push_back(static_cast<int>(k));
        }
    }
    if (coupled.empty()) {
        throw std::invalid_argument("protocol_schedule: register has no coupled mode");
    }

    const double decouple =
        config.decouple_time > 0.0 ? config.decouple_time : 1.0 / rates.gamma_r_hz;

    Schedule schedule;
    double t = 0.0;
    int measurements_seen = 0;
    for (int cycle = 0; cycle < config.cycles; ++cycle) {
        for (int k : coupled) {
            const double t_swap = constants::pi / (2.0 * reg.modes[k].coupling);
            schedule.events.push_back({EventKind::tune, k, t, config.tune_time});
            t += config.tune_time;
            schedule.events.push_back({EventKind::swap, k, t, t_swap});
            t += t_swap;
            const EventKind kind = measurements_seen < config.discard_initial
                                       ? EventKind::discard_initialization
                                       : EventKind::measure;
            schedule.events.push_back({kind, k, t, config.measure_time});
            t += config.measure_time;
            ++measurements_seen;
        }
        schedule.events.push_back({EventKind::decouple, -1, t, decouple});
        t += decouple;
    }

    const double p_csl =
        config.eta_swap * steady_state_occupancy(rates.n_dot_c, rates.gamma_r_hz);
    schedule.expected_true_positives_per_cycle =
        static_cast<double>(coupled.size()) * p_csl * config.eta_disp;
    schedule.cycle_duration = t / config.cycles;
    schedule.detection_rate =
        schedule.expected_true_positives_per_cycle / schedule.cycle_duration;
    return schedule;
}

}  // namespace cbound::dynamics
