#include <benchmark/benchmark.h>

#include "cbound/constants.hpp"
#include "cbound/dynamics.hpp"
#include "cbound/noise.hpp"

using namespace cbound;

namespace {

csl::ResonatorGeometry reference_geometry() {
    return csl::ResonatorGeometry::from_height(35e-6, 240e-6, 503, 2648.0);
}

dynamics::ModeRegister reference_register() {
    electromech::PiezoQubitParams piezo;
    piezo.v_longitudinal = 6346.0;
    dynamics::ModeRegister reg;
    reg.modes = electromech::make_register_modes(503, 3, true, reference_geometry(), piezo);
    return reg;
}

dynamics::NoiseRates reference_rates() {
    dynamics::NoiseRates rates;
    rates.n_dot_c = 3.8e-4;
    return rates;
}

void BM_bessel_i_scaled_large(benchmark::State& state) {
    double x = 6.125e4;
    for (auto _ : state) {
        benchmark::DoNotOptimize(numerics::bessel_i_scaled(0, x));
        benchmark::DoNotOptimize(numerics::bessel_i_scaled(1, x));
    }
}
BENCHMARK(BM_bessel_i_scaled_large);

void BM_erfc_tail(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(numerics::erfc(3.9528));
        benchmark::DoNotOptimize(numerics::log_erfc(30.0));
    }
}
BENCHMARK(BM_erfc_tail);

void BM_longitudinal_integral(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(csl::longitudinal_integral(9.5e-7, 1e-7));
    }
}
BENCHMARK(BM_longitudinal_integral);

void BM_cross_section(benchmark::State& state) {
    const auto geom = reference_geometry();
    const double omega = constants::two_pi * 6.65e9;
    for (auto _ : state) {
        benchmark::DoNotOptimize(csl::cross_section(geom, 1e-7, omega));
    }
}
BENCHMARK(BM_cross_section);

void BM_lindblad_rhs_6mode(benchmark::State& state) {
    const auto reg = reference_register();
    const auto h = dynamics::build_hamiltonian(reg, 0.0, dynamics::detunings_from_target(reg, 1));
    const dynamics::LindbladGenerator gen(reg, h, reference_rates());
    const auto rho = dynamics::DensityMatrix::single_phonon(reg, 1);
    dynamics::DenseMatrix out(reg.dimension(), reg.dimension());
    dynamics::DenseMatrix scratch(reg.dimension(), reg.dimension());
    for (auto _ : state) {
        gen.rhs_into(rho.matrix, out, scratch);
        benchmark::DoNotOptimize(out.data());
    }
}
BENCHMARK(BM_lindblad_rhs_6mode);

void BM_evolve_6mode_short(benchmark::State& state) {
    const auto reg = reference_register();
    const auto h = dynamics::build_hamiltonian(reg, 0.0, dynamics::detunings_from_target(reg, 1));
    const auto rho0 = dynamics::DensityMatrix::single_phonon(reg, 1);
    dynamics::EvolveOptions options;
    options.check_invariants = false;
    for (auto _ : state) {
        const auto traj = dynamics::evolve(reg, h, reference_rates(), rho0, {5e-9}, options);
        benchmark::DoNotOptimize(traj.final_state.matrix.data());
    }
}
BENCHMARK(BM_evolve_6mode_short)->Unit(benchmark::kMillisecond);

void BM_budget(benchmark::State& state) {
    noise::BudgetInputs inputs;
    for (auto _ : state) {
        benchmark::DoNotOptimize(noise::assemble_budget(inputs));
    }
}
BENCHMARK(BM_budget);

}  // namespace

BENCHMARK_MAIN();
