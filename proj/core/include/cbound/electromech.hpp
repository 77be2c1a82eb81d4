// Bulk-acoustic-wave mode spectrum of a flat-cap cylindrical cavity and its
// piezoelectric coupling to a tunable qubit.

#pragma once

#include <vector>

#include "cbound/csl.hpp"

namespace cbound::electromech {

struct PiezoQubitParams {
    double d33 = 80e-12;               // piezoelectric coefficient, m/V
    double c33 = 106e9;                // stiffness, Pa
    double e_field = 2.8e-2;           // qubit electric field in the transducer, V/m
    double electrode_diameter = 55e-6; // d_e, m
    double cavity_diameter = 70e-6;    // d, m
    double v_longitudinal = 6320.0;    // m/s
    double v_transverse = 3900.0;      // m/s
    double band_min_hz = 4e9;          // qubit tuning range
    double band_max_hz = 9e9;

    void validate() const;
};

struct ModeSpec {
    int l = 0;             // longitudinal index (anti-node count)
    int m = 0;             // transverse index
    double omega = 0.0;    // angular frequency, rad/s
    double coupling = 0.0; // |g|, rad/s
    double beta = 0.0;     // strain normalization
};

// omega_{l,m} = sqrt((l pi/h)^2 v_l^2 + (2 j_{0,m}/d)^2 v_t^2); strictly
// increasing in both indices.
double mode_frequency(int l, int m, const PiezoQubitParams& params, double height);

// Strain normalization beta_{l,m} = sqrt(hbar w / (pi h c33 Int J0^2 r dr)),
// radial integral over [0, d/2].
double normalization_beta(int l, int m, const PiezoQubitParams& params, double height);

// closed form of Int_0^{d/2} J0(2 j r/d)^2 r dr
double radial_norm_integral(double cavity_diameter, int m);

// closed form of Int_0^{d_e/2} J0(2 j r/d) r dr
double electrode_overlap_integral(double cavity_diameter, double electrode_diameter, int m);

// |g_{l,m}| with hbar g = (4h/l) c33 d33 E0 beta Int_0^{de/2} J0 r dr for odd
// l; the longitudinal overlap integrates to zero for even l.
double coupling_strength(int l, int m, const csl::ResonatorGeometry& geom,
                         const PiezoQubitParams& params);

ModeSpec make_mode(int l, int m, const csl::ResonatorGeometry& geom,
                   const PiezoQubitParams& params);

// All (l, m = 0) modes with ordinary frequency inside [band_min, band_max],
// sorted by frequency, couplings attached.
std::vector<ModeSpec> enumerate_modes(const PiezoQubitParams& params,
                                      const csl::ResonatorGeometry& geom,
                                      double band_min_hz, double band_max_hz);

// The simulated register around a target longitudinal mode: (l0, m = 0..m_max)
// plus, optionally, the adjacent (l0 +- 1, m = 0) modes.
std::vector<ModeSpec> make_register_modes(int target_l, int m_max, bool include_adjacent,
                                          const csl::ResonatorGeometry& geom,
                                          const PiezoQubitParams& params);

}  // namespace cbound::electromech
