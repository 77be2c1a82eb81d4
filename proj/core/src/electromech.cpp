#include "cbound/electromech.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cbound/constants.hpp"
#include "cbound/numerics.hpp"

namespace cbound::electromech {

namespace {

using constants::hbar;
using constants::pi;
using constants::two_pi;

}  // namespace

void PiezoQubitParams::validate() const {
    if (!(d33 > 0.0) || !(c33 > 0.0) || !(e_field > 0.0)) {
        throw std::invalid_argument("PiezoQubitParams: material constants must be > 0");
    }
    if (!(electrode_diameter > 0.0) || !(cavity_diameter > 0.0) ||
        electrode_diameter > cavity_diameter) {
        throw std::invalid_argument("PiezoQubitParams: need 0 < d_e <= d");
    }
    if (!(v_longitudinal > 0.0) || !(v_transverse >= 0.0)) {
        throw std::invalid_argument("PiezoQubitParams: sound speeds must be positive");
    }
    if (!(band_min_hz < band_max_hz)) {
        throw std::invalid_argument("PiezoQubitParams: band_min must be < band_max");
    }
}

double mode_frequency(int l, int m, const PiezoQubitParams& params, double height) {
    if (l < 1 || m < 0) {
        throw std::domain_error("mode_frequency: need l >= 1, m >= 0");
    }
    if (!(height > 0.0)) {
        throw std::domain_error("mode_frequency: height must be > 0");
    }
    const double longitudinal = l * pi / height * params.v_longitudinal;
    const double transverse =
        2.0 * numerics::bessel_j0_zero(m) / params.cavity_diameter * params.v_transverse;
    return std::hypot(longitudinal, transverse);
}

double radial_norm_integral(double cavity_diameter, int m) {
    // Int_0^a J0(kr)^2 r dr = a^2/2 [J0(ka)^2 + J1(ka)^2]; here ka = j_{0,m}.
    const double j = numerics::bessel_j0_zero(m);
    const double a = 0.5 * cavity_diameter;
    const double j0 = numerics::bessel_j(0, j);
    const double j1 = numerics::bessel_j(1, j);
    return 0.5 * a * a * (j0 * j0 + j1 * j1);
}

double electrode_overlap_integral(double cavity_diameter, double electrode_diameter, int m) {
    // Int_0^b J0(kr) r dr = (b/k) J1(kb), k = 2 j_{0,m}/d.
    const double j = numerics::bessel_j0_zero(m);
    const double k = 2.0 * j / cavity_diameter;
    const double b = 0.5 * electrode_diameter;
    return b / k * numerics::bessel_j(1, k * b);
}

double normalization_beta(int l, int m, const PiezoQubitParams& params, double height) {
    const double omega = mode_frequency(l, m, params, height);
    const double norm = pi * height * params.c33 * radial_norm_integral(params.cavity_diameter, m);
    return std::sqrt(hbar * omega / norm);
}

double coupling_strength(int l, int m, const csl::ResonatorGeometry& geom,
                         const PiezoQubitParams& params) {
    params.validate();
    geom.validate();
    if (l % 2 == 0) {
        return 0.0;  // Int_0^h sin(l pi z/h) dz vanishes over whole periods
    }
    const double h = geom.height;
    const double beta = normalization_beta(l, m, params, h);
    const double overlap =
        electrode_overlap_integral(params.cavity_diameter, params.electrode_diameter, m);
    // z integral 2h/(l pi) times the azimuthal 2 pi.
    const double hg = (4.0 * h / l) * params.c33 * params.d33 * params.e_field * beta * overlap;
    return std::abs(hg) / hbar;
}

ModeSpec make_mode(int l, int m, const csl::ResonatorGeometry& geom,
                   const PiezoQubitParams& params) {
    ModeSpec spec;
    spec.l = l;
    spec.m = m;
    spec.omega = mode_frequency(l, m, params, geom.height);
    spec.beta = normalization_beta(l, m, params, geom.height);
    spec.coupling = coupling_strength(l, m, geom, params);
    return spec;
}

std::vector<ModeSpec> enumerate_modes(const PiezoQubitParams& params,
                                      const csl::ResonatorGeometry& geom,
                                      double band_min_hz, double band_max_hz) {
    params.validate();
    geom.validate();
    std::vector<ModeSpec> modes;
    if (!(band_min_hz < band_max_hz)) {
        return modes;
    }
    const double fsr = params.v_longitudinal / (2.0 * geom.height);
    int l = std::max(1, static_cast<int>(std::floor(band_min_hz / fsr)) - 2);
    for (;; ++l) {
        const double f = mode_frequency(l, 0, params, geom.height) / two_pi;
        if (f > band_max_hz) {
            break;
        }
        if (f >= band_min_hz) {
            modes.push_back(make_mode(l, 0, geom, params));
        }
    }
    std::sort(modes.begin(), modes.end(),
              [](const ModeSpec& a, const ModeSpec& b) { return a.omega < b.omega; });
    return modes;
}

std::vector<ModeSpec> make_register_modes(int target_l, int m_max, bool include_adjacent,
                                          const csl::ResonatorGeometry& geom,
                                          const PiezoQubitParams& params) {
    std::vector<ModeSpec> modes;
    for (int m = 0; m <= m_max; ++m) {
        modes.push_back(make_mode(target_l, m, geom, params));
    }
    if (include_adjacent) {
        if (target_l > 1) {
            modes.push_back(make_mode(target_l - 1, 0, geom, params));
        }
        modes.push_back(make_mode(target_l + 1, 0, geom, params));
    }
    std::sort(modes.begin(), modes.end(),
              [](const ModeSpec& a, const ModeSpec& b) { return a.omega < b.omega; });
    return modes;
}

}  // namespace cbound::electromech
