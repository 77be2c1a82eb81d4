// Collapse-model heating of cylindrical bulk-acoustic-wave breathing modes:
// cross-section, heating rate, diffusion coefficient, coloured-spectrum
// correction and the wavelength that targets a given correlation length.

#pragma once

#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "cbound/numerics.hpp"

namespace cbound::csl {

struct ResonatorGeometry {
    double radius = 0.0;              // R, m
    double height = 0.0;              // h, m
    double phonon_wavelength = 0.0;   // lambda = 2h/l, m
    int longitudinal_mode = 1;        // l, number of anti-nodes
    double density = 0.0;             // rho0, kg/m^3
    double diameter = 0.0;            // d = 2R, m

    static ResonatorGeometry from_height(double radius, double height, int l, double density);
    static ResonatorGeometry from_wavelength(double radius, double wavelength, int l,
                                             double density);

    void validate() const;
};

struct CollapseParams {
    double lambda_c = 0.0;                      // collapse rate, 1/s
    double r_c = 1e-7;                          // correlation length, m
    std::optional<double> omega_cutoff;         // colour cutoff, ordinary Hz; absent = white

    void validate() const;
};

// The text of the source model states the effective mass of one anti-node as
// (lambda/4) rho d^2 (a square-section box); the quoted cross-sections are
// reproduced by the cylindrical modal mass (lambda/4) rho (pi d^2/4). Both are
// kept; cylinder is the default for cross-sections.
enum class MassModel { box, cylinder };

struct ZeroPointMotion {
    double effective_mass_single = 0.0;  // one anti-node, kg
    double x0_single = 0.0;              // m
    double x0 = 0.0;                     // x0_single / sqrt(l), m
};

// Thrown when a sensitivity scan is not unimodal; carries the full grid.
class ScanError : public std::runtime_error {
public:
    ScanError(const std::string& what, std::vector<std::pair<double, double>> grid)
        : std::runtime_error(what), scan(std::move(grid)) {}

    std::vector<std::pair<double, double>> scan;
};

struct WavelengthScanResult {
    double lambda_star = 0.0;                       // m
    std::vector<std::pair<double, double>> scan;    // (r_c probed, cross-section)
};

// (1 - e^(-x)(I0(x)+I1(x)))/2 with x = R^2/(2 r_c^2); in [0, 1/2).
double transverse_factor(double radius, double r_c);

// Full-line integral of the damped breathing-mode overlap,
//   exp(-(2 pi r_c a / lambda)^2) (-8 + (8 + pi^2 a^2) cos(pi a/2))^2 / (4 pi^2 a^4),
// with the removable point a = 0 evaluated by its Taylor limit.
double longitudinal_integral(double lambda, double r_c,
                             const numerics::QuadratureSpec& spec = {});

// Same integral without the quadratic-sine approximation of the mode shape
// (first order in the displacement): integrand 4 a^4 cos^2(pi a/2)/(a^2-1)^2
// under the same Gaussian damping. Used to audit the approximation error.
double longitudinal_integral_exact_sin(double lambda, double r_c,
                                       const numerics::QuadratureSpec& spec = {});

// Integrand of longitudinal_integral at damping parameter s = 2 pi r_c/lambda.
double longitudinal_integrand(double a, double s);

// Coefficient of the position double-commutator in the collapse master
// equation per unit collapse rate, for a single anti-node (units m^-2).
double decoherence_coefficient(double lambda, double radius, double density, double r_c,
                               const numerics::QuadratureSpec& spec = {});
double decoherence_coefficient(const ResonatorGeometry& geom, double r_c,
                               const numerics::QuadratureSpec& spec = {});

double effective_mass(const ResonatorGeometry& geom, MassModel model);

// Ground-state displacement scales for the l-anti-node stack at angular
// frequency omega (rad/s).
ZeroPointMotion zero_point_motion(const ResonatorGeometry& geom, double omega_rad,
                                  MassModel model = MassModel::box);

// Dimensionless conversion factor between collapse rate and phonon flux,
// 2 l x0^2 eta; linear in the anti-node count at fixed wavelength.
double cross_section(const ResonatorGeometry& geom, double r_c, double omega_rad,
                     MassModel model = MassModel::cylinder,
                     const numerics::QuadratureSpec& spec = {});

// Phonon flux lambda_c * D, reduced by Omega_c^2/(Omega_c^2 + Omega^2) when a
// colour cutoff is present. Both frequencies are ordinary (Hz).
double heating_rate(const CollapseParams& params, double cross_section,
                    double mode_frequency_hz);

// Geometry-only diffusion measure D/x0'^2 = 2 l^2 eta (m^-2); independent of
// the mass model.
double diffusion_constant(const ResonatorGeometry& geom, double r_c,
                          const numerics::QuadratureSpec& spec = {});

// Wavelength whose sensitivity-versus-correlation-length curve peaks at the
// requested r_c. A direct argmax of the cross-section over the wavelength at
// fixed r_c has no useful interior maximum (it saturates near lambda ~ 13 r_c);
// the operative optimum for targeting a correlation length is the peak of the
// r_c response, which this scan locates and inverts (it is linear in lambda).
WavelengthScanResult optimal_wavelength(double r_c, const ResonatorGeometry& geom_template,
                                        int scan_points = 50,
                                        const numerics::QuadratureSpec& spec = {});

}  // namespace cbound::csl
