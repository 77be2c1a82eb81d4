#include "cbound/csl.hpp"

#include <algorithm>
#include <cmath>

#include "cbound/constants.hpp"

namespace cbound::csl {

namespace {

using constants::amu;
using constants::hbar;
using constants::pi;
using constants::sqrt_pi;
using constants::two_pi;

// Gaussian damping exp(-s^2 a^2) falls below 1e-27 at |a| = 8/s, bounding the
// truncation error far under the quadrature tolerance.
double truncation_limit(double s) { return 8.0 / s; }

// One pass over [0, a_max] in damped-oscillation-sized segments; the first
// segment length staggers between passes so the two panel layouts disagree.
template <typename F>
numerics::IntegralResult segmented_pass(const F& f, double a_max,
                                        const numerics::QuadratureSpec& spec,
                                        double first_segment) {
    const double segment = 8.0;
    numerics::IntegralResult total;
    double a = 0.0;
    double next = std::min(first_segment, a_max);
    while (true) {
        const auto piece = numerics::integrate_adaptive_estimate(f, a, next, spec);
        total.value += piece.value;
        total.error_bound += piece.error_bound;
        if (next >= a_max) {
            break;
        }
        a = next;
        next = std::min(a + segment, a_max);
    }
    return total;
}

// Integrates a nonnegative damped-oscillatory integrand over [0, a_max],
// judging convergence on the accumulated total; when the summed Kronrod
// estimates exceed the target (they floor near roundoff of each segment's own
// scale) the achieved accuracy is cross-checked against a staggered pass.
template <typename F>
double integrate_segmented(const F& f, double a_max, const numerics::QuadratureSpec& spec) {
    const auto first = segmented_pass(f, a_max, spec, 8.0);
    if (!std::isfinite(first.value)) {
        throw numerics::ConvergenceError("longitudinal integral: non-finite estimate",
                                         first.value, first.error_bound);
    }
    const double allowed =
        std::max(spec.absolute_tolerance, spec.relative_tolerance * std::abs(first.value));
    if (first.error_bound <= 10.0 * allowed) {
        return first.value;
    }
    const auto check = segmented_pass(f, a_max, spec, std::min(4.0, 0.5 * a_max));
    if (std::isfinite(check.value) && std::abs(check.value - first.value) <= 10.0 * allowed) {
        return check.value;
    }
    throw numerics::ConvergenceError("longitudinal integral: tolerance not reached", first.value,
                                     first.error_bound);
}

double exact_sin_integrand(double a, double s) {
    // 4 a^4 cos^2(pi a/2)/(a^2-1)^2, written through sin((a-1)pi/2)/(a-1) to
    // stay smooth across the removable point a = 1.
    const double damping = std::exp(-s * s * a * a);
    const double u = a - 1.0;
    const double z = 0.5 * pi * u;
    double sinc;
    if (std::abs(z) < 1e-6) {
        sinc = 1.0 - z * z / 6.0;
    } else {
        sinc = std::sin(z) / z;
    }
    const double amplitude = -(2.0 * a / (a + 1.0)) * 0.5 * pi * sinc;  // = 2a cos/(a^2-1)
    return damping * a * a * amplitude * amplitude;
}

}  // namespace

ResonatorGeometry ResonatorGeometry::from_height(double radius, double height, int l,
                                                 double density) {
    ResonatorGeometry g;
    g.radius = radius;
    g.height = height;
    g.longitudinal_mode = l;
    g.phonon_wavelength = 2.0 * height / l;
    g.density = density;
    g.diameter = 2.0 * radius;
    g.validate();
    return g;
}

ResonatorGeometry ResonatorGeometry::from_wavelength(double radius, double wavelength, int l,
                                                     double density) {
    ResonatorGeometry g;
    g.radius = radius;
    g.phonon_wavelength = wavelength;
    g.longitudinal_mode = l;
    g.height = 0.5 * l * wavelength;
    g.density = density;
    g.diameter = 2.0 * radius;
    g.validate();
    return g;
}

void ResonatorGeometry::validate() const {
    if (!(radius > 0.0) || !(height > 0.0) || !(phonon_wavelength > 0.0) || !(diameter > 0.0)) {
        throw std::invalid_argument("ResonatorGeometry: lengths must be > 0");
    }
    if (longitudinal_mode < 1) {
        throw std::invalid_argument("ResonatorGeometry: longitudinal mode must be >= 1");
    }
    if (!(density > 0.0)) {
        throw std::invalid_argument("ResonatorGeometry: density must be > 0");
    }
    const double expected_h = 0.5 * longitudinal_mode * phonon_wavelength;
    if (std::abs(height - expected_h) > 1e-9 * expected_h) {
        throw std::invalid_argument("ResonatorGeometry: height must equal l*lambda/2");
    }
    if (std::abs(diameter - 2.0 * radius) > 1e-12 * diameter) {
        throw std::invalid_argument("ResonatorGeometry: diameter must equal 2R");
    }
}

void CollapseParams::validate() const {
    if (lambda_c < 0.0) {
        throw std::invalid_argument("CollapseParams: lambda_c must be >= 0");
    }
    if (!(r_c > 0.0)) {
        throw std::invalid_argument("CollapseParams: r_c must be > 0");
    }
    if (omega_cutoff && !(*omega_cutoff > 0.0)) {
        throw std::invalid_argument("CollapseParams: omega_cutoff must be > 0 when present");
    }
}

double transverse_factor(double radius, double r_c) {
    if (!(radius > 0.0) || !(r_c > 0.0)) {
        throw std::domain_error("transverse_factor: radius and r_c must be > 0");
    }
    const double x = radius * radius / (2.0 * r_c * r_c);
    const double scaled = numerics::bessel_i_scaled(0, x) + numerics::bessel_i_scaled(1, x);
    return 0.5 * (1.0 - scaled);
}

double longitudinal_integrand(double a, double s) {
    if (a == 0.0) {
        return 0.0;
    }
    const double a2 = a * a;
    const double damping = std::exp(-s * s * a2);
    double numerator;
    if (std::abs(a) < 0.05) {
        // Taylor limit; the direct expression cancels catastrophically here.
        const double pi2 = pi * pi;
        const double pi4 = pi2 * pi2;
        numerator = pi4 * a2 * a2 * (-5.0 / 48.0 + (7.0 / 2880.0) * pi2 * a2);
    } else {
        numerator = -8.0 + (8.0 + pi * pi * a2) * std::cos(0.5 * pi * a);
    }
    return damping * numerator * numerator / (4.0 * pi * pi * a2 * a2);
}

double longitudinal_integral(double lambda, double r_c, const numerics::QuadratureSpec& spec) {
    if (!(lambda > 0.0) || !(r_c > 0.0)) {
        throw std::domain_error("longitudinal_integral: lambda and r_c must be > 0");
    }
    const double s = two_pi * r_c / lambda;
    const auto f = [s](double a) { return longitudinal_integrand(a, s); };
    return 2.0 * integrate_segmented(f, truncation_limit(s), spec);
}

double longitudinal_integral_exact_sin(double lambda, double r_c,
                                       const numerics::QuadratureSpec& spec) {
    if (!(lambda > 0.0) || !(r_c > 0.0)) {
        throw std::domain_error("longitudinal_integral_exact_sin: lambda and r_c must be > 0");
    }
    const double s = two_pi * r_c / lambda;
    const auto f = [s](double a) { return exact_sin_integrand(a, s); };
    return 2.0 * integrate_segmented(f, truncation_limit(s), spec);
}

double decoherence_coefficient(double lambda, double radius, double density, double r_c,
                               const numerics::QuadratureSpec& spec) {
    const double prefactor = r_c * r_c * r_c * density * density * radius * radius /
                             (amu * amu) * (64.0 * sqrt_pi / lambda);
    return prefactor * transverse_factor(radius, r_c) * longitudinal_integral(lambda, r_c, spec);
}

double decoherence_coefficient(const ResonatorGeometry& geom, double r_c,
                               const numerics::QuadratureSpec& spec) {
    geom.validate();
    return decoherence_coefficient(geom.phonon_wavelength, geom.radius, geom.density, r_c, spec);
}

double effective_mass(const ResonatorGeometry& geom, MassModel model) {
    geom.validate();
    const double base = 0.25 * geom.phonon_wavelength * geom.density * geom.diameter *
                        geom.diameter;
    return model == MassModel::box ? base : 0.25 * pi * base;
}

ZeroPointMotion zero_point_motion(const ResonatorGeometry& geom, double omega_rad,
                                  MassModel model) {
    if (!(omega_rad > 0.0)) {
        throw std::domain_error("zero_point_motion: omega must be > 0");
    }
    ZeroPointMotion z;
    z.effective_mass_single = effective_mass(geom, model);
    z.x0_single = std::sqrt(hbar / (2.0 * z.effective_mass_single * omega_rad));
    z.x0 = z.x0_single / std::sqrt(static_cast<double>(geom.longitudinal_mode));
    return z;
}

double cross_section(const ResonatorGeometry& geom, double r_c, double omega_rad,
                     MassModel model, const numerics::QuadratureSpec& spec) {
    const ZeroPointMotion z = zero_point_motion(geom, omega_rad, model);
    const double eta = decoherence_coefficient(geom, r_c, spec);
    return 2.0 * geom.longitudinal_mode * z.x0_single * z.x0_single * eta;
}

double heating_rate(const CollapseParams& params, double cross_section,
                    double mode_frequency_hz) {
    params.validate();
    if (cross_section < 0.0) {
        throw std::domain_error("heating_rate: cross-section must be >= 0");
    }
    double rate = params.lambda_c * cross_section;
    if (params.omega_cutoff) {
        const double wc2 = *params.omega_cutoff * *params.omega_cutoff;
        rate *= wc2 / (wc2 + mode_frequency_hz * mode_frequency_hz);
    }
    return rate;
}

double diffusion_constant(const ResonatorGeometry& geom, double r_c,
                          const numerics::QuadratureSpec& spec) {
    const double l = geom.longitudinal_mode;
    return 2.0 * l * l * decoherence_coefficient(geom, r_c, spec);
}

WavelengthScanResult optimal_wavelength(double r_c, const ResonatorGeometry& geom_template,
                                        int scan_points, const numerics::QuadratureSpec& spec) {
    if (!(r_c > 0.0)) {
        throw std::domain_error("optimal_wavelength: r_c must be > 0");
    }
    if (scan_points < 5) {
        throw std::invalid_argument("optimal_wavelength: need at least 5 scan points");
    }
    geom_template.validate();

    // Probe the correlation-length response of the template geometry on a log
    // grid. Frequency scale drops out of the argmax, so a nominal omega is
    // enough here.
    const double lambda0 = geom_template.phonon_wavelength;
    const double omega_nominal = two_pi * 6.5e9;
    const double ratio_min = 0.02;  // r/lambda
    const double ratio_max = 0.5;
    WavelengthScanResult result;
    result.scan.reserve(scan_points);
    std::vector<double> values(scan_points);
    std::vector<double> log_ratio(scan_points);
    for (int i = 0; i < scan_points; ++i) {
        const double t = static_cast<double>(i) / (scan_points - 1);
        const double ratio = ratio_min * std::pow(ratio_max / ratio_min, t);
        const double r_probe = ratio * lambda0;
        const double d = cross_section(geom_template, r_probe, omega_nominal,
                                       MassModel::cylinder, spec);
        log_ratio[i] = std::log(ratio);
        values[i] = d;
        result.scan.emplace_back(r_probe, d);
    }

    // Unimodal up to tiny numerical ripple: one rising and one falling phase.
    int peak = static_cast<int>(std::max_element(values.begin(), values.end()) -
                                values.begin());
    const double ripple = 1e-9 * values[peak];
    for (int i = 1; i <= peak; ++i) {
        if (values[i] < values[i - 1] - ripple) {
            throw ScanError("optimal_wavelength: scan is not unimodal", result.scan);
        }
    }
    for (int i = peak + 1; i < scan_points; ++i) {
        if (values[i] > values[i - 1] + ripple) {
            throw ScanError("optimal_wavelength: scan is not unimodal", result.scan);
        }
    }
    if (peak == 0 || peak == scan_points - 1) {
        throw ScanError("optimal_wavelength: peak is at the scan boundary", result.scan);
    }

    // Three-point refinement of the peak in log(ratio), iterated on fresh
    // evaluations to pin the vertex well inside the grid spacing.
    double lo = log_ratio[peak - 1];
    double hi = log_ratio[peak + 1];
    double mid = log_ratio[peak];
    double f_mid = values[peak];
    for (int it = 0; it < 30 && (hi - lo) > 1e-4; ++it) {
        const double m1 = 0.5 * (lo + mid);
        const double m2 = 0.5 * (mid + hi);
        const double f1 = cross_section(geom_template, std::exp(m1) * lambda0, omega_nominal,
                                        MassModel::cylinder, spec);
        const double f2 = cross_section(geom_template, std::exp(m2) * lambda0, omega_nominal,
                                        MassModel::cylinder, spec);
        if (f1 >= f_mid && f1 >= f2) {
            hi = mid; mid = m1; f_mid = f1;
        } else if (f2 >= f_mid && f2 >= f1) {
            lo = mid; mid = m2; f_mid = f2;
        } else {
            lo = m1; hi = m2;
        }
    }
    const double peak_ratio = std::exp(mid);  // r*/lambda at the sensitivity maximum

    // The peak location is linear in the wavelength, so the wavelength that
    // places the sensitivity maximum at the requested r_c follows directly.
    result.lambda_star = r_c / peak_ratio;
    return result;
}

}  // namespace cbound::csl
