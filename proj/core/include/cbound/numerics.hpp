// Special functions and adaptive quadrature shared by the physics modules.
//
// Bessel J0/J1 and small-argument modified Bessels are evaluated through
// Boost.Math; the exponentially scaled I0/I1 switch to a custom asymptotic
// series for large arguments, where the unscaled functions overflow
// (the transverse collapse factor needs arguments up to ~1e7).

#pragma once

#include <functional>
#include <stdexcept>
#include <string>

namespace cbound::numerics {

struct QuadratureSpec {
    double relative_tolerance = 1e-9;
    double absolute_tolerance = 1e-30;
    int max_subdivisions = 2000;

    void validate() const;
};

// Thrown when the adaptive integrator cannot reach the requested tolerance;
// carries the best available estimate and its error bound.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double estimate, double error_bound)
        : std::runtime_error(what), best_estimate(estimate), error_bound(error_bound) {}

    double best_estimate;
    double error_bound;
};

// Bessel function of the first kind, order 0 or 1.
double bessel_j(int order, double x);

// e^(-x) I_order(x) for x >= 0, finite and accurate up to x ~ 1e7 and beyond.
double bessel_i_scaled(int order, double x);

// Complementary error function. For x <= 30 the result never silently
// underflows to zero (it saturates at the smallest positive double); for
// meaningful deep-tail values use log_erfc/erfcx.
double erfc(double x);

// e^(x^2) erfc(x), x >= 0.
double erfcx(double x);

// ln erfc(x); finite for all x where erfc > 0 mathematically, including the
// deep tail where erfc underflows in double precision.
double log_erfc(double x);

// (m+1)-th positive zero of J0; m = 0 maps to 2.40482555769577...
double bessel_j0_zero(int m);

double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          const QuadratureSpec& spec = {});

struct IntegralResult {
    double value = 0.0;
    double error_bound = 0.0;
};

// Like integrate_adaptive but reports the error bound instead of throwing on
// a tolerance miss, so callers that stitch segments can judge the total.
IntegralResult integrate_adaptive_estimate(const std::function<double(double)>& f, double a,
                                           double b, const QuadratureSpec& spec = {});

}  // namespace cbound::numerics
