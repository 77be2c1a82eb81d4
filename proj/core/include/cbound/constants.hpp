// Universal physical constants (CODATA 2018) used across the toolkit.

#pragma once

namespace cbound::constants {

inline constexpr double hbar = 1.054571817e-34;       // J s
inline constexpr double k_boltzmann = 1.380649e-23;   // J/K
inline constexpr double amu = 1.66053906660e-27;      // kg

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double two_pi = 2.0 * pi;
inline constexpr double sqrt_pi = 1.77245385090551602730;

}  // namespace cbound::constants
