#pragma once

#include <numbers>

// CODATA 2018 values, SI units throughout.
namespace rwcool::constants {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * pi;
inline constexpr double sqrt_pi = 1.7724538509055160273;

inline constexpr double hbar = 1.054571817e-34;           // J s
inline constexpr double boltzmann = 1.380649e-23;         // J/K
inline constexpr double speed_of_light = 299792458.0;     // m/s
inline constexpr double atomic_mass_unit = 1.66053906660e-27;  // kg
inline constexpr double electron_mass = 9.1093837015e-31;      // kg

}  // namespace rwcool::constants
