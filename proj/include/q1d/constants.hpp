#pragma once

#include <numbers>

// CODATA 2018 exact SI values; everything else is derived from these.
namespace q1d::constants {

inline constexpr double pi = std::numbers::pi;
inline constexpr double c = 299792458.0;              // m/s
inline constexpr double h = 6.62607015e-34;           // J s
inline constexpr double hbar = h / (2.0 * pi);        // J s
inline constexpr double k_B = 1.380649e-23;           // J/K
inline constexpr double hbar_over_kB = hbar / k_B;    // K s

}  // namespace q1d::constants
