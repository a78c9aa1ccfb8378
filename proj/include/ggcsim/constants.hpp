#pragma once

namespace ggcsim::constants {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

inline constexpr double kSpeedOfLight = 299792458.0;          // m/s
inline constexpr double kHbar = 1.054571817e-34;              // J s
inline constexpr double kAtomicMassUnit = 1.66053906660e-27;  // kg

// Spherical Earth model used throughout (mean radius).
inline constexpr double kEarthGM = 3.986004418e14;  // m^3/s^2
inline constexpr double kEarthRadius = 6.371e6;     // m

inline constexpr double kMassRb87 = 86.909180531 * kAtomicMassUnit;  // kg
inline constexpr double kMassK41 = 40.96182526 * kAtomicMassUnit;    // kg

}  // namespace ggcsim::constants
