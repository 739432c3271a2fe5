#pragma once

#include <cmath>
#include <numbers>

namespace thzdoa {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// CODATA 2018 exact values.
inline constexpr double kSpeedOfLight = 299792458.0;   // m/s
inline constexpr double kBoltzmann = 1.380649e-23;     // J/K

inline constexpr double kTera = 1e12;
inline constexpr double kPico = 1e-12;
inline constexpr double kMicro = 1e-6;
inline constexpr double kAtto = 1e-18;

// Prefixed value <-> SI. Sub-unit prefixes go through their exact integer reciprocal.
inline double from_unit(double value, double unit) {
  return unit < 1.0 ? value / std::round(1.0 / unit) : value * unit;
}
inline double to_unit(double value, double unit) {
  return unit < 1.0 ? value * std::round(1.0 / unit) : value / unit;
}

inline constexpr double kDegToRad = std::numbers::pi / 180.0;
inline constexpr double kRadToDeg = 180.0 / std::numbers::pi;

}  // namespace thzdoa
