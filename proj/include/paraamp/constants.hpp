#pragma once

#include <numbers>

namespace paraamp {

// CODATA 2018 exact / recommended SI values.
inline constexpr double kVacuumPermittivity = 8.8541878128e-12;  // F/m
inline constexpr double kHbar = 1.054571817e-34;                 // J s
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Unit helpers; everything inside the library is SI.
inline constexpr double kMilli = 1e-3;
inline constexpr double kMicro = 1e-6;
inline constexpr double kNano = 1e-9;
inline constexpr double kVoltsPerMicron = 1e6;  // 1 V/um in V/m

inline constexpr double to_hz(double omega) { return omega / kTwoPi; }
inline constexpr double to_rad_per_s(double hz) { return hz * kTwoPi; }

}  // namespace paraamp
