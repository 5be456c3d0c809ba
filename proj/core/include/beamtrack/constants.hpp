#pragma once

namespace beamtrack {

// Exact SI definition. Round-trip delays, Doppler shifts and the carrier
// wavelength all derive from this value; tests pin numbers against it.
inline constexpr double kSpeedOfLight = 299792458.0;  // m/s

inline constexpr double kPi = 3.14159265358979323846264338327950288;

}  // namespace beamtrack
