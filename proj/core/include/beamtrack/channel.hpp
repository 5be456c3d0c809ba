#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>

#include "beamtrack/constants.hpp"
#include "beamtrack/kinematics.hpp"
#include "beamtrack/rng.hpp"

namespace beamtrack {

// Monostatic two-way channel of one user at one instant.
struct ChannelSnapshot {
  double distance_m = 0.0;
  double angle_rad = 0.0;    // atan2(x, y): 0 at boresight, positive toward +x
  double delay_s = 0.0;      // round trip, 2 d / c
  double doppler_hz = 0.0;   // positive for an approaching user
  std::complex<double> h;    // complex two-way amplitude, phase uniform
};

// Radar-equation power of the two-way reflection: lambda^2 * rcs /
// ((4 pi)^3 d^4).
inline double two_way_power(double distance_m, double rcs_m2,
                            double wavelength_m) {
  const double four_pi = 4.0 * kPi;
  return wavelength_m * wavelength_m * rcs_m2 /
         (four_pi * four_pi * four_pi * distance_m * distance_m * distance_m *
          distance_m);
}

// Geometry-only part of the snapshot: distance, angle, round-trip delay and
// Doppler. h is left at zero.
inline ChannelSnapshot channel_geometry(const UserKinematicState& s,
                                        double carrier_frequency_hz) {
  ChannelSnapshot c;
  c.distance_m = std::hypot(s.x, s.y);
  if (c.distance_m <= 0.0)
    throw std::domain_error("channel: user at the array origin");
  c.angle_rad = std::atan2(s.x, s.y);
  c.delay_s = 2.0 * c.distance_m / kSpeedOfLight;
  // Range rate, positive when receding; an approaching user compresses the
  // round trip and produces a positive Doppler shift.
  const double range_rate = (s.x * s.vx + s.y * s.vy) / c.distance_m;
  c.doppler_hz = -2.0 * range_rate * carrier_frequency_hz / kSpeedOfLight;
  return c;
}

// Full snapshot for a point scatterer in state s. The reflection phase is
// drawn uniformly from rng: it changes independently between epochs, so
// estimators may not rely on it.
inline ChannelSnapshot channel_from_state(const UserKinematicState& s,
                                          double carrier_frequency_hz,
                                          double rcs_m2, Rng& rng) {
  if (rcs_m2 <= 0.0) throw std::invalid_argument("channel: rcs must be positive");
  ChannelSnapshot c = channel_geometry(s, carrier_frequency_hz);
  const double wavelength = kSpeedOfLight / carrier_frequency_hz;
  c.h = std::sqrt(two_way_power(c.distance_m, rcs_m2, wavelength)) *
        rng.random_phase();
  return c;
}

}  // namespace beamtrack
