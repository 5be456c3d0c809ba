#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>

#include "beamtrack/constants.hpp"
#include "beamtrack/ofdm.hpp"

namespace beamtrack {

// One-way free-space power gain (lambda / (4 pi d))^2. The downlink budget is
// one-way; the sensing budget is two-way (see channel.hpp). At equal distance
// their ratio is rcs / (4 pi d^2), which a regression test pins down.
inline double one_way_power_gain(double distance_m, double wavelength_m) {
  const double g = wavelength_m / (4.0 * kPi * distance_m);
  return g * g;
}

// Downlink spectral efficiency of one user given the achieved transmit gain:
// log2(1 + (lambda/(4 pi d))^2 P_tx |g_tx|^2 / (N0 M delta_f)).
inline double spectral_efficiency(double distance_m, double tx_gain_sq,
                                  double tx_power_w, double noise_psd_w_per_hz,
                                  const OfdmConfig& ofdm) {
  if (distance_m <= 0.0)
    throw std::domain_error("spectral_efficiency: distance must be positive");
  if (tx_gain_sq < 0.0)
    throw std::invalid_argument("spectral_efficiency: |g_tx|^2 negative");
  const double noise_w =
      noise_psd_w_per_hz * ofdm.n_subcarriers * ofdm.subcarrier_spacing_hz;
  const double snr = one_way_power_gain(distance_m, ofdm.wavelength_m()) *
                     tx_power_w * tx_gain_sq / noise_w;
  return std::log2(1.0 + snr);
}

}  // namespace beamtrack
