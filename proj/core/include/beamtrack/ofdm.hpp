#pragma once

#include <stdexcept>

#include "beamtrack/constants.hpp"

namespace beamtrack {

// OFDM numerology for one sensing/communication frame. A frame is n_symbols
// consecutive OFDM symbols over n_subcarriers subcarriers; the total symbol
// duration includes the cyclic prefix.
struct OfdmConfig {
  int n_symbols = 64;                    // N
  int n_subcarriers = 512;               // M
  double subcarrier_spacing_hz = 1e6;    // delta_f
  double cyclic_prefix_s = 0.7e-6;       // T_cp
  double carrier_frequency_hz = 60e9;    // f_c

  double symbol_duration_s() const {     // T0 = 1/delta_f + T_cp
    return 1.0 / subcarrier_spacing_hz + cyclic_prefix_s;
  }
  double frame_duration_s() const { return n_symbols * symbol_duration_s(); }
  double wavelength_m() const { return kSpeedOfLight / carrier_frequency_hz; }

  // Unambiguous estimation spans of the frame-based delay/Doppler estimator.
  double max_unambiguous_delay_s() const { return 1.0 / subcarrier_spacing_hz; }
  double max_unambiguous_doppler_hz() const {
    return 0.5 / symbol_duration_s();
  }

  void validate() const {
    if (n_symbols <= 0 || n_subcarriers <= 0)
      throw std::invalid_argument("ofdm: grid dimensions must be positive");
    if (subcarrier_spacing_hz <= 0.0)
      throw std::invalid_argument("ofdm: subcarrier spacing must be positive");
    if (cyclic_prefix_s < 0.0)
      throw std::invalid_argument("ofdm: cyclic prefix must be non-negative");
    if (carrier_frequency_hz <= 0.0)
      throw std::invalid_argument("ofdm: carrier frequency must be positive");
  }

  // Narrowband-Doppler validity: the per-symbol phase model assumes the
  // Doppler shift is far below the subcarrier spacing.
  bool narrowband_ok(double nu_max_hz) const {
    return subcarrier_spacing_hz >= 10.0 * nu_max_hz;
  }
};

// Uniform linear arrays at the transceiver, half-wavelength spacing, with a
// reduced number of RF chains behind each.
struct ArrayConfig {
  int n_tx = 64;
  int n_rx = 64;
  int n_rf_tx = 4;
  int n_rf_rx = 4;

  void validate() const {
    if (n_tx <= 0 || n_rx <= 0)
      throw std::invalid_argument("array: element counts must be positive");
    if (n_rf_tx <= 0 || n_rf_tx > n_tx)
      throw std::invalid_argument("array: need 0 < n_rf_tx <= n_tx");
    if (n_rf_rx <= 0 || n_rf_rx > n_rx)
      throw std::invalid_argument("array: need 0 < n_rf_rx <= n_rx");
  }

  // Transmit beamwidth in sin-angle units; the Dirichlet pattern of an
  // n-element half-wavelength ULA has its first nulls at +-2/n around the
  // pointing direction.
  double tx_beamwidth_sin() const { return 2.0 / n_tx; }
};

}  // namespace beamtrack
