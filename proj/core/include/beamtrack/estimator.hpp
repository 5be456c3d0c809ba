#pragma once

#include <Eigen/Dense>

#include "beamtrack/ofdm.hpp"
#include "beamtrack/resource_grid.hpp"
#include "beamtrack/slepian.hpp"

namespace beamtrack {

// Sample covariance over all resource elements, (1/NM) sum y y^H. Hermitian
// by construction.
Eigen::MatrixXcd sample_covariance(const ResourceGrid& grid);

struct MusicParams {
  // Scan half-width around the beam in sin-angle units. The default, four
  // transmit beamwidths, is set by the caller from the array geometry.
  double window_halfwidth_sin = 0.125;
  int grid_points = 2048;
};

struct AngleEstimate {
  double phi = 0.0;                  // refined angle estimate
  double peak = 0.0;                 // pseudospectrum value at the peak
  double window_halfwidth_sin = 0.0; // actually scanned half-width
  bool at_window_edge = false;       // peak on the scan border: treat as lost
};

// Beamspace MUSIC around the pointing direction of the combiner. The signal
// subspace has fixed dimension one (one user per slot), so the noise subspace
// is the n_rf - 1 weakest eigenvectors. The pseudospectrum is evaluated in the
// derotated variable u' = sin(phi) - sin(phi_hat) and the returned angle is
// mapped back; exact ties prefer the angle closest to the beam. Needs
// n_rf >= 2.
AngleEstimate music_angle(const Eigen::MatrixXcd& covariance,
                          const ReductionMatrix& red, const MusicParams& p);

struct NlsParams {
  int zero_pad_factor = 4;
  // Peak |objective| to median |objective| below this flags low confidence.
  double low_confidence_ratio = 6.0;
};

struct DelayDopplerEstimate {
  double delay_s = 0.0;
  double doppler_hz = 0.0;
  double distance_m = 0.0;   // c * delay / 2
  double peak = 0.0;         // |objective| at the maximum
  bool low_confidence = false;
  // Grid maximizer before sub-bin refinement; Doppler bin is signed.
  int peak_doppler_bin = 0;
  int peak_delay_bin = 0;
};

// Maximum-likelihood delay/Doppler fit of the beam-aligned, symbol-compensated
// grid, computed on a zero-padded 2-D DFT lattice and refined per axis by
// parabolic interpolation. Delay is searched over [0, 1/delta_f), Doppler
// over [-1/(2 T0), 1/(2 T0)).
DelayDopplerEstimate delay_doppler_nls(const ResourceGrid& grid,
                                       const ReductionMatrix& red,
                                       double phi_est,
                                       const SymbolGrid& symbols,
                                       const OfdmConfig& ofdm,
                                       const NlsParams& p);

struct EstimatorParams {
  MusicParams music;
  NlsParams nls;
};

struct UserEstimate {
  AngleEstimate angle;
  DelayDopplerEstimate dd;
  bool lost = false;  // MUSIC peak on the window edge
};

// Full per-slot estimation: covariance, MUSIC angle, then the delay/Doppler
// fit conditioned on that angle.
UserEstimate estimate_user(const ResourceGrid& grid, const ReductionMatrix& red,
                           const SymbolGrid& symbols, const OfdmConfig& ofdm,
                           const EstimatorParams& p);

}  // namespace beamtrack
