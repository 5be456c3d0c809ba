#pragma once

#include <Eigen/Dense>
#include <complex>
#include <iosfwd>
#include <vector>

#include "beamtrack/channel.hpp"
#include "beamtrack/ofdm.hpp"
#include "beamtrack/rng.hpp"

namespace beamtrack {

// Unit-power QPSK payload of one user for one frame.
struct SymbolGrid {
  Eigen::MatrixXcd symbols;  // n_symbols x n_subcarriers
};

SymbolGrid random_qpsk(int n_symbols, int n_subcarriers, Rng& rng);

// Per-resource-element channel rotation e^{j 2 pi (n T0 nu - m delta_f tau)}.
std::complex<double> delay_doppler_phase(int n, int m, double tau_s,
                                         double nu_hz, const OfdmConfig& ofdm);

// Received frame after analog combining: n_rf streams per resource element.
// Column n * n_subcarriers + m holds the n_rf samples of element (n, m).
// noise_var_w is the per-element noise variance at the antenna plane; after
// the scaled-orthonormal combiner each stream sees noise_var_w / n_rf.
struct ResourceGrid {
  int n_symbols = 0;
  int n_subcarriers = 0;
  Eigen::MatrixXcd samples;
  double noise_var_w = 0.0;

  int n_rf() const { return static_cast<int>(samples.rows()); }
  Eigen::Index col(int n, int m) const {
    return static_cast<Eigen::Index>(n) * n_subcarriers + m;
  }
};

// Everything the synthesizer needs to know about one user during one frame.
struct UserFrameInput {
  ChannelSnapshot channel;
  double beam_angle_rad = 0.0;      // where this user's transmit beam points
  const SymbolGrid* symbols = nullptr;
};

// Synthesizes the frame received while focusing the combiner U on one user.
// The model keeps every cross term: each user's echo carries the superposition
// of all K transmit beams (each weighted by that beam's gain toward the
// echoing user), so transmit-side leakage between beams and receive-side
// leakage between users are both present and can be measured rather than
// assumed away. Noise is drawn directly in the reduced domain: U^H w for w ~
// CN(0, sigma_n^2 I) is exactly CN(0, (sigma_n^2 / n_rf) I) because
// U^H U = (1/n_rf) I, which synthesize_grid verifies before using the
// shortcut. sigma_n^2 = N0 M delta_f.
ResourceGrid synthesize_grid(const std::vector<UserFrameInput>& users,
                             const Eigen::MatrixXcd& reduction,
                             const OfdmConfig& ofdm, const ArrayConfig& arr,
                             double tx_power_w, double noise_psd_w_per_hz,
                             Rng& rng);

// Literal antenna-plane route kept separate for validation: the full n_rx
// element grid before combining, and the combining step itself.
Eigen::MatrixXcd synthesize_antenna_grid(
    const std::vector<UserFrameInput>& users, const OfdmConfig& ofdm,
    const ArrayConfig& arr, double tx_power_w, double noise_psd_w_per_hz,
    Rng& rng);

ResourceGrid reduce_grid(const Eigen::MatrixXcd& antenna_grid,
                         const Eigen::MatrixXcd& reduction,
                         const OfdmConfig& ofdm, double noise_var_w);

// Offline-analysis dump, one row per (element, stream): n,m,rf_chain,re,im.
void dump_grid_csv(const ResourceGrid& grid, std::ostream& out);

}  // namespace beamtrack
