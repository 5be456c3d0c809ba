#include "beamtrack/resource_grid.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "beamtrack/array_response.hpp"
#include "beamtrack/constants.hpp"

namespace beamtrack {

SymbolGrid random_qpsk(int n_symbols, int n_subcarriers, Rng& rng) {
  SymbolGrid g;
  g.symbols.resize(n_symbols, n_subcarriers);
  const double s = 1.0 / std::sqrt(2.0);
  for (int n = 0; n < n_symbols; ++n) {
    for (int m = 0; m < n_subcarriers; ++m) {
      const std::uint64_t bits = rng.integer();
      g.symbols(n, m) = {bits & 1 ? s : -s, bits & 2 ? s : -s};
    }
  }
  return g;
}

std::complex<double> delay_doppler_phase(int n, int m, double tau_s,
                                         double nu_hz,
                                         const OfdmConfig& ofdm) {
  const double arg = 2.0 * kPi *
                     (n * ofdm.symbol_duration_s() * nu_hz -
                      m * ofdm.subcarrier_spacing_hz * tau_s);
  return {std::cos(arg), std::sin(arg)};
}

namespace {

void check_users(const std::vector<UserFrameInput>& users,
                 const OfdmConfig& ofdm, const ArrayConfig& arr) {
  if (users.empty()) throw std::invalid_argument("synth: no users");
  if (static_cast<int>(users.size()) > arr.n_rf_tx)
    throw std::invalid_argument("synth: more users than transmit RF chains");
  for (const UserFrameInput& u : users) {
    if (u.symbols == nullptr)
      throw std::invalid_argument("synth: user without a symbol grid");
    if (u.symbols->symbols.rows() != ofdm.n_symbols ||
        u.symbols->symbols.cols() != ofdm.n_subcarriers)
      throw std::invalid_argument("synth: symbol grid size mismatch");
  }
}

// Per-element coefficient stream of one echo: amplitude * phase(n, m) *
// (all beams' symbols as seen by this echo).
Eigen::RowVectorXcd echo_coefficients(const std::vector<UserFrameInput>& users,
                                      std::size_t k, const OfdmConfig& ofdm,
                                      const ArrayConfig& arr,
                                      double tx_power_w) {
  const int n_sym = ofdm.n_symbols;
  const int n_sub = ofdm.n_subcarriers;
  const std::size_t n_users = users.size();
  const ChannelSnapshot& ch = users[k].channel;

  // Gain of each transmit beam toward this echoing user.
  std::vector<std::complex<double>> beam_gain(n_users);
  for (std::size_t b = 0; b < n_users; ++b)
    beam_gain[b] = tx_gain(ch.angle_rad, users[b].beam_angle_rad, arr.n_tx,
                           static_cast<int>(n_users));

  const std::complex<double> amp = std::sqrt(tx_power_w) * ch.h;
  Eigen::RowVectorXcd coef(static_cast<Eigen::Index>(n_sym) * n_sub);
  for (int n = 0; n < n_sym; ++n) {
    for (int m = 0; m < n_sub; ++m) {
      std::complex<double> mix{0.0, 0.0};
      for (std::size_t b = 0; b < n_users; ++b)
        mix += beam_gain[b] * users[b].symbols->symbols(n, m);
      coef[static_cast<Eigen::Index>(n) * n_sub + m] =
          amp * mix * delay_doppler_phase(n, m, ch.delay_s, ch.doppler_hz, ofdm);
    }
  }
  return coef;
}

}  // namespace

ResourceGrid synthesize_grid(const std::vector<UserFrameInput>& users,
                             const Eigen::MatrixXcd& reduction,
                             const OfdmConfig& ofdm, const ArrayConfig& arr,
                             double tx_power_w, double noise_psd_w_per_hz,
                             Rng& rng) {
  check_users(users, ofdm, arr);
  if (reduction.rows() != arr.n_rx)
    throw std::invalid_argument("synth: reduction matrix row count != n_rx");
  const int n_rf = static_cast<int>(reduction.cols());

  // The reduced-domain noise shortcut below is only exact for a combiner with
  // U^H U = (1/n_rf) I.
  const Eigen::MatrixXcd gram = reduction.adjoint() * reduction;
  const double gram_err =
      (gram - Eigen::MatrixXcd::Identity(n_rf, n_rf) / double(n_rf))
          .cwiseAbs()
          .maxCoeff();
  if (gram_err > 1e-6)
    throw std::invalid_argument("synth: combiner is not scaled-orthonormal");

  ResourceGrid grid;
  grid.n_symbols = ofdm.n_symbols;
  grid.n_subcarriers = ofdm.n_subcarriers;
  grid.noise_var_w =
      noise_psd_w_per_hz * ofdm.n_subcarriers * ofdm.subcarrier_spacing_hz;
  const Eigen::Index n_elem =
      static_cast<Eigen::Index>(ofdm.n_symbols) * ofdm.n_subcarriers;
  grid.samples = Eigen::MatrixXcd::Zero(n_rf, n_elem);

  for (std::size_t k = 0; k < users.size(); ++k) {
    const Eigen::VectorXcd c =
        reduction.adjoint() *
        steering_vector(users[k].channel.angle_rad, arr.n_rx);
    grid.samples.noalias() +=
        c * echo_coefficients(users, k, ofdm, arr, tx_power_w);
  }

  if (grid.noise_var_w > 0.0) {
    const double reduced_var = grid.noise_var_w / n_rf;
    for (Eigen::Index e = 0; e < n_elem; ++e)
      for (int r = 0; r < n_rf; ++r)
        grid.samples(r, e) += rng.complex_normal(reduced_var);
  }
  return grid;
}

Eigen::MatrixXcd synthesize_antenna_grid(
    const std::vector<UserFrameInput>& users, const OfdmConfig& ofdm,
    const ArrayConfig& arr, double tx_power_w, double noise_psd_w_per_hz,
    Rng& rng) {
  check_users(users, ofdm, arr);
  const Eigen::Index n_elem =
      static_cast<Eigen::Index>(ofdm.n_symbols) * ofdm.n_subcarriers;
  Eigen::MatrixXcd grid = Eigen::MatrixXcd::Zero(arr.n_rx, n_elem);

  for (std::size_t k = 0; k < users.size(); ++k) {
    const Eigen::VectorXcd b =
        steering_vector(users[k].channel.angle_rad, arr.n_rx);
    grid.noalias() += b * echo_coefficients(users, k, ofdm, arr, tx_power_w);
  }

  const double noise_var =
      noise_psd_w_per_hz * ofdm.n_subcarriers * ofdm.subcarrier_spacing_hz;
  if (noise_var > 0.0) {
    for (Eigen::Index e = 0; e < n_elem; ++e)
      for (int r = 0; r < arr.n_rx; ++r)
        grid(r, e) += rng.complex_normal(noise_var);
  }
  return grid;
}

ResourceGrid reduce_grid(const Eigen::MatrixXcd& antenna_grid,
                         const Eigen::MatrixXcd& reduction,
                         const OfdmConfig& ofdm, double noise_var_w) {
  if (antenna_grid.rows() != reduction.rows())
    throw std::invalid_argument("reduce: grid/combiner row mismatch");
  ResourceGrid grid;
  grid.n_symbols = ofdm.n_symbols;
  grid.n_subcarriers = ofdm.n_subcarriers;
  grid.noise_var_w = noise_var_w;
  grid.samples = reduction.adjoint() * antenna_grid;
  return grid;
}

void dump_grid_csv(const ResourceGrid& grid, std::ostream& out) {
  out << "n,m,rf_chain,re,im\n";
  char line[128];
  for (int n = 0; n < grid.n_symbols; ++n)
    for (int m = 0; m < grid.n_subcarriers; ++m)
      for (int r = 0; r < grid.n_rf(); ++r) {
        const std::complex<double> v = grid.samples(r, grid.col(n, m));
        std::snprintf(line, sizeof line, "%d,%d,%d,%.17g,%.17g\n", n, m, r,
                      v.real(), v.imag());
        out << line;
      }
}

}  // namespace beamtrack
