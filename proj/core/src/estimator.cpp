#include "beamtrack/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "beamtrack/array_response.hpp"
#include "beamtrack/constants.hpp"
#include "fft2.hpp"

namespace beamtrack {

Eigen::MatrixXcd sample_covariance(const ResourceGrid& grid) {
  const Eigen::Index n_elem = grid.samples.cols();
  if (n_elem == 0) throw std::invalid_argument("covariance: empty grid");
  const int n_rf = grid.n_rf();
  Eigen::MatrixXcd r = Eigen::MatrixXcd::Zero(n_rf, n_rf);
  r.selfadjointView<Eigen::Lower>().rankUpdate(grid.samples,
                                               1.0 / double(n_elem));
  return r.selfadjointView<Eigen::Lower>();
}

namespace {

// Vertex offset of the parabola through (-1,ym) (0,y0) (+1,yp), clamped to
// half a bin.
double parabolic_offset(double ym, double y0, double yp) {
  const double denom = ym - 2.0 * y0 + yp;
  if (!(std::abs(denom) > 0.0)) return 0.0;
  return std::clamp(0.5 * (ym - yp) / denom, -0.5, 0.5);
}

}  // namespace

AngleEstimate music_angle(const Eigen::MatrixXcd& covariance,
                          const ReductionMatrix& red, const MusicParams& p) {
  const int n_rf = static_cast<int>(red.u.cols());
  if (n_rf < 2)
    throw std::invalid_argument("music: need at least two RF chains");
  if (covariance.rows() != n_rf || covariance.cols() != n_rf)
    throw std::invalid_argument("music: covariance size mismatch");
  if (p.grid_points < 8) throw std::invalid_argument("music: grid too coarse");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(covariance);
  if (eig.info() != Eigen::Success)
    throw std::runtime_error("music: eigendecomposition failed");
  // One signal dimension per slot; everything below it is noise subspace.
  const Eigen::MatrixXcd noise_basis =
      eig.eigenvectors().leftCols(n_rf - 1);

  // Scan the derotated variable u' = sin(phi) - sin(phi_hat); the recovered
  // sine must stay inside the visible sector.
  const double u_hat = std::sin(red.phi_hat);
  const double margin = 1.0 - 1e-9;
  const double lo = std::max(-p.window_halfwidth_sin, -margin - u_hat);
  const double hi = std::min(p.window_halfwidth_sin, margin - u_hat);

  AngleEstimate est;
  est.window_halfwidth_sin = p.window_halfwidth_sin;
  if (!(hi > lo)) {
    est.phi = red.phi_hat;
    est.at_window_edge = true;
    return est;
  }

  const int n_pts = p.grid_points;
  const int n_rx = static_cast<int>(red.psi.rows());
  const double step = (hi - lo) / (n_pts - 1);

  // Derotated steering responses for the whole scan in one product.
  Eigen::MatrixXcd b(n_rx, n_pts);
  for (int i = 0; i < n_pts; ++i) {
    const double u = lo + i * step;
    const std::complex<double> w{std::cos(kPi * u), std::sin(kPi * u)};
    std::complex<double> cur{1.0, 0.0};
    for (int r = 0; r < n_rx; ++r) {
      b(r, i) = cur;
      cur *= w;
    }
  }
  const Eigen::MatrixXcd t = red.psi_t * b;                  // n_rf x n_pts
  const Eigen::MatrixXcd proj = noise_basis.adjoint() * t;   // (n_rf-1) x n_pts

  Eigen::VectorXd spectrum(n_pts);
  for (int i = 0; i < n_pts; ++i) {
    const double denom = std::max(proj.col(i).squaredNorm(), 1e-300);
    spectrum[i] = t.col(i).squaredNorm() / denom;
  }

  int best = 0;
  for (int i = 1; i < n_pts; ++i) {
    const double u = std::abs(lo + i * step);
    const double ub = std::abs(lo + best * step);
    if (spectrum[i] > spectrum[best] ||
        (spectrum[i] == spectrum[best] && u < ub))
      best = i;
  }

  double u_best = lo + best * step;
  if (best == 0 || best == n_pts - 1) {
    est.at_window_edge = true;
  } else {
    // Refine on the log spectrum; the MUSIC peak is far sharper than the
    // grid, so interpolation on the raw values would saturate.
    const double ym = std::log(spectrum[best - 1]);
    const double y0 = std::log(spectrum[best]);
    const double yp = std::log(spectrum[best + 1]);
    u_best += parabolic_offset(ym, y0, yp) * step;
  }
  est.phi = std::asin(std::clamp(u_hat + u_best, -1.0, 1.0));
  est.peak = spectrum[best];
  return est;
}

DelayDopplerEstimate delay_doppler_nls(const ResourceGrid& grid,
                                       const ReductionMatrix& red,
                                       double phi_est,
                                       const SymbolGrid& symbols,
                                       const OfdmConfig& ofdm,
                                       const NlsParams& p) {
  if (p.zero_pad_factor < 1)
    throw std::invalid_argument("nls: zero_pad_factor must be >= 1");
  const int n_sym = grid.n_symbols;
  const int n_sub = grid.n_subcarriers;
  if (symbols.symbols.rows() != n_sym || symbols.symbols.cols() != n_sub)
    throw std::invalid_argument("nls: symbol grid size mismatch");

  // Beam-aligned scalar stream y'[n,m] = v^H y[n,m] / (v^H v).
  const Eigen::VectorXcd v =
      red.u.adjoint() *
      steering_vector(phi_est, static_cast<int>(red.u.rows()));
  const double denom = v.squaredNorm();
  if (!(denom > 1e-30))
    throw std::runtime_error("nls: degenerate beamspace response");
  const Eigen::RowVectorXcd aligned = (v.adjoint() * grid.samples) / denom;

  const int rows = n_sym * p.zero_pad_factor;  // Doppler axis
  const int cols = n_sub * p.zero_pad_factor;  // delay axis (index-reversed)
  std::vector<std::complex<double>> padded(
      static_cast<std::size_t>(rows) * cols, {0.0, 0.0});
  for (int n = 0; n < n_sym; ++n)
    for (int m = 0; m < n_sub; ++m)
      padded[static_cast<std::size_t>(n) * cols + m] =
          aligned[grid.col(n, m)] * std::conj(symbols.symbols(n, m));

  std::vector<std::complex<double>> transformed(padded.size());
  detail::fft2_forward(rows, cols, padded.data(), transformed.data());

  // objective(p_bin, q_bin) = sum_{n,m} z[n,m] e^{-j2pi n p/rows} e^{+j2pi m
  // q/cols} = F[p][(cols - q) mod cols]. The map is a bijection of the
  // lattice, so the peak can be located by one flat pass and remapped.
  std::size_t best_idx = 0;
  double best_sq = -1.0;
  for (std::size_t i = 0; i < transformed.size(); ++i) {
    const double mag_sq = std::norm(transformed[i]);
    if (mag_sq > best_sq) {
      best_sq = mag_sq;
      best_idx = i;
    }
  }
  const int best_p = static_cast<int>(best_idx / cols);
  const int best_q =
      (cols - static_cast<int>(best_idx % cols)) % cols;  // delay bin
  const double best = std::sqrt(best_sq);

  const auto value_at = [&](int p_bin, int q_bin) {
    const int pr = ((p_bin % rows) + rows) % rows;
    const int qr = (cols - ((q_bin % cols) + cols) % cols) % cols;
    return std::abs(transformed[static_cast<std::size_t>(pr) * cols + qr]);
  };

  // Median objective magnitude over a fixed subsample as the confidence
  // reference.
  std::vector<double> sample;
  sample.reserve(transformed.size() / 64 + 1);
  for (std::size_t i = 0; i < transformed.size(); i += 64)
    sample.push_back(std::norm(transformed[i]));
  std::nth_element(sample.begin(), sample.begin() + sample.size() / 2,
                   sample.end());
  const double median = std::sqrt(sample[sample.size() / 2]);

  const double dp = parabolic_offset(value_at(best_p - 1, best_q), best,
                                     value_at(best_p + 1, best_q));
  const double dq = parabolic_offset(value_at(best_p, best_q - 1), best,
                                     value_at(best_p, best_q + 1));

  DelayDopplerEstimate est;
  est.peak = best;
  est.low_confidence = best < p.low_confidence_ratio * median;
  est.peak_doppler_bin = best_p < rows / 2 ? best_p : best_p - rows;
  est.peak_delay_bin = best_q;

  const double doppler_step = 1.0 / (rows * ofdm.symbol_duration_s());
  const double delay_step = 1.0 / (cols * ofdm.subcarrier_spacing_hz);
  est.doppler_hz = (est.peak_doppler_bin + dp) * doppler_step;
  double delay = (best_q + dq) * delay_step;
  const double delay_span = ofdm.max_unambiguous_delay_s();
  if (delay < 0.0) delay += delay_span;
  if (delay >= delay_span) delay -= delay_span;
  est.delay_s = delay;
  est.distance_m = 0.5 * kSpeedOfLight * est.delay_s;
  return est;
}

UserEstimate estimate_user(const ResourceGrid& grid, const ReductionMatrix& red,
                           const SymbolGrid& symbols, const OfdmConfig& ofdm,
                           const EstimatorParams& p) {
  UserEstimate est;
  est.angle = music_angle(sample_covariance(grid), red, p.music);
  est.lost = est.angle.at_window_edge;
  est.dd = delay_doppler_nls(grid, red, est.angle.phi, symbols, ofdm, p.nls);
  return est;
}

}  // namespace beamtrack
