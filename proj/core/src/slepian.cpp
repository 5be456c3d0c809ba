#include "beamtrack/slepian.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

#include "beamtrack/array_response.hpp"
#include "beamtrack/constants.hpp"

namespace beamtrack {

SlepianBank slepian_bank(int n_rx, int n_rf, double half_bandwidth) {
  if (n_rx <= 0) throw std::invalid_argument("slepian: n_rx must be positive");
  if (n_rf <= 0 || n_rf > n_rx)
    throw std::invalid_argument("slepian: need 0 < n_rf <= n_rx");
  if (!(half_bandwidth > 0.0 && half_bandwidth <= 0.5))
    throw std::invalid_argument("slepian: half bandwidth outside (0, 0.5]");

  Eigen::MatrixXd kernel(n_rx, n_rx);
  for (int i = 0; i < n_rx; ++i) {
    kernel(i, i) = 2.0 * half_bandwidth;
    for (int j = 0; j < i; ++j) {
      const double d = i - j;
      const double v = std::sin(2.0 * kPi * half_bandwidth * d) / (kPi * d);
      kernel(i, j) = v;
      kernel(j, i) = v;
    }
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(kernel);
  if (eig.info() != Eigen::Success)
    throw std::runtime_error("slepian: eigendecomposition failed");

  SlepianBank bank;
  bank.half_bandwidth = half_bandwidth;
  bank.vectors.resize(n_rx, n_rf);
  bank.concentrations.resize(n_rf);
  // Eigen returns eigenvalues in increasing order; take the top block.
  for (int k = 0; k < n_rf; ++k) {
    const int src = n_rx - 1 - k;
    Eigen::VectorXd v = eig.eigenvectors().col(src);
    const double scale = v.cwiseAbs().maxCoeff();
    for (int i = 0; i < n_rx; ++i) {
      if (std::abs(v[i]) > 1e-12 * scale) {
        if (v[i] < 0.0) v = -v;
        break;
      }
    }
    bank.vectors.col(k) = v;
    bank.concentrations[k] = eig.eigenvalues()[src];
  }
  if (n_rf < n_rx) {
    const double gap =
        bank.concentrations[n_rf - 1] - eig.eigenvalues()[n_rx - 1 - n_rf];
    bank.boundary_clustered = gap < 1e-10;
  }
  return bank;
}

ReductionMatrix make_reduction(const SlepianBank& bank, double phi_hat) {
  check_sector(phi_hat);
  ReductionMatrix red;
  red.phi_hat = phi_hat;
  red.psi = bank.vectors / std::sqrt(static_cast<double>(bank.n_rf()));
  red.psi_t = red.psi.transpose().cast<std::complex<double>>();

  const Eigen::VectorXcd d = steering_vector(phi_hat, bank.n_rx());
  red.u = d.asDiagonal() * red.psi.cast<std::complex<double>>();
  return red;
}

}  // namespace beamtrack
