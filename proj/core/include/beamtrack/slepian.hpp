#pragma once

#include <Eigen/Dense>

namespace beamtrack {

// Bank of discrete prolate spheroidal sequences: the n_rf dominant
// eigenvectors of the n_rx x n_rx prolate kernel sin(2 pi W (i-j)) / (pi
// (i-j)) with diagonal 2W. Columns are orthonormal, ordered by decreasing
// concentration, with the first non-negligible entry of each made positive so
// the bank is reproducible across runs.
struct SlepianBank {
  Eigen::MatrixXd vectors;          // n_rx x n_rf
  Eigen::VectorXd concentrations;   // matching eigenvalues, in (0, 1]
  double half_bandwidth = 0.0;      // W
  // The eigenvalue right after the kept block is nearly equal to the last
  // kept one, so the spanned subspace is not well defined.
  bool boundary_clustered = false;

  int n_rx() const { return static_cast<int>(vectors.rows()); }
  int n_rf() const { return static_cast<int>(vectors.cols()); }
};

inline double default_half_bandwidth(int n_rx, int n_rf) {
  return static_cast<double>(n_rf) / (2.0 * n_rx);
}

// half_bandwidth in (0, 0.5]; at exactly 0.5 the kernel is the identity and
// the bank spans the whole space.
SlepianBank slepian_bank(int n_rx, int n_rf, double half_bandwidth);

// Analog combining matrix for a beam pointed at phi_hat:
// U = D(phi_hat) Psi with D = diag(exp(j pi i sin(phi_hat))) and Psi the bank
// scaled by 1/sqrt(n_rf), so that U^H U = (1/n_rf) I. The same scaled bank
// satisfies the derotation identity U^H b(phi) = Psi^T b(phi') with
// sin(phi') = sin(phi) - sin(phi_hat).
struct ReductionMatrix {
  double phi_hat = 0.0;
  Eigen::MatrixXd psi;      // scaled bank, n_rx x n_rf
  Eigen::MatrixXcd psi_t;   // psi transposed and promoted to complex
  Eigen::MatrixXcd u;       // n_rx x n_rf
};

ReductionMatrix make_reduction(const SlepianBank& bank, double phi_hat);

}  // namespace beamtrack
