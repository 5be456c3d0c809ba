#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "beamtrack/constants.hpp"

namespace beamtrack {

// Half-wavelength ULA responses. Angles are measured from array boresight
// (the +y axis), so the response of element i (0-based) at angle phi is
// exp(j*pi*i*sin(phi)); element 0 has unit response. Valid for the front
// half-plane only.

inline void check_sector(double phi) {
  if (!(phi > -kPi / 2.0 && phi < kPi / 2.0))
    throw std::domain_error("array: angle outside (-pi/2, pi/2)");
}

// Response as a function of u = sin(phi). Scans evaluate this directly to
// avoid asin/sin round trips.
inline Eigen::VectorXcd steering_vector_sin(double u, int n_elements) {
  if (!(u >= -1.0 && u <= 1.0))
    throw std::domain_error("array: sin-angle outside [-1, 1]");
  Eigen::VectorXcd a(n_elements);
  const std::complex<double> step{std::cos(kPi * u), std::sin(kPi * u)};
  std::complex<double> cur{1.0, 0.0};
  for (int i = 0; i < n_elements; ++i) {
    a[i] = cur;
    cur *= step;
  }
  return a;
}

inline Eigen::VectorXcd steering_vector(double phi, int n_elements) {
  check_sector(phi);
  return steering_vector_sin(std::sin(phi), n_elements);
}

// Analog transmit beamformer pointed at phi_hat, unit norm.
inline Eigen::VectorXcd beamformer(double phi_hat, int n_elements) {
  return steering_vector(phi_hat, n_elements) / std::sqrt(double(n_elements));
}

// Effective transmit gain seen by a scatterer at phi when one of n_users
// equal-power beams points at phi_hat: (1/sqrt(K)) a(phi)^H f(phi_hat).
// Magnitude is bounded by sqrt(n_tx / K) and follows the Dirichlet kernel in
// sin(phi) - sin(phi_hat), with nulls every 2/n_tx.
inline std::complex<double> tx_gain(double phi, double phi_hat, int n_tx,
                                    int n_users) {
  if (n_users <= 0) throw std::invalid_argument("tx_gain: n_users must be positive");
  check_sector(phi);
  check_sector(phi_hat);
  const double delta = std::sin(phi_hat) - std::sin(phi);
  // sum_i exp(j*pi*i*delta), evaluated by recurrence.
  const std::complex<double> step{std::cos(kPi * delta), std::sin(kPi * delta)};
  std::complex<double> cur{1.0, 0.0};
  std::complex<double> acc{0.0, 0.0};
  for (int i = 0; i < n_tx; ++i) {
    acc += cur;
    cur *= step;
  }
  return acc / std::sqrt(double(n_tx) * double(n_users));
}

}  // namespace beamtrack
