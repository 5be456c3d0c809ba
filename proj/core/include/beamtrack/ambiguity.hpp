#pragma once

#include <complex>
#include <functional>
#include <iosfwd>
#include <vector>

namespace beamtrack {

// Rectangular baseband pulse: amplitude A over [0, T).
struct RectPulse {
  double amplitude = 1.0;
  double duration_s = 1.0;
};

// Matched-filter output at perfect alignment, chi(0, 0) = A^2 T.
double ideal_mf_gain(const RectPulse& p);

// sin(pi x) / (pi x) with the removable singularity handled so sinc(0) == 1
// exactly.
double sinc(double x);

// Narrowband cross-ambiguity chi(dtau, dnu) = integral of
// s(t) conj(s(t - dtau)) e^{j 2 pi dnu t} dt. For the rectangular pulse this
// is A^2 T_ov sinc(dnu T_ov) e^{j pi dnu (T + dtau)} with T_ov = T - |dtau|,
// and zero once |dtau| >= T.
std::complex<double> cross_ambiguity(const RectPulse& p, double dtau_s,
                                     double dnu_hz);

// Same integral evaluated numerically for an arbitrary complex envelope
// supported on [0, duration_s]. Adaptive Simpson with an absolute tolerance;
// used to validate the closed form and available for non-rectangular pulses.
using Envelope = std::function<std::complex<double>(double)>;
std::complex<double> cross_ambiguity_quadrature(const Envelope& s,
                                                double duration_s,
                                                double dtau_s, double dnu_hz,
                                                double abs_tol);

// 20 log10(|chi| / chi(0,0)); -inf where the overlap vanishes.
double mf_loss_db(const RectPulse& p, double dtau_s, double dnu_hz);

struct MfLossPoint {
  double dtau_s = 0.0;
  double dnu_hz = 0.0;
  double loss_db = 0.0;
};

// Uniform (2 half_points + 1)^2 grid over [-dtau_max, dtau_max] x
// [-dnu_max, dnu_max], dtau-major then dnu ascending.
std::vector<MfLossPoint> mf_loss_grid(const RectPulse& p, double dtau_max_s,
                                      double dnu_max_hz, int half_points);

// Schema: dtau,dnu,loss_db. Vanished overlap serializes as "-inf".
void write_ambiguity_csv(const std::vector<MfLossPoint>& points,
                         std::ostream& out);

}  // namespace beamtrack
