#include "beamtrack/ambiguity.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "beamtrack/constants.hpp"

namespace beamtrack {

double ideal_mf_gain(const RectPulse& p) {
  if (p.duration_s <= 0.0) throw std::invalid_argument("pulse duration <= 0");
  return p.amplitude * p.amplitude * p.duration_s;
}

double sinc(double x) {
  if (x == 0.0) return 1.0;
  const double px = kPi * x;
  if (std::abs(px) < 1e-4) return 1.0 - px * px / 6.0;
  return std::sin(px) / px;
}

std::complex<double> cross_ambiguity(const RectPulse& p, double dtau_s,
                                     double dnu_hz) {
  const double t = p.duration_s;
  if (t <= 0.0) throw std::invalid_argument("pulse duration <= 0");
  const double t_ov = t - std::abs(dtau_s);
  if (t_ov <= 0.0) return {0.0, 0.0};
  const double mag = p.amplitude * p.amplitude * t_ov * sinc(dnu_hz * t_ov);
  const double phase = kPi * dnu_hz * (t + dtau_s);
  if (phase == 0.0) return {mag, 0.0};  // keep chi(0,0) = A^2 T exact
  return std::polar(mag, phase);
}

namespace {

using Cd = std::complex<double>;

Cd simpson(const Cd& fa, const Cd& fm, const Cd& fb, double h) {
  return (h / 6.0) * (fa + 4.0 * fm + fb);
}

Cd adaptive_simpson(const std::function<Cd(double)>& f, double a, double b,
                    const Cd& fa, const Cd& fm, const Cd& fb, const Cd& whole,
                    double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const Cd flm = f(lm);
  const Cd frm = f(rm);
  const Cd left = simpson(fa, flm, fm, m - a);
  const Cd right = simpson(fm, frm, fb, b - m);
  const Cd delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

std::complex<double> cross_ambiguity_quadrature(const Envelope& s,
                                                double duration_s,
                                                double dtau_s, double dnu_hz,
                                                double abs_tol) {
  if (duration_s <= 0.0) throw std::invalid_argument("pulse duration <= 0");
  const double lo = std::max(0.0, dtau_s);
  const double hi = std::min(duration_s, duration_s + dtau_s);
  if (hi <= lo) return {0.0, 0.0};
  const auto f = [&](double t) {
    return s(t) * std::conj(s(t - dtau_s)) *
           std::polar(1.0, 2.0 * kPi * dnu_hz * t);
  };
  // Split into enough panels to resolve the Doppler oscillation before the
  // adaptive recursion takes over.
  const double cycles = std::abs(dnu_hz) * (hi - lo);
  const int panels = std::max(4, static_cast<int>(std::ceil(8.0 * cycles)));
  Cd total(0.0, 0.0);
  const double step = (hi - lo) / panels;
  for (int i = 0; i < panels; ++i) {
    const double a = lo + i * step;
    const double b = i + 1 == panels ? hi : a + step;
    const double m = 0.5 * (a + b);
    const Cd fa = f(a), fm = f(m), fb = f(b);
    const Cd whole = simpson(fa, fm, fb, b - a);
    total += adaptive_simpson(f, a, b, fa, fm, fb, whole, abs_tol / panels, 40);
  }
  return total;
}

double mf_loss_db(const RectPulse& p, double dtau_s, double dnu_hz) {
  const double mag = std::abs(cross_ambiguity(p, dtau_s, dnu_hz));
  if (mag == 0.0) return -std::numeric_limits<double>::infinity();
  return 20.0 * std::log10(mag / ideal_mf_gain(p));
}

std::vector<MfLossPoint> mf_loss_grid(const RectPulse& p, double dtau_max_s,
                                      double dnu_max_hz, int half_points) {
  if (half_points < 0) throw std::invalid_argument("half_points < 0");
  const int n = 2 * half_points + 1;
  std::vector<MfLossPoint> out;
  out.reserve(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    const double dtau =
        half_points == 0
            ? 0.0
            : dtau_max_s * (i - half_points) / static_cast<double>(half_points);
    for (int j = 0; j < n; ++j) {
      const double dnu =
          half_points == 0 ? 0.0
                           : dnu_max_hz * (j - half_points) /
                                 static_cast<double>(half_points);
      out.push_back({dtau, dnu, mf_loss_db(p, dtau, dnu)});
    }
  }
  return out;
}

void write_ambiguity_csv(const std::vector<MfLossPoint>& points,
                         std::ostream& out) {
  out << "dtau,dnu,loss_db\n";
  char line[160];
  for (const MfLossPoint& p : points) {
    if (std::isinf(p.loss_db)) {
      std::snprintf(line, sizeof line, "%.12g,%.12g,-inf\n", p.dtau_s,
                    p.dnu_hz);
    } else {
      std::snprintf(line, sizeof line, "%.12g,%.12g,%.12g\n", p.dtau_s,
                    p.dnu_hz, p.loss_db);
    }
    out << line;
  }
}

}  // namespace beamtrack
