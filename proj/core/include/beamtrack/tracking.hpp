#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "beamtrack/estimator.hpp"
#include "beamtrack/ofdm.hpp"
#include "beamtrack/road.hpp"
#include "beamtrack/slepian.hpp"

namespace beamtrack {

enum class TrackStatus { acquiring, tracking, lost };
const char* to_string(TrackStatus s);

enum class PredictorKind { kinematic, hold };

struct PlanarPoint {
  double x = 0.0;
  double y = 0.0;
};

inline PlanarPoint position_from_polar(double distance_m, double angle_rad) {
  return {distance_m * std::sin(angle_rad), distance_m * std::cos(angle_rad)};
}

struct AnglePrediction {
  double phi = 0.0;
  bool behind_array = false;  // extrapolated position has y <= 0
};

// Three-point constant-acceleration extrapolation in Cartesian coordinates,
// exact for quadratic-in-time motion: p_next = 3 p2 - 3 p1 + p0 for history
// ordered oldest to newest, converted back to an angle.
AnglePrediction predict_next_angle(const std::array<PlanarPoint, 3>& history);

// Baseline that repoints at the latest estimated angle.
inline double baseline_hold_predictor(double latest_phi) { return latest_phi; }

struct TrackerOptions {
  PredictorKind predictor = PredictorKind::kinematic;
  bool genie = false;                 // estimates replaced by ground truth
  double epoch_period_s = 0.1;
  double tx_power_w = 0.05;
  double noise_psd_w_per_hz = 2e-21;
  double rcs_m2 = 100.0;
  double initial_angle_error_beamwidths = 0.5;
  double music_window_beamwidths = 4.0;
  EstimatorParams estimator;
};

// One audit row per user per epoch. Truth columns are evaluated at the start
// of the user's slot within the epoch.
struct EpochRecord {
  int epoch = 0;
  int user = 0;
  double x = 0.0, y = 0.0;
  double d = 0.0, phi = 0.0, nu = 0.0;
  double phi_pred = 0.0;              // beam used during this epoch
  double phi_est = 0.0, d_est = 0.0, nu_est = 0.0;
  TrackStatus status = TrackStatus::acquiring;
  double se = 0.0;                    // bits/s/Hz achieved with that beam
  double gain_sq = 0.0;               // |g_tx|^2 achieved with that beam
  int edge = -1;                      // road edge of the truth position
  bool corner = false;                // first epoch on a new edge
  bool low_confidence = false;
};

// Runs the per-epoch predict / illuminate / estimate loop over whole
// trajectories (all of equal length, one per user). Needs K <= n_rf_tx and
// the epoch budget K N T0 <= epoch period. Per epoch and user: the beam
// points at the predicted angle, a frame is synthesized with every user's
// echo in it, the angle is re-estimated by beamspace MUSIC and the range and
// radial velocity by the delay/Doppler fit. A MUSIC peak on the window edge
// or a prediction behind the array marks the epoch lost: the tracker then
// holds the last beam, doubles its MUSIC window for the following epochs
// until reacquired, and restarts its estimate history.
std::vector<EpochRecord> run_tracking(const std::vector<Trajectory>& users,
                                      const OfdmConfig& ofdm,
                                      const ArrayConfig& arr,
                                      const SlepianBank& bank,
                                      const TrackerOptions& opt,
                                      std::uint64_t seed);

// Serializes records in the audit schema:
// epoch,user,x,y,d,phi,nu,phi_pred,phi_est,d_est,nu_est,status
void write_audit_csv(const std::vector<EpochRecord>& records,
                     std::ostream& out);

}  // namespace beamtrack
