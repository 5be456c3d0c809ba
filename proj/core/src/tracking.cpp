#include "beamtrack/tracking.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "beamtrack/array_response.hpp"
#include "beamtrack/channel.hpp"
#include "beamtrack/metrics.hpp"

namespace beamtrack {

const char* to_string(TrackStatus s) {
  switch (s) {
    case TrackStatus::acquiring: return "acquiring";
    case TrackStatus::tracking: return "tracking";
    case TrackStatus::lost: return "lost";
  }
  return "unknown";
}

AnglePrediction predict_next_angle(const std::array<PlanarPoint, 3>& history) {
  const double x = 3.0 * history[2].x - 3.0 * history[1].x + history[0].x;
  const double y = 3.0 * history[2].y - 3.0 * history[1].y + history[0].y;
  AnglePrediction p;
  if (x == 0.0 && y == 0.0) {
    // Degenerate stationary history: keep pointing where the user is.
    p.phi = std::atan2(history[2].x, history[2].y);
    return p;
  }
  if (y <= 0.0) {
    p.behind_array = true;
    p.phi = std::atan2(history[2].x, history[2].y);
    return p;
  }
  p.phi = std::atan2(x, y);
  return p;
}

namespace {

struct UserTrack {
  double phi_hat = 0.0;
  std::vector<PlanarPoint> history;  // oldest first, at most 3
  int successes = 0;                 // estimates since the last reset
  double window_scale = 1.0;
};

constexpr double kMaxWindowScale = 16.0;
constexpr double kMaxWindowSin = 0.95;

}  // namespace

std::vector<EpochRecord> run_tracking(const std::vector<Trajectory>& users,
                                      const OfdmConfig& ofdm,
                                      const ArrayConfig& arr,
                                      const SlepianBank& bank,
                                      const TrackerOptions& opt,
                                      std::uint64_t seed) {
  ofdm.validate();
  arr.validate();
  const int n_users = static_cast<int>(users.size());
  if (n_users < 1) throw std::invalid_argument("tracker: no users");
  if (n_users > arr.n_rf_tx)
    throw std::invalid_argument("tracker: more users than transmit beams");
  if (n_users * ofdm.frame_duration_s() > opt.epoch_period_s * (1.0 + 1e-12))
    throw std::invalid_argument(
        "tracker: slot budget K N T0 exceeds the epoch period");
  if (bank.n_rx() != arr.n_rx || bank.n_rf() != arr.n_rf_rx)
    throw std::invalid_argument("tracker: bank does not match the array");
  const int n_epochs = static_cast<int>(users[0].points.size());
  for (const Trajectory& t : users)
    if (static_cast<int>(t.points.size()) != n_epochs)
      throw std::invalid_argument("tracker: trajectories of unequal length");

  Rng init_rng(split_seed(seed, 1));
  Rng channel_rng(split_seed(seed, 2));
  Rng frame_rng(split_seed(seed, 3));

  const double beamwidth = arr.tx_beamwidth_sin();
  const double frame_s = ofdm.frame_duration_s();
  const double wavelength = ofdm.wavelength_m();

  std::vector<UserTrack> tracks(n_users);
  for (int k = 0; k < n_users; ++k) {
    const UserKinematicState s0 =
        propagate(users[k].points[0].state, k * frame_s);
    const double u0 =
        std::sin(std::atan2(s0.x, s0.y)) +
        init_rng.uniform(-opt.initial_angle_error_beamwidths,
                         opt.initial_angle_error_beamwidths) *
            beamwidth;
    tracks[k].phi_hat = std::asin(std::clamp(u0, -0.999, 0.999));
  }

  std::vector<EpochRecord> records;
  records.reserve(static_cast<std::size_t>(n_epochs) * n_users);

  std::vector<std::complex<double>> epoch_phase(n_users);
  std::vector<SymbolGrid> slot_symbols(n_users);
  std::vector<UserFrameInput> inputs(n_users);

  for (int l = 0; l < n_epochs; ++l) {
    if (!opt.genie) {
      // One reflection phase per user per epoch, shared by all slots.
      for (int j = 0; j < n_users; ++j)
        epoch_phase[j] = channel_rng.random_phase();
    }

    for (int slot = 0; slot < n_users; ++slot) {
      UserTrack& tr = tracks[slot];
      const double t_off = slot * frame_s;

      std::vector<ChannelSnapshot> snaps(n_users);
      for (int j = 0; j < n_users; ++j) {
        snaps[j] = channel_geometry(propagate(users[j].points[l].state, t_off),
                                    ofdm.carrier_frequency_hz);
        if (!opt.genie)
          snaps[j].h = std::sqrt(two_way_power(snaps[j].distance_m, opt.rcs_m2,
                                               wavelength)) *
                       epoch_phase[j];
      }
      const ChannelSnapshot& own = snaps[slot];

      EpochRecord rec;
      rec.epoch = l;
      rec.user = slot;
      rec.x = own.distance_m * std::sin(own.angle_rad);
      rec.y = own.distance_m * std::cos(own.angle_rad);
      rec.d = own.distance_m;
      rec.phi = own.angle_rad;
      rec.nu = own.doppler_hz;
      rec.phi_pred = tr.phi_hat;
      rec.edge = users[slot].points[l].edge;
      rec.corner = l > 0 && users[slot].points[l].edge !=
                               users[slot].points[l - 1].edge;

      const std::complex<double> g =
          tx_gain(own.angle_rad, tr.phi_hat, arr.n_tx, n_users);
      rec.gain_sq = std::norm(g);
      rec.se = spectral_efficiency(own.distance_m, rec.gain_sq, opt.tx_power_w,
                                   opt.noise_psd_w_per_hz, ofdm);

      bool lost_event = false;
      if (opt.genie) {
        rec.phi_est = own.angle_rad;
        rec.d_est = own.distance_m;
        rec.nu_est = own.doppler_hz;
      } else {
        for (int j = 0; j < n_users; ++j) {
          slot_symbols[j] =
              random_qpsk(ofdm.n_symbols, ofdm.n_subcarriers, frame_rng);
          inputs[j] = {snaps[j], tracks[j].phi_hat, &slot_symbols[j]};
        }
        const ReductionMatrix red = make_reduction(bank, tr.phi_hat);
        const ResourceGrid grid =
            synthesize_grid(inputs, red.u, ofdm, arr, opt.tx_power_w,
                            opt.noise_psd_w_per_hz, frame_rng);

        EstimatorParams params = opt.estimator;
        params.music.window_halfwidth_sin =
            std::min(opt.music_window_beamwidths * beamwidth * tr.window_scale,
                     kMaxWindowSin);
        const UserEstimate est =
            estimate_user(grid, red, slot_symbols[slot], ofdm, params);
        rec.phi_est = est.angle.phi;
        rec.d_est = est.dd.distance_m;
        rec.nu_est = est.dd.doppler_hz;
        rec.low_confidence = est.dd.low_confidence;
        lost_event = est.lost;
      }

      double next_phi = rec.phi_est;
      if (!lost_event) {
        tr.history.push_back(position_from_polar(rec.d_est, rec.phi_est));
        if (tr.history.size() > 3) tr.history.erase(tr.history.begin());
        if (opt.predictor == PredictorKind::kinematic &&
            tr.history.size() == 3) {
          const AnglePrediction pred = predict_next_angle(
              {tr.history[0], tr.history[1], tr.history[2]});
          if (pred.behind_array)
            lost_event = true;
          else
            next_phi = pred.phi;
        }
      }

      if (lost_event) {
        rec.status = TrackStatus::lost;
        // Hold the beam, widen the search for the following epochs and
        // restart the estimate history.
        tr.window_scale = std::min(tr.window_scale * 2.0, kMaxWindowScale);
        tr.history.clear();
        tr.successes = 0;
      } else {
        rec.status = tr.successes >= 3 ? TrackStatus::tracking
                                       : TrackStatus::acquiring;
        tr.successes++;
        tr.window_scale = 1.0;
        tr.phi_hat = next_phi;
      }
      records.push_back(rec);
    }
  }
  return records;
}

void write_audit_csv(const std::vector<EpochRecord>& records,
                     std::ostream& out) {
  out << "epoch,user,x,y,d,phi,nu,phi_pred,phi_est,d_est,nu_est,status\n";
  char line[512];
  for (const EpochRecord& r : records) {
    std::snprintf(line, sizeof line,
                  "%d,%d,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,"
                  "%.12g,%s\n",
                  r.epoch, r.user, r.x, r.y, r.d, r.phi, r.nu, r.phi_pred,
                  r.phi_est, r.d_est, r.nu_est, to_string(r.status));
    out << line;
  }
}

}  // namespace beamtrack
