#include "beamtrack/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <stdexcept>
#include <utility>

#include "beamtrack/array_response.hpp"
#include "beamtrack/channel.hpp"
#include "beamtrack/slepian.hpp"

namespace beamtrack {

namespace {

double quantile_sorted(const std::vector<double>& sorted, double p) {
  const double h = p * (static_cast<double>(sorted.size()) - 1.0);
  const std::size_t lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double w = h - static_cast<double>(lo);
  return sorted[lo] * (1.0 - w) + sorted[hi] * w;
}

// Stream ids 2t and 2t+1 belong to the trials; this tag is far outside any
// realistic trial count.
constexpr std::uint64_t kBootstrapStream = 0x626f6f74;  // "boot"

}  // namespace

std::vector<EpochSeStats> bootstrap_epoch_stats(const Eigen::MatrixXd& values,
                                                std::uint64_t seed,
                                                int n_resamples) {
  const int n_trials = static_cast<int>(values.rows());
  const int n_epochs = static_cast<int>(values.cols());
  if (n_trials < 1 || n_epochs < 1)
    throw std::invalid_argument("bootstrap: empty value matrix");
  if (n_resamples < 2) throw std::invalid_argument("bootstrap: n_resamples");

  Rng rng(split_seed(seed, kBootstrapStream));
  std::vector<EpochSeStats> out(n_epochs);
  std::vector<double> means(n_resamples);
  for (int e = 0; e < n_epochs; ++e) {
    out[e].epoch = e;
    out[e].mean_se = values.col(e).mean();
    for (int b = 0; b < n_resamples; ++b) {
      double acc = 0.0;
      for (int t = 0; t < n_trials; ++t) {
        const int idx = std::min(
            n_trials - 1, static_cast<int>(rng.uniform() * n_trials));
        acc += values(idx, e);
      }
      means[b] = acc / n_trials;
    }
    std::sort(means.begin(), means.end());
    out[e].ci_low = quantile_sorted(means, 0.025);
    out[e].ci_high = quantile_sorted(means, 0.975);
  }
  return out;
}

FixedPathResult run_monte_carlo(const ScenarioConfig& sc, int n_trials,
                                std::uint64_t seed, bool genie,
                                PredictorKind predictor) {
  if (n_trials < 1) throw std::invalid_argument("monte carlo: n_trials");
  const int n_epochs = sc.tracking.n_epochs;
  const SlepianBank bank =
      slepian_bank(sc.array.n_rx, sc.array.n_rf_rx, sc.slepian_w());
  TrackerOptions opt = sc.tracker_options();
  opt.genie = genie;
  opt.predictor = predictor;

  FixedPathResult r;
  r.se.resize(n_trials, n_epochs);
  r.sin_err.resize(n_trials, n_epochs);
  r.corner_epochs.resize(n_trials);

  for (int t = 0; t < n_trials; ++t) {
    Rng traj_rng(split_seed(seed, 2ull * static_cast<std::uint64_t>(t)));
    std::vector<Trajectory> users;
    users.reserve(sc.n_users);
    for (int k = 0; k < sc.n_users; ++k)
      users.push_back(sample_trajectory(sc.road, sc.start_node, sc.fixed_path,
                                        sc.speed, n_epochs, sc.epoch_period_s,
                                        traj_rng));
    const std::vector<EpochRecord> records =
        run_tracking(users, sc.ofdm, sc.array, bank, opt,
                     split_seed(seed, 2ull * static_cast<std::uint64_t>(t) + 1));
    for (const EpochRecord& rec : records) {
      if (rec.user != 0) continue;
      r.se(t, rec.epoch) = rec.se;
      r.sin_err(t, rec.epoch) =
          std::abs(std::sin(rec.phi_pred) - std::sin(rec.phi));
    }
    r.corner_epochs[t] = users[0].corner_epochs;
    if (t == 0) r.first_trial_records = records;
  }
  r.stats = bootstrap_epoch_stats(r.se, seed);
  return r;
}

EnsembleResult run_ensemble(const ScenarioConfig& sc, int n_trials,
                            std::uint64_t seed, bool genie,
                            PredictorKind predictor) {
  if (n_trials < 1) throw std::invalid_argument("ensemble: n_trials");
  const int n_epochs = sc.tracking.n_epochs;
  const SlepianBank bank =
      slepian_bank(sc.array.n_rx, sc.array.n_rf_rx, sc.slepian_w());
  TrackerOptions opt = sc.tracker_options();
  opt.genie = genie;
  opt.predictor = predictor;
  const std::vector<int> no_fixed_path;

  std::map<std::pair<int, int>, std::pair<double, long>> acc;
  long total = 0;
  for (int t = 0; t < n_trials; ++t) {
    Rng traj_rng(split_seed(seed, 2ull * static_cast<std::uint64_t>(t)));
    std::vector<Trajectory> users;
    users.reserve(sc.n_users);
    for (int k = 0; k < sc.n_users; ++k)
      users.push_back(sample_trajectory(sc.road, sc.start_node, no_fixed_path,
                                        sc.speed, n_epochs, sc.epoch_period_s,
                                        traj_rng));
    const std::vector<EpochRecord> records =
        run_tracking(users, sc.ofdm, sc.array, bank, opt,
                     split_seed(seed, 2ull * static_cast<std::uint64_t>(t) + 1));
    for (const EpochRecord& rec : records) {
      const int xb = static_cast<int>(
          std::floor((rec.x + sc.d_max_m) / sc.heatmap_bin_m));
      const int yb = static_cast<int>(std::floor(rec.y / sc.heatmap_bin_m));
      auto& cell = acc[{xb, yb}];
      cell.first += rec.se;
      cell.second += 1;
      ++total;
    }
  }

  EnsembleResult r;
  r.total_samples = total;
  r.cells.reserve(acc.size());
  for (const auto& [bin, sum_count] : acc)
    r.cells.push_back({bin.first, bin.second,
                       sum_count.first / static_cast<double>(sum_count.second),
                       sum_count.second});
  return r;
}

SweepResult sweep_rf_chains(const ScenarioConfig& sc, int n_trials,
                            std::uint64_t seed) {
  if (n_trials < 1) throw std::invalid_argument("sweep: n_trials");
  const SweepConfig& sw = sc.sweep;
  OfdmConfig ofdm = sc.ofdm;
  ofdm.n_symbols = sw.n_symbols;
  ofdm.n_subcarriers = sw.n_subcarriers;
  ofdm.validate();

  SweepResult r;
  const double wavelength = ofdm.wavelength_m();
  const double beamwidth = sc.array.tx_beamwidth_sin();
  const double upper_db = 10.0 * std::log10(static_cast<double>(sc.array.n_tx));

  for (int n_rx : sw.n_rx_list) {
    std::vector<int> chain_counts;
    for (int n_rf : sw.n_rf_list)
      if (n_rf <= n_rx) chain_counts.push_back(n_rf);
    if (std::find(chain_counts.begin(), chain_counts.end(), n_rx) ==
        chain_counts.end())
      chain_counts.push_back(n_rx);  // all-digital reference

    for (int n_rf : chain_counts) {
      ArrayConfig arr = sc.array;
      arr.n_rx = n_rx;
      arr.n_rf_rx = n_rf;
      arr.validate();
      const SlepianBank bank =
          slepian_bank(n_rx, n_rf, default_half_bandwidth(n_rx, n_rf));

      std::vector<double> gains(n_trials);
      for (int t = 0; t < n_trials; ++t) {
        // One stream per trial, shared by every (n_rx, n_rf) row: the user
        // draw, initial beam error, reflection phase and payload match across
        // rows, so row differences are due to the front end alone.
        Rng rng(split_seed(seed, static_cast<std::uint64_t>(t)));
        const double u = rng.uniform(-sw.angle_max_sin, sw.angle_max_sin);
        const double phi = std::asin(u);
        const double du = rng.uniform(-1.0, 1.0) *
                          sw.initial_error_beamwidths * beamwidth;
        const double phi_beam =
            std::asin(std::clamp(u + du, -0.999, 0.999));

        UserKinematicState state;
        state.x = sw.distance_m * std::sin(phi);
        state.y = sw.distance_m * std::cos(phi);
        ChannelSnapshot snap =
            channel_geometry(state, ofdm.carrier_frequency_hz);
        snap.h = std::sqrt(two_way_power(snap.distance_m, sc.rcs_m2,
                                         wavelength)) *
                 rng.random_phase();

        const SymbolGrid symbols =
            random_qpsk(ofdm.n_symbols, ofdm.n_subcarriers, rng);
        const ReductionMatrix red = make_reduction(bank, phi_beam);
        const ResourceGrid grid = synthesize_grid(
            {{snap, phi_beam, &symbols}}, red.u, ofdm, arr, sc.tx_power_w,
            sc.noise_psd_w_per_hz, rng);

        MusicParams mp = sc.estimator.music;
        mp.window_halfwidth_sin = std::min(
            sc.tracking.music_window_beamwidths * beamwidth, 0.95);
        const AngleEstimate est =
            music_angle(sample_covariance(grid), red, mp);
        gains[t] = std::norm(tx_gain(phi, est.phi, arr.n_tx, 1));
      }

      double mean = 0.0;
      for (double g : gains) mean += g;
      mean /= n_trials;
      r.rows.push_back({n_rx, n_rf, 10.0 * std::log10(mean), upper_db});
      r.gains.push_back(std::move(gains));
    }
  }
  return r;
}

void write_se_vs_epoch_csv(const std::vector<EpochSeStats>& stats,
                           std::ostream& out) {
  out << "epoch,mean_se,ci_low,ci_high\n";
  char line[160];
  for (const EpochSeStats& s : stats) {
    std::snprintf(line, sizeof line, "%d,%.12g,%.12g,%.12g\n", s.epoch,
                  s.mean_se, s.ci_low, s.ci_high);
    out << line;
  }
}

void write_heatmap_csv(const EnsembleResult& r, std::ostream& out) {
  out << "x_bin,y_bin,mean_se,count\n";
  char line[160];
  for (const HeatmapCell& c : r.cells) {
    std::snprintf(line, sizeof line, "%d,%d,%.12g,%ld\n", c.x_bin, c.y_bin,
                  c.mean_se, c.count);
    out << line;
  }
}

void write_gain_csv(const std::vector<SweepRow>& rows, std::ostream& out) {
  out << "n_rx,n_rf,mean_gain_db,upper_bound_db\n";
  char line[160];
  for (const SweepRow& row : rows) {
    std::snprintf(line, sizeof line, "%d,%d,%.12g,%.12g\n", row.n_rx,
                  row.n_rf, row.mean_gain_db, row.upper_bound_db);
    out << line;
  }
}

}  // namespace beamtrack
