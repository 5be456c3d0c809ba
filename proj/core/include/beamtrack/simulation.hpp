#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "beamtrack/scenario.hpp"
#include "beamtrack/tracking.hpp"

namespace beamtrack {

struct EpochSeStats {
  int epoch = 0;
  double mean_se = 0.0;
  double ci_low = 0.0;   // bootstrap percentile 2.5
  double ci_high = 0.0;  // bootstrap percentile 97.5
};

// Per-epoch mean of per-trial values with a seeded bootstrap percentile
// interval over trials.
std::vector<EpochSeStats> bootstrap_epoch_stats(const Eigen::MatrixXd& values,
                                                std::uint64_t seed,
                                                int n_resamples = 1000);

// Monte-Carlo repetition of one tracked drive. Matrices are trials x epochs
// and describe the slot-0 user; sin_err is |sin(beam) - sin(truth)| for the
// beam the tracker actually used that epoch.
struct FixedPathResult {
  Eigen::MatrixXd se;
  Eigen::MatrixXd sin_err;
  std::vector<std::vector<int>> corner_epochs;  // per trial
  std::vector<EpochSeStats> stats;
  std::vector<EpochRecord> first_trial_records;
};

// Trial t draws its trajectories from stream (seed, 2t) and its tracking
// randomness from (seed, 2t + 1), so two runs with the same seed but
// different options (genie on/off, predictor choice) see identical
// trajectories and identical initial beam errors: paired comparisons need no
// extra variance control.
FixedPathResult run_monte_carlo(const ScenarioConfig& sc, int n_trials,
                                std::uint64_t seed, bool genie,
                                PredictorKind predictor);

struct HeatmapCell {
  int x_bin = 0;
  int y_bin = 0;
  double mean_se = 0.0;
  long count = 0;
};

struct EnsembleResult {
  std::vector<HeatmapCell> cells;  // sorted by (x_bin, y_bin)
  long total_samples = 0;          // trials x epochs x users
};

// Same trial seeding, but every trial follows random branches of the road
// network and the samples of all users are pooled into a spatial map of the
// achieved spectral efficiency. Bins: floor((x + d_max) / bin), floor(y / bin).
EnsembleResult run_ensemble(const ScenarioConfig& sc, int n_trials,
                            std::uint64_t seed, bool genie,
                            PredictorKind predictor);

struct SweepRow {
  int n_rx = 0;
  int n_rf = 0;
  double mean_gain_db = 0.0;    // 10 log10(mean |g_tx|^2) after repointing
  double upper_bound_db = 0.0;  // 10 log10(n_tx), perfect alignment
};

struct SweepResult {
  std::vector<SweepRow> rows;
  // Per row, the per-trial linear |g_tx|^2; trial t of every row shares the
  // draw stream (seed, t), so rows differ only through the front end.
  std::vector<std::vector<double>> gains;
};

// Static single-shot study of the receive front end: one user at a fixed
// range and a random angle, one frame, one beamspace angle estimate, then the
// transmit gain obtained by repointing at that estimate. Swept over the
// (n_rx, n_rf) grid of the scenario, with n_rf = n_rx appended per n_rx as
// the all-digital reference.
SweepResult sweep_rf_chains(const ScenarioConfig& sc, int n_trials,
                            std::uint64_t seed);

// CSV serializers. Schemas:
//   epoch,mean_se,ci_low,ci_high
//   x_bin,y_bin,mean_se,count
//   n_rx,n_rf,mean_gain_db,upper_bound_db
void write_se_vs_epoch_csv(const std::vector<EpochSeStats>& stats,
                           std::ostream& out);
void write_heatmap_csv(const EnsembleResult& r, std::ostream& out);
void write_gain_csv(const std::vector<SweepRow>& rows, std::ostream& out);

}  // namespace beamtrack
