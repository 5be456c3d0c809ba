#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "beamtrack/estimator.hpp"
#include "beamtrack/ofdm.hpp"
#include "beamtrack/road.hpp"
#include "beamtrack/tracking.hpp"

namespace beamtrack {

struct TrackingConfig {
  int n_epochs = 44;
  double initial_angle_error_beamwidths = 0.5;
  double music_window_beamwidths = 4.0;
};

// Settings for the front-end size study: a static user at a fixed range,
// one frame per trial, transmit gain measured against the full-array bound.
struct SweepConfig {
  std::vector<int> n_rx_list{64, 128};
  std::vector<int> n_rf_list{2, 4, 8, 16, 32};  // each n_rx is appended too
  int trials = 200;
  double distance_m = 40.0;
  int n_symbols = 16;
  int n_subcarriers = 64;
  double angle_max_sin = 0.6;
  // Pointing uncertainty of the single shot, in transmit beamwidths. Large
  // enough that a front end with few chains (a narrow concentrated band)
  // regularly has the user outside its field of view.
  double initial_error_beamwidths = 2.0;
};

struct ScenarioConfig {
  OfdmConfig ofdm;
  ArrayConfig array;
  double tx_power_w = 0.05;
  double noise_psd_w_per_hz = 2e-21;
  double rcs_m2 = 100.0;
  double epoch_period_s = 0.1;
  double d_max_m = 100.0;

  std::string road_network_path;  // resolved against the scenario file
  RoadNetwork road;
  int start_node = 0;
  std::vector<int> fixed_path;  // empty: random branch walk
  int n_users = 1;
  SpeedProcess speed;

  EstimatorParams estimator;
  double slepian_half_bandwidth = 0.0;  // 0: n_rf / (2 n_rx)
  TrackingConfig tracking;
  SweepConfig sweep;

  int trials = 500;
  std::uint64_t seed = 20240603;
  double heatmap_bin_m = 2.0;

  std::string scenario_path;  // where this config was loaded from

  double slepian_w() const;
  TrackerOptions tracker_options() const;

  // Hard constraints: sub-config validity, slot budget K N T0 <= epoch
  // period, road coverage within d_max. Throws std::invalid_argument.
  void validate() const;

  // Non-fatal model-limit notes (delay beyond the cyclic prefix, Doppler at
  // v_max close to the subcarrier spacing, ...) for the caller to print.
  std::vector<std::string> warnings() const;
};

// Parses a scenario JSON file. Every field is optional and defaults to the
// values above; unknown keys are rejected to catch typos. Loads and validates
// the referenced road network.
ScenarioConfig load_scenario(const std::string& path);

// FNV-1a over the raw file bytes, for run manifests.
std::uint64_t fnv1a64_file(const std::string& path);

}  // namespace beamtrack
