#include "beamtrack/scenario.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "beamtrack/constants.hpp"
#include "beamtrack/slepian.hpp"

namespace beamtrack {

namespace {

using nlohmann::json;

void check_keys(const json& j, std::initializer_list<const char*> allowed,
                const std::string& where) {
  if (!j.is_object())
    throw std::invalid_argument("scenario: " + where + " must be an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* k : allowed)
      if (it.key() == k) {
        known = true;
        break;
      }
    if (!known)
      throw std::invalid_argument("scenario: unknown key \"" + it.key() +
                                  "\" in " + where);
  }
}

template <typename T>
void read_if(const json& j, const char* key, T& out) {
  if (j.contains(key)) j.at(key).get_to(out);
}

void parse_ofdm(const json& j, OfdmConfig& c) {
  check_keys(j,
             {"n_symbols", "n_subcarriers", "subcarrier_spacing_hz",
              "cyclic_prefix_s", "carrier_frequency_hz"},
             "ofdm");
  read_if(j, "n_symbols", c.n_symbols);
  read_if(j, "n_subcarriers", c.n_subcarriers);
  read_if(j, "subcarrier_spacing_hz", c.subcarrier_spacing_hz);
  read_if(j, "cyclic_prefix_s", c.cyclic_prefix_s);
  read_if(j, "carrier_frequency_hz", c.carrier_frequency_hz);
}

void parse_array(const json& j, ArrayConfig& c) {
  check_keys(j, {"n_tx", "n_rx", "n_rf_tx", "n_rf_rx"}, "array");
  read_if(j, "n_tx", c.n_tx);
  read_if(j, "n_rx", c.n_rx);
  read_if(j, "n_rf_tx", c.n_rf_tx);
  read_if(j, "n_rf_rx", c.n_rf_rx);
}

void parse_speed(const json& j, SpeedProcess& s) {
  check_keys(j, {"initial_mps", "sigma_mps", "v_max_mps"}, "speed");
  read_if(j, "initial_mps", s.initial_mps);
  read_if(j, "sigma_mps", s.sigma_mps);
  read_if(j, "v_max_mps", s.v_max_mps);
}

void parse_estimator(const json& j, ScenarioConfig& c) {
  check_keys(j,
             {"music_grid_points", "zero_pad_factor", "low_confidence_ratio",
              "slepian_half_bandwidth"},
             "estimator");
  read_if(j, "music_grid_points", c.estimator.music.grid_points);
  read_if(j, "zero_pad_factor", c.estimator.nls.zero_pad_factor);
  read_if(j, "low_confidence_ratio", c.estimator.nls.low_confidence_ratio);
  read_if(j, "slepian_half_bandwidth", c.slepian_half_bandwidth);
}

void parse_tracking(const json& j, TrackingConfig& c) {
  check_keys(j,
             {"n_epochs", "initial_angle_error_beamwidths",
              "music_window_beamwidths"},
             "tracking");
  read_if(j, "n_epochs", c.n_epochs);
  read_if(j, "initial_angle_error_beamwidths",
          c.initial_angle_error_beamwidths);
  read_if(j, "music_window_beamwidths", c.music_window_beamwidths);
}

void parse_sweep(const json& j, SweepConfig& c) {
  check_keys(j,
             {"n_rx", "n_rf", "trials", "distance_m", "n_symbols",
              "n_subcarriers", "angle_max_sin", "initial_error_beamwidths"},
             "sweep");
  read_if(j, "n_rx", c.n_rx_list);
  read_if(j, "n_rf", c.n_rf_list);
  read_if(j, "trials", c.trials);
  read_if(j, "distance_m", c.distance_m);
  read_if(j, "n_symbols", c.n_symbols);
  read_if(j, "n_subcarriers", c.n_subcarriers);
  read_if(j, "angle_max_sin", c.angle_max_sin);
  read_if(j, "initial_error_beamwidths", c.initial_error_beamwidths);
}

}  // namespace

double ScenarioConfig::slepian_w() const {
  return slepian_half_bandwidth > 0.0
             ? slepian_half_bandwidth
             : default_half_bandwidth(array.n_rx, array.n_rf_rx);
}

TrackerOptions ScenarioConfig::tracker_options() const {
  TrackerOptions opt;
  opt.epoch_period_s = epoch_period_s;
  opt.tx_power_w = tx_power_w;
  opt.noise_psd_w_per_hz = noise_psd_w_per_hz;
  opt.rcs_m2 = rcs_m2;
  opt.initial_angle_error_beamwidths = tracking.initial_angle_error_beamwidths;
  opt.music_window_beamwidths = tracking.music_window_beamwidths;
  opt.estimator = estimator;
  return opt;
}

void ScenarioConfig::validate() const {
  ofdm.validate();
  array.validate();
  if (tx_power_w <= 0.0) throw std::invalid_argument("scenario: tx_power_w");
  if (noise_psd_w_per_hz <= 0.0)
    throw std::invalid_argument("scenario: noise_psd_w_per_hz");
  if (rcs_m2 <= 0.0) throw std::invalid_argument("scenario: rcs_m2");
  if (epoch_period_s <= 0.0)
    throw std::invalid_argument("scenario: epoch_period_s");
  if (d_max_m <= 0.0) throw std::invalid_argument("scenario: d_max_m");
  if (n_users < 1 || n_users > array.n_rf_tx)
    throw std::invalid_argument(
        "scenario: n_users must be in [1, n_rf_tx], one beam per user");
  if (n_users * ofdm.frame_duration_s() > epoch_period_s * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "scenario: slot budget " << n_users << " x "
        << ofdm.frame_duration_s() << " s exceeds the epoch period "
        << epoch_period_s << " s";
    throw std::invalid_argument(msg.str());
  }
  if (tracking.n_epochs < 1)
    throw std::invalid_argument("scenario: tracking.n_epochs");
  if (trials < 1) throw std::invalid_argument("scenario: trials");
  if (heatmap_bin_m <= 0.0)
    throw std::invalid_argument("scenario: heatmap_bin_m");
  if (speed.v_max_mps <= 0.0 || speed.sigma_mps < 0.0 ||
      speed.initial_mps < 0.0 || speed.initial_mps > speed.v_max_mps)
    throw std::invalid_argument("scenario: speed process");
  const double w = slepian_w();
  if (!(w > 0.0) || w > 0.5)
    throw std::invalid_argument("scenario: slepian_half_bandwidth");
  if (sweep.trials < 1 || sweep.distance_m <= 0.0 || sweep.n_symbols < 1 ||
      sweep.n_subcarriers < 2 || sweep.angle_max_sin <= 0.0 ||
      sweep.angle_max_sin >= 1.0 || sweep.initial_error_beamwidths <= 0.0)
    throw std::invalid_argument("scenario: sweep");
  for (int n : sweep.n_rx_list)
    if (n < 2) throw std::invalid_argument("scenario: sweep.n_rx");
  for (int n : sweep.n_rf_list)
    if (n < 2) throw std::invalid_argument("scenario: sweep.n_rf");
  road.validate(d_max_m);
  if (start_node < 0 || start_node >= static_cast<int>(road.nodes.size()))
    throw std::invalid_argument("scenario: start_node out of range");
  if (!fixed_path.empty() && fixed_path.front() != start_node)
    throw std::invalid_argument(
        "scenario: fixed_path must begin at start_node");
}

std::vector<std::string> ScenarioConfig::warnings() const {
  std::vector<std::string> out;
  const double tau_max = 2.0 * d_max_m / kSpeedOfLight;
  if (tau_max > ofdm.cyclic_prefix_s) {
    std::ostringstream msg;
    msg << "round-trip delay at d_max (" << tau_max * 1e6
        << " us) exceeds the cyclic prefix (" << ofdm.cyclic_prefix_s * 1e6
        << " us); echoes from the cell edge leak across symbols";
    out.push_back(msg.str());
  }
  if (tau_max >= ofdm.max_unambiguous_delay_s()) {
    std::ostringstream msg;
    msg << "round-trip delay at d_max exceeds the unambiguous window 1/"
           "subcarrier_spacing; range estimates wrap";
    out.push_back(msg.str());
  }
  const double nu_max = 2.0 * speed.v_max_mps * ofdm.carrier_frequency_hz /
                        kSpeedOfLight;
  if (!ofdm.narrowband_ok(nu_max)) {
    std::ostringstream msg;
    msg << "Doppler at v_max (" << nu_max
        << " Hz) is not small against the subcarrier spacing; the "
           "per-element phase model degrades";
    out.push_back(msg.str());
  }
  if (nu_max >= ofdm.max_unambiguous_doppler_hz()) {
    std::ostringstream msg;
    msg << "Doppler at v_max exceeds the unambiguous window 1/(2 T0); "
           "velocity estimates wrap";
    out.push_back(msg.str());
  }
  return out;
}

ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open scenario file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw std::runtime_error("scenario parse error in " + path + ": " +
                             e.what());
  }
  check_keys(j,
             {"ofdm", "array", "tx_power_w", "noise_psd_w_per_hz", "rcs_m2",
              "epoch_period_s", "d_max_m", "road_network", "start_node",
              "fixed_path", "n_users", "speed", "estimator", "tracking",
              "sweep", "trials", "seed", "heatmap_bin_m"},
             "scenario");

  ScenarioConfig c;
  c.scenario_path = path;
  if (j.contains("ofdm")) parse_ofdm(j.at("ofdm"), c.ofdm);
  if (j.contains("array")) parse_array(j.at("array"), c.array);
  read_if(j, "tx_power_w", c.tx_power_w);
  read_if(j, "noise_psd_w_per_hz", c.noise_psd_w_per_hz);
  read_if(j, "rcs_m2", c.rcs_m2);
  read_if(j, "epoch_period_s", c.epoch_period_s);
  read_if(j, "d_max_m", c.d_max_m);
  read_if(j, "start_node", c.start_node);
  read_if(j, "fixed_path", c.fixed_path);
  read_if(j, "n_users", c.n_users);
  if (j.contains("speed")) parse_speed(j.at("speed"), c.speed);
  if (j.contains("estimator")) parse_estimator(j.at("estimator"), c);
  if (j.contains("tracking")) parse_tracking(j.at("tracking"), c.tracking);
  if (j.contains("sweep")) parse_sweep(j.at("sweep"), c.sweep);
  read_if(j, "trials", c.trials);
  read_if(j, "seed", c.seed);
  read_if(j, "heatmap_bin_m", c.heatmap_bin_m);

  std::string road_rel = "roads/main_branch.json";
  read_if(j, "road_network", road_rel);
  std::filesystem::path rp(road_rel);
  if (rp.is_relative())
    rp = std::filesystem::path(path).parent_path() / rp;
  c.road_network_path = rp.string();
  c.road = load_road_network(c.road_network_path);

  c.validate();
  return c;
}

std::uint64_t fnv1a64_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file for hashing: " + path);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  char buf[4096];
  while (in.read(buf, sizeof buf) || in.gcount() > 0) {
    const std::streamsize n = in.gcount();
    for (std::streamsize i = 0; i < n; ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 0x100000001b3ULL;
    }
    if (!in) break;
  }
  return h;
}

}  // namespace beamtrack
