// Command-line front end: Monte-Carlo runs over a scenario file, the RF-chain
// sweep and the matched-filter ambiguity table, each writing CSV plus a
// run_manifest.json that pins the inputs (file hashes, seed, options) of the
// run. Output is deterministic for a given scenario/seed/option set.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "beamtrack/ambiguity.hpp"
#include "beamtrack/scenario.hpp"
#include "beamtrack/simulation.hpp"
#include "beamtrack/tracking.hpp"

namespace {

using beamtrack::ScenarioConfig;
using nlohmann::json;

struct CommonArgs {
  std::string scenario_path;
  std::string out_dir = "out";
  int trials = 0;  // 0: use the scenario value
  std::uint64_t seed = 0;
  bool seed_given = false;
  bool genie = false;
  std::string predictor = "kinematic";
};

void add_common(CLI::App* cmd, CommonArgs& a, bool with_tracking_opts) {
  cmd->add_option("--scenario", a.scenario_path, "Scenario JSON file")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--out", a.out_dir, "Output directory (created if missing)");
  cmd->add_option("--trials", a.trials, "Trial count (default: scenario)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--seed", a.seed, "Master seed (default: scenario)");
  if (with_tracking_opts) {
    cmd->add_flag("--genie", a.genie,
                  "Replace estimates with ground truth (upper bound)");
    cmd->add_option("--predictor", a.predictor,
                    "Beam predictor between epochs")
        ->check(CLI::IsMember({"kinematic", "hold"}));
  }
}

std::string hex64(std::uint64_t v) {
  char buf[19];
  std::snprintf(buf, sizeof buf, "0x%016llx",
                static_cast<unsigned long long>(v));
  return buf;
}

ScenarioConfig load_and_report(CommonArgs& a) {
  ScenarioConfig sc = beamtrack::load_scenario(a.scenario_path);
  if (!a.seed_given) a.seed = sc.seed;
  for (const std::string& w : sc.warnings())
    std::cerr << "warning: " << w << "\n";
  std::filesystem::create_directories(a.out_dir);
  return sc;
}

void write_manifest(const CommonArgs& a, const ScenarioConfig& sc,
                    const std::string& command, int trials_used,
                    const std::vector<std::string>& outputs,
                    const json& extra = json::object()) {
  json m;
  m["command"] = command;
  m["version"] = "0.1.0";
  m["scenario"] = {{"path", a.scenario_path},
                   {"fnv1a64", hex64(beamtrack::fnv1a64_file(a.scenario_path))}};
  m["road_network"] = {
      {"path", sc.road_network_path},
      {"fnv1a64", hex64(beamtrack::fnv1a64_file(sc.road_network_path))}};
  m["seed"] = a.seed;
  m["trials"] = trials_used;
  m["outputs"] = outputs;
  for (auto it = extra.begin(); it != extra.end(); ++it) m[it.key()] = *it;
  std::ofstream out(std::filesystem::path(a.out_dir) / "run_manifest.json");
  out << m.dump(2) << "\n";
}

beamtrack::PredictorKind predictor_kind(const std::string& name) {
  return name == "hold" ? beamtrack::PredictorKind::hold
                        : beamtrack::PredictorKind::kinematic;
}

int cmd_simulate(CommonArgs& a, const std::string& audit_path) {
  const ScenarioConfig sc = load_and_report(a);
  const int trials = a.trials > 0 ? a.trials : sc.trials;
  const beamtrack::FixedPathResult r = beamtrack::run_monte_carlo(
      sc, trials, a.seed, a.genie, predictor_kind(a.predictor));

  const auto csv_path = std::filesystem::path(a.out_dir) / "se_vs_epoch.csv";
  std::ofstream csv(csv_path);
  beamtrack::write_se_vs_epoch_csv(r.stats, csv);
  std::vector<std::string> outputs{"se_vs_epoch.csv"};

  if (!audit_path.empty()) {
    std::ofstream audit(audit_path);
    if (!audit) {
      std::cerr << "error: cannot open audit file " << audit_path << "\n";
      return 1;
    }
    beamtrack::write_audit_csv(r.first_trial_records, audit);
  }

  write_manifest(a, sc, "simulate", trials, outputs,
                 {{"genie", a.genie}, {"predictor", a.predictor}});
  std::cout << "simulate: " << trials << " trials, "
            << sc.tracking.n_epochs << " epochs -> " << csv_path.string()
            << "\n";
  return 0;
}

int cmd_ensemble(CommonArgs& a) {
  const ScenarioConfig sc = load_and_report(a);
  const int trials = a.trials > 0 ? a.trials : sc.trials;
  const beamtrack::EnsembleResult r = beamtrack::run_ensemble(
      sc, trials, a.seed, a.genie, predictor_kind(a.predictor));

  const auto csv_path = std::filesystem::path(a.out_dir) / "se_heatmap.csv";
  std::ofstream csv(csv_path);
  beamtrack::write_heatmap_csv(r, csv);

  write_manifest(a, sc, "ensemble", trials, {"se_heatmap.csv"},
                 {{"genie", a.genie},
                  {"predictor", a.predictor},
                  {"heatmap_bin_m", sc.heatmap_bin_m},
                  {"total_samples", r.total_samples}});
  std::cout << "ensemble: " << trials << " trials, " << r.cells.size()
            << " occupied cells -> " << csv_path.string() << "\n";
  return 0;
}

int cmd_sweep_rf(CommonArgs& a) {
  const ScenarioConfig sc = load_and_report(a);
  const int trials = a.trials > 0 ? a.trials : sc.sweep.trials;
  const beamtrack::SweepResult r =
      beamtrack::sweep_rf_chains(sc, trials, a.seed);

  const auto csv_path = std::filesystem::path(a.out_dir) / "gain_vs_nrf.csv";
  std::ofstream csv(csv_path);
  beamtrack::write_gain_csv(r.rows, csv);

  write_manifest(a, sc, "sweep-rf", trials, {"gain_vs_nrf.csv"});
  std::cout << "sweep-rf: " << r.rows.size() << " configurations x " << trials
            << " trials -> " << csv_path.string() << "\n";
  return 0;
}

struct AmbiguityArgs {
  double dtau_max = -1.0;  // <0: half the pulse
  double dnu_max = -1.0;   // <0: 2 / pulse duration
  int points = 41;         // per axis, made odd
  std::string pulse = "symbol";
};

int cmd_ambiguity(CommonArgs& a, const AmbiguityArgs& amb) {
  const ScenarioConfig sc = load_and_report(a);
  beamtrack::RectPulse pulse;
  pulse.amplitude = 1.0;
  pulse.duration_s = amb.pulse == "frame" ? sc.ofdm.frame_duration_s()
                                          : sc.ofdm.symbol_duration_s();
  const double dtau_max =
      amb.dtau_max >= 0.0 ? amb.dtau_max : 0.5 * pulse.duration_s;
  const double dnu_max =
      amb.dnu_max >= 0.0 ? amb.dnu_max : 2.0 / pulse.duration_s;
  const int half_points = std::max(1, amb.points) / 2;

  const std::vector<beamtrack::MfLossPoint> grid =
      beamtrack::mf_loss_grid(pulse, dtau_max, dnu_max, half_points);
  const auto csv_path = std::filesystem::path(a.out_dir) / "ambiguity.csv";
  std::ofstream csv(csv_path);
  beamtrack::write_ambiguity_csv(grid, csv);

  write_manifest(a, sc, "ambiguity", 0, {"ambiguity.csv"},
                 {{"pulse", amb.pulse},
                  {"pulse_duration_s", pulse.duration_s},
                  {"dtau_max_s", dtau_max},
                  {"dnu_max_hz", dnu_max},
                  {"points_per_axis", 2 * half_points + 1}});
  std::cout << "ambiguity: " << grid.size() << " points -> "
            << csv_path.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"OFDM beam-tracking link simulator"};
  app.require_subcommand(1);

  CommonArgs sim_args, ens_args, sweep_args, amb_common;
  std::string audit_path;
  AmbiguityArgs amb_args;

  CLI::App* sim = app.add_subcommand(
      "simulate", "Track users along the scenario's fixed path; "
                  "per-epoch spectral efficiency with bootstrap intervals");
  add_common(sim, sim_args, true);
  sim->add_option("--audit", audit_path,
                  "Also write the per-epoch audit CSV of trial 0");

  CLI::App* ens = app.add_subcommand(
      "ensemble", "Random drives through the road network; "
                  "spatial map of the achieved spectral efficiency");
  add_common(ens, ens_args, true);

  CLI::App* swp = app.add_subcommand(
      "sweep-rf", "Static repointing study over the (n_rx, n_rf) grid");
  add_common(swp, sweep_args, false);

  CLI::App* amb = app.add_subcommand(
      "ambiguity", "Matched-filter delay/Doppler mismatch loss table");
  add_common(amb, amb_common, false);
  amb->add_option("--dtau-max", amb_args.dtau_max,
                  "Delay mismatch half-span in seconds (default: T/2)");
  amb->add_option("--dnu-max", amb_args.dnu_max,
                  "Doppler mismatch half-span in Hz (default: 2/T)");
  amb->add_option("--points", amb_args.points, "Grid points per axis");
  amb->add_option("--pulse", amb_args.pulse, "Matched-filter pulse span")
      ->check(CLI::IsMember({"symbol", "frame"}));

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed()) {
      sim_args.seed_given = sim->count("--seed") > 0;
      return cmd_simulate(sim_args, audit_path);
    }
    if (ens->parsed()) {
      ens_args.seed_given = ens->count("--seed") > 0;
      return cmd_ensemble(ens_args);
    }
    if (swp->parsed()) {
      sweep_args.seed_given = swp->count("--seed") > 0;
      return cmd_sweep_rf(sweep_args);
    }
    if (amb->parsed()) {
      amb_common.seed_given = amb->count("--seed") > 0;
      return cmd_ambiguity(amb_common, amb_args);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
