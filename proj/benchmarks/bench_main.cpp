#include <benchmark/benchmark.h>

#include "beamtrack/array_response.hpp"
#include "beamtrack/channel.hpp"
#include "beamtrack/estimator.hpp"
#include "beamtrack/resource_grid.hpp"
#include "beamtrack/rng.hpp"
#include "beamtrack/slepian.hpp"

namespace {

using namespace beamtrack;

OfdmConfig bench_ofdm() {
  OfdmConfig c;
  c.n_symbols = 64;
  c.n_subcarriers = 512;
  return c;
}

ArrayConfig bench_array() { return ArrayConfig{}; }

struct BenchScene {
  OfdmConfig ofdm = bench_ofdm();
  ArrayConfig arr = bench_array();
  SlepianBank bank;
  ReductionMatrix red;
  SymbolGrid symbols;
  ChannelSnapshot snap;
  ResourceGrid grid;

  BenchScene() {
    bank = slepian_bank(arr.n_rx, arr.n_rf_rx,
                        default_half_bandwidth(arr.n_rx, arr.n_rf_rx));
    const double phi = 0.2;
    red = make_reduction(bank, phi + 0.01);
    Rng rng(42);
    symbols = random_qpsk(ofdm.n_symbols, ofdm.n_subcarriers, rng);
    UserKinematicState s;
    s.x = 50.0 * std::sin(phi);
    s.y = 50.0 * std::cos(phi);
    s.vx = -8.0;
    s.vy = -11.0;
    snap = channel_from_state(s, ofdm.carrier_frequency_hz, 100.0, rng);
    grid = synthesize_grid({{snap, red.phi_hat, &symbols}}, red.u, ofdm, arr,
                           0.05, 2e-21, rng);
  }
};

BenchScene& scene() {
  static BenchScene s;
  return s;
}

void BM_SlepianBank(benchmark::State& state) {
  const int n_rx = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        slepian_bank(n_rx, 4, default_half_bandwidth(n_rx, 4)));
  }
}
BENCHMARK(BM_SlepianBank)->Arg(64)->Arg(128);

void BM_TxGain(benchmark::State& state) {
  double phi = 0.3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(tx_gain(phi, 0.31, 64, 4));
    phi += 1e-9;
  }
}
BENCHMARK(BM_TxGain);

void BM_Synthesize(benchmark::State& state) {
  BenchScene& s = scene();
  Rng rng(7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(synthesize_grid({{s.snap, s.red.phi_hat,
                                               &s.symbols}},
                                             s.red.u, s.ofdm, s.arr, 0.05,
                                             2e-21, rng));
  }
}
BENCHMARK(BM_Synthesize);

void BM_Covariance(benchmark::State& state) {
  BenchScene& s = scene();
  for (auto _ : state) {
    benchmark::DoNotOptimize(sample_covariance(s.grid));
  }
}
BENCHMARK(BM_Covariance);

void BM_MusicScan(benchmark::State& state) {
  BenchScene& s = scene();
  const Eigen::MatrixXcd cov = sample_covariance(s.grid);
  MusicParams p;
  for (auto _ : state) {
    benchmark::DoNotOptimize(music_angle(cov, s.red, p));
  }
}
BENCHMARK(BM_MusicScan);

void BM_Nls(benchmark::State& state) {
  BenchScene& s = scene();
  NlsParams p;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        delay_doppler_nls(s.grid, s.red, s.red.phi_hat, s.symbols, s.ofdm, p));
  }
}
BENCHMARK(BM_Nls);

}  // namespace

BENCHMARK_MAIN();
