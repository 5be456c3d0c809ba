#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace beamtrack {

// splitmix64 step. Used to derive per-stream seeds from a master seed so any
// subset of Monte-Carlo trials can be rerun in isolation and reproduce its
// rows exactly: stream i of seed s is seeded with split_seed(s, i).
inline std::uint64_t split_seed(std::uint64_t master, std::uint64_t stream) {
  std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Deterministic random source. The engine is the standard-specified
// mt19937_64; the uniform and normal transforms are implemented here instead
// of using std distributions, whose output is implementation-defined. This
// keeps serialized simulation output stable across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t integer() { return engine_(); }

  // Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Standard normal via Box-Muller; the second variate of each pair is cached.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    // u in (0, 1] so the log is finite.
    double u = 1.0 - uniform();
    double v = uniform();
    double r = std::sqrt(-2.0 * std::log(u));
    double a = 2.0 * 3.14159265358979323846 * v;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  // Circularly symmetric complex Gaussian with E|z|^2 = variance.
  std::complex<double> complex_normal(double variance) {
    double s = std::sqrt(0.5 * variance);
    return {s * normal(), s * normal()};
  }

  // Unit-modulus phasor with phase uniform in [0, 2*pi).
  std::complex<double> random_phase() {
    double a = uniform(0.0, 2.0 * 3.14159265358979323846);
    return {std::cos(a), std::sin(a)};
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace beamtrack
