#include <doctest.h>

#include <cmath>
#include <complex>

#include "beamtrack/channel.hpp"
#include "beamtrack/constants.hpp"
#include "beamtrack/kinematics.hpp"
#include "beamtrack/metrics.hpp"
#include "beamtrack/ofdm.hpp"
#include "beamtrack/rng.hpp"
#include "beamtrack/tracking.hpp"

using namespace beamtrack;

namespace {

const double kFc = 60e9;
const double kLambda = kSpeedOfLight / kFc;

}  // namespace

TEST_CASE("two-way power at the reference geometry") {
  // d = 100 m, rcs = 100 m^2, 60 GHz
  const double p = two_way_power(100.0, 100.0, kLambda);
  const double want = kLambda * kLambda * 100.0 /
                      (std::pow(4.0 * kPi, 3.0) * 1e8);
  CHECK(p == doctest::Approx(want).epsilon(1e-12));
  CHECK(p == doctest::Approx(1.258e-14).epsilon(1e-3));
}

TEST_CASE("two-way power follows the fourth-power distance law") {
  // log-log slope is exactly -4
  const double p1 = two_way_power(13.0, 100.0, kLambda);
  const double p2 = two_way_power(91.0, 100.0, kLambda);
  const double slope = std::log(p2 / p1) / std::log(91.0 / 13.0);
  CHECK(slope == doctest::Approx(-4.0).epsilon(1e-12));
  // and is linear in rcs
  CHECK(two_way_power(40.0, 250.0, kLambda) ==
        doctest::Approx(2.5 * two_way_power(40.0, 100.0, kLambda))
            .epsilon(1e-12));
}

TEST_CASE("round-trip delay") {
  UserKinematicState s{0.0, 75.0, 0.0, 0.0, 0.0, 0.0};
  const ChannelSnapshot c = channel_geometry(s, kFc);
  CHECK(c.delay_s == doctest::Approx(150.0 / kSpeedOfLight).epsilon(1e-15));
  CHECK(c.distance_m == doctest::Approx(75.0).epsilon(1e-15));
}

TEST_CASE("approaching user has positive Doppler") {
  // radial approach at 30 m/s: nu = 2 v fc / c, about 12 kHz at 60 GHz
  UserKinematicState s{0.0, 30.0, 0.0, -30.0, 0.0, 0.0};
  const ChannelSnapshot c = channel_geometry(s, kFc);
  CHECK(c.doppler_hz == doctest::Approx(2.0 * 30.0 * kFc / kSpeedOfLight)
                            .epsilon(1e-12));
  CHECK(c.doppler_hz > 0.0);
  CHECK(c.doppler_hz == doctest::Approx(12e3).epsilon(2e-3));
}

TEST_CASE("receding and transverse motion") {
  UserKinematicState away{0.0, 30.0, 0.0, 20.0, 0.0, 0.0};
  CHECK(channel_geometry(away, kFc).doppler_hz ==
        doctest::Approx(-2.0 * 20.0 * kFc / kSpeedOfLight).epsilon(1e-12));

  UserKinematicState across{0.0, 30.0, 5.0, 0.0, 0.0, 0.0};
  CHECK(channel_geometry(across, kFc).doppler_hz == 0.0);

  UserKinematicState still{10.0, 30.0, 0.0, 0.0, 0.0, 0.0};
  CHECK(channel_geometry(still, kFc).doppler_hz == 0.0);
}

TEST_CASE("Doppler sign is consistent with the delay derivative") {
  // The resource-grid phase model advances as e^{j 2 pi n T0 nu}; the carrier
  // phase of the echo is -2 pi fc tau(t). Both describe the same physics, so
  // nu must equal -fc dtau/dt. Pin it by finite difference over one symbol.
  OfdmConfig ofdm;
  const double t0 = ofdm.symbol_duration_s();
  UserKinematicState s{14.0, 48.0, -9.0, -17.0, 0.0, 0.0};
  const ChannelSnapshot now = channel_geometry(s, kFc);
  const ChannelSnapshot later = channel_geometry(propagate(s, t0), kFc);
  const double nu_from_delay = -kFc * (later.delay_s - now.delay_s) / t0;
  CHECK(now.doppler_hz == doctest::Approx(nu_from_delay).epsilon(1e-5));
}

TEST_CASE("angle convention: boresight is +y, positive toward +x") {
  UserKinematicState right{30.0, 30.0, 0.0, 0.0, 0.0, 0.0};
  CHECK(channel_geometry(right, kFc).angle_rad ==
        doctest::Approx(kPi / 4.0).epsilon(1e-12));
  UserKinematicState left{-10.0, 10.0 * std::sqrt(3.0), 0.0, 0.0, 0.0, 0.0};
  CHECK(channel_geometry(left, kFc).angle_rad ==
        doctest::Approx(-kPi / 6.0).epsilon(1e-12));
}

TEST_CASE("polar round trip") {
  UserKinematicState s{-23.0, 41.0, 0.0, 0.0, 0.0, 0.0};
  const ChannelSnapshot c = channel_geometry(s, kFc);
  const PlanarPoint p = position_from_polar(c.distance_m, c.angle_rad);
  CHECK(p.x == doctest::Approx(s.x).epsilon(1e-12));
  CHECK(p.y == doctest::Approx(s.y).epsilon(1e-12));
}

TEST_CASE("full snapshot draws only the phase at random") {
  Rng rng(5);
  UserKinematicState s{20.0, 60.0, 3.0, -8.0, 0.0, 0.0};
  const ChannelSnapshot c = channel_from_state(s, kFc, 100.0, rng);
  CHECK(std::abs(c.h) ==
        doctest::Approx(std::sqrt(two_way_power(c.distance_m, 100.0, kLambda)))
            .epsilon(1e-12));
  // reproducible given the stream
  Rng rng2(5);
  const ChannelSnapshot c2 = channel_from_state(s, kFc, 100.0, rng2);
  CHECK(c.h == c2.h);
}

TEST_CASE("channel rejects degenerate input") {
  Rng rng(1);
  UserKinematicState at_origin{0.0, 0.0, 0.0, 0.0, 0.0, 0.0};
  CHECK_THROWS_AS(channel_geometry(at_origin, kFc), std::domain_error);
  UserKinematicState s{0.0, 10.0, 0.0, 0.0, 0.0, 0.0};
  CHECK_THROWS_AS(channel_from_state(s, kFc, 0.0, rng), std::invalid_argument);
  CHECK_THROWS_AS(channel_from_state(s, kFc, -1.0, rng),
                  std::invalid_argument);
}

TEST_CASE("downlink and sensing budgets differ by the documented ratio") {
  // the downlink uses the one-way (lambda/4 pi d)^2 law, sensing the radar
  // equation; at equal distance two_way / one_way = rcs / (4 pi d^2)
  for (double d : {25.0, 50.0, 100.0}) {
    const double one_way = one_way_power_gain(d, kLambda);
    const double two_way = two_way_power(d, 100.0, kLambda);
    CHECK(two_way / one_way ==
          doctest::Approx(100.0 / (4.0 * kPi * d * d)).epsilon(1e-12));
  }
}

TEST_CASE("spectral efficiency at the reference point") {
  OfdmConfig ofdm;  // Table defaults: M = 512, delta_f = 1 MHz, 60 GHz
  // perfect pointing, K = 1, d = 50 m: snr = (lambda/(4 pi 50))^2 * 0.05 * 64
  // / (2e-21 * 5.12e8)
  const double snr = one_way_power_gain(50.0, ofdm.wavelength_m()) * 0.05 *
                     64.0 / (2e-21 * 512.0 * 1e6);
  const double se = spectral_efficiency(50.0, 64.0, 0.05, 2e-21, ofdm);
  CHECK(se == doctest::Approx(std::log2(1.0 + snr)).epsilon(1e-12));
  CHECK(snr == doctest::Approx(197.66).epsilon(1e-3));
  CHECK(se == doctest::Approx(7.634).epsilon(1e-3));
}

TEST_CASE("spectral efficiency limits") {
  OfdmConfig ofdm;
  CHECK(spectral_efficiency(50.0, 0.0, 0.05, 2e-21, ofdm) == 0.0);
  // doubling distance at fixed gain costs exactly 6.02 dB of SNR
  const double g1 = one_way_power_gain(30.0, ofdm.wavelength_m());
  const double g2 = one_way_power_gain(60.0, ofdm.wavelength_m());
  CHECK(10.0 * std::log10(g1 / g2) == doctest::Approx(6.0206).epsilon(1e-4));
  CHECK_THROWS_AS(spectral_efficiency(0.0, 1.0, 0.05, 2e-21, ofdm),
                  std::domain_error);
  CHECK_THROWS_AS(spectral_efficiency(10.0, -1.0, 0.05, 2e-21, ofdm),
                  std::invalid_argument);
}
