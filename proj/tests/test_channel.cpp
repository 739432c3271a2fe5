#include <catch_amalgamated.hpp>

#include <cmath>
#include <memory>

#include "thzdoa/channel.hpp"
#include "thzdoa/constants.hpp"
#include "thzdoa/error.hpp"

using namespace thzdoa;
using Catch::Approx;

namespace {

std::shared_ptr<const AbsorptionProfile> constant_medium(double k) {
  return std::make_shared<const AbsorptionProfile>(synthetic_profile(synthetic::Constant{k}));
}

ChannelParams params(double d, std::shared_ptr<const AbsorptionProfile> medium,
                     BackgroundNoiseForm form = BackgroundNoiseForm::saturated) {
  ChannelParams p;
  p.distance_m = d;
  p.antenna_center_hz = 6e12;
  p.temperature_k = 296.0;
  p.medium = std::move(medium);
  p.background = form;
  return p;
}

double wrap(double phase) { return std::remainder(phase, kTwoPi); }

}  // namespace

TEST_CASE("channel response closed form") {
  const auto p = params(0.75, constant_medium(0.4));
  for (double f : {1e12, 3.3e12, 9.9e12}) {
    const auto h = channel_response(f, p);
    const double magnitude = kSpeedOfLight / (4.0 * kPi * 0.75 * 6e12) * std::exp(-0.5 * 0.4 * 0.75);
    CHECK(std::abs(h) == Approx(magnitude).epsilon(1e-13));
    CHECK(wrap(std::arg(h) + kTwoPi * f * 0.75 / kSpeedOfLight) == Approx(0.0).margin(1e-6));
    CHECK(absorption_loss(f, p) == Approx(std::exp(-0.2 * 0.75)).epsilon(1e-15));
    CHECK(std::abs(h - spreading_loss(f, p) * absorption_loss(f, p)) < 1e-15 * std::abs(h));
  }
}

TEST_CASE("vacuum channel has no absorption noise") {
  const auto p = params(2.0, constant_medium(0.0));
  CHECK(absorption_loss(4e12, p) == 1.0);
  CHECK(background_noise_psd(4e12, p) == 0.0);
  CHECK(self_noise_psd(4e12, p, 1.0) == 0.0);
  CHECK(total_noise_psd(4e12, p, 1.0) == 0.0);
  const auto grid = build_grid(1e12, 9e12, 10e-12);
  CHECK(bin_noise_variance(grid, 40, p, pulse_spec(1, 6e12, 1e-18)) == 0.0);
}

TEST_CASE("background noise forms") {
  const double g = kSpeedOfLight / (std::sqrt(4.0 * kPi) * 6e12);
  const double full = kBoltzmann * 296.0 * g * g;
  SECTION("saturated") {
    const auto p = params(0.01, constant_medium(1e-6));
    CHECK(background_noise_psd(2e12, p) == Approx(full).epsilon(1e-14));
    CHECK(background_noise_psd(2e12, params(100.0, constant_medium(1e-6))) == background_noise_psd(2e12, p));
  }
  SECTION("finite distance") {
    const auto p = params(0.5, constant_medium(2.0), BackgroundNoiseForm::finite_distance);
    CHECK(background_noise_psd(2e12, p) == Approx(full * (1.0 - std::exp(-1.0))).epsilon(1e-14));
  }
  SECTION("depends on f only through k(f)") {
    const auto p = params(1.0, constant_medium(0.3));
    CHECK(background_noise_psd(1e12, p) == background_noise_psd(9e12, p));
  }
}

TEST_CASE("self-induced noise and the total") {
  const auto p = params(0.3, constant_medium(0.8));
  const double g = kSpeedOfLight / (4.0 * kPi * 0.3 * 6e12);
  const double sp = 3.7e-20;
  CHECK(self_noise_psd(5e12, p, sp) == Approx(sp * (1.0 - std::exp(-0.24)) * g * g).epsilon(1e-13));
  CHECK(self_noise_psd(5e12, p, 0.0) == 0.0);
  CHECK(total_noise_psd(5e12, p, 0.0) == background_noise_psd(5e12, p));
  CHECK(total_noise_psd(5e12, p, sp) ==
        Approx(background_noise_psd(5e12, p) + self_noise_psd(5e12, p, sp)).epsilon(1e-15));
}

TEST_CASE("bin noise variance") {
  const auto grid = build_grid(1e12, 9e12, 10e-12);
  const auto spec = pulse_spec(1, 6e12, 1e-18);

  SECTION("flat background integrates to psd times bin width") {
    const auto p = params(1.0, constant_medium(0.5));
    const auto tiny = pulse_spec(1, 6e12, 1e-40);
    for (std::size_t l : {0u, 45u, 90u}) {
      CHECK(bin_noise_variance(grid, l, p, tiny) ==
            Approx(background_noise_psd(grid[l], p) * grid.bin_width_hz()).epsilon(1e-9));
    }
  }
  SECTION("adaptive quadrature agrees with a fine Riemann sum on a line-rich profile") {
    auto medium = std::make_shared<const AbsorptionProfile>(summer_air_profile());
    for (auto form : {BackgroundNoiseForm::saturated, BackgroundNoiseForm::finite_distance}) {
      const auto p = params(2.0, medium, form);
      for (std::size_t l : {3u, 17u, 52u, 88u}) {
        const double gk = bin_noise_variance(grid, l, p, spec);
        const double riemann = bin_noise_variance_riemann(grid, l, p, spec, 200000);
        CAPTURE(l);
        CHECK(gk == Approx(riemann).epsilon(1e-7));
      }
    }
  }
  SECTION("total is at least the background contribution") {
    auto medium = std::make_shared<const AbsorptionProfile>(summer_air_profile());
    const auto tiny = pulse_spec(1, 6e12, 1e-40);
    for (double d : {0.01, 0.5, 6.0}) {
      const auto p = params(d, medium);
      for (std::size_t l = 0; l < grid.size(); l += 10) {
        CHECK(bin_noise_variance(grid, l, p, spec) >= bin_noise_variance(grid, l, p, tiny) * (1 - 1e-12));
      }
    }
  }
  SECTION("self-noise-free variance never decreases with distance") {
    auto medium = std::make_shared<const AbsorptionProfile>(summer_air_profile());
    const auto tiny = pulse_spec(1, 6e12, 1e-40);
    for (auto form : {BackgroundNoiseForm::saturated, BackgroundNoiseForm::finite_distance}) {
      double previous = 0.0;
      for (double d : {0.01, 0.1, 1.0, 3.0, 6.0}) {
        const double v = bin_noise_variance(grid, 50, params(d, medium, form), tiny);
        CHECK(v >= previous * (1 - 1e-12));
        previous = v;
      }
    }
  }
  SECTION("sub-band outside the profile is rejected") {
    auto narrow = std::make_shared<const AbsorptionProfile>(
        synthetic_profile(synthetic::Constant{1.0}, SamplingRange{2e12, 3e12, 1e9}));
    CHECK_THROWS(bin_noise_variance(grid, 0, params(1.0, narrow), spec));
  }
  SECTION("Riemann rejects zero panels") {
    CHECK_THROWS_AS(bin_noise_variance_riemann(grid, 0, params(1.0, constant_medium(1.0)), spec, 0), DomainError);
  }
}

TEST_CASE("channel parameter validation") {
  CHECK_THROWS_AS(params(0.0, constant_medium(1.0)).validate(), DomainError);
  CHECK_THROWS_AS(params(1.0, nullptr).validate(), DomainError);
  auto p = params(1.0, constant_medium(1.0));
  p.temperature_k = -1.0;
  CHECK_THROWS_AS(p.validate(), DomainError);
  p = params(1.0, constant_medium(1.0));
  p.antenna_center_hz = 0.0;
  CHECK_THROWS_AS(p.validate(), DomainError);
}
