#include "thzdoa/array.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

#include "thzdoa/constants.hpp"
#include "thzdoa/error.hpp"

namespace thzdoa {

void UlaGeometry::validate() const {
  if (element_count < 2) throw DomainError("array needs at least 2 elements, got " + std::to_string(element_count));
  if (!(std::isfinite(spacing_m) && spacing_m > 0.0)) throw DomainError("element spacing must be positive");
}

double element_delay(std::size_t i, double theta_deg, const UlaGeometry& geom) {
  if (i >= static_cast<std::size_t>(geom.element_count)) {
    throw RangeError("element index " + std::to_string(i) + " outside array of " +
                     std::to_string(geom.element_count));
  }
  return static_cast<double>(i) * geom.spacing_m * std::sin(theta_deg * kDegToRad) / kSpeedOfLight;
}

Eigen::VectorXcd steering_vector(double f_hz, double theta_deg, const UlaGeometry& geom) {
  Eigen::VectorXcd a(geom.element_count);
  for (int i = 0; i < geom.element_count; ++i) {
    a[i] = std::polar(1.0, -kTwoPi * f_hz * element_delay(static_cast<std::size_t>(i), theta_deg, geom));
  }
  return a;
}

double far_field_min_distance(const UlaGeometry& geom, double lambda_min_m) {
  if (!(lambda_min_m > 0.0)) throw DomainError("minimum wavelength must be positive");
  const double d = geom.aperture_m();
  return 2.0 * d * d / lambda_min_m;
}

void validate_scenario(const SourceScenario& scenario, const UlaGeometry& geom, const FrequencyGrid& grid) {
  geom.validate();
  scenario.channel.validate();
  if (!(scenario.doa_deg > -90.0 && scenario.doa_deg < 90.0)) {
    throw DomainError("doa_deg must lie in (-90, 90), got " + std::to_string(scenario.doa_deg));
  }
  const double bound = far_field_min_distance(geom, kSpeedOfLight / grid.max_hz());
  if (!(scenario.distance_m() > bound)) {
    throw DomainError("distance_m " + std::to_string(scenario.distance_m()) +
                      " m is inside the far-field bound 2D^2/lambda_min = " + std::to_string(bound) + " m");
  }
}

SnapshotTensor::SnapshotTensor(std::size_t elements, std::size_t snapshots, FrequencyGrid grid)
    : elements_(elements), snapshots_(snapshots), grid_(std::move(grid)), data_(elements * snapshots * grid_.size()) {}

void SnapshotTensor::dump(std::ostream& out) const {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%zu %zu %zu %.17g %.17g\n", elements_, snapshots_, grid_.size(), grid_.start_hz(),
                grid_.bin_width_hz());
  out << buf;
  for (std::size_t i = 0; i < elements_; ++i) {
    for (std::size_t k = 0; k < snapshots_; ++k) {
      for (std::size_t l = 0; l < grid_.size(); ++l) {
        const auto v = (*this)(i, k, l);
        std::snprintf(buf, sizeof buf, "%zu %zu %zu %.17g %.17g\n", i, k, l, v.real(), v.imag());
        out << buf;
      }
    }
  }
}

PreparedScenario::PreparedScenario(SourceScenario scenario, UlaGeometry geom, FrequencyGrid grid, bool noise_enabled)
    : scenario_(std::move(scenario)), geom_(geom), grid_(std::move(grid)) {
  validate_scenario(scenario_, geom_, grid_);
  pulses_ = thzdoa::pulses_per_window(scenario_.pulse, grid_.observation_interval_s());
  if (pulses_ == 0) throw DomainError("pulse duration exceeds the observation interval; no pulse fits a window");

  const std::size_t bins = grid_.size();
  const auto n = static_cast<std::size_t>(geom_.element_count);
  gain_.resize(bins);
  noise_variance_.assign(bins, 0.0);
  phase_.resize(bins * n);
  for (std::size_t l = 0; l < bins; ++l) {
    const double f = grid_[l];
    gain_[l] = channel_response(f, scenario_.channel) / grid_.observation_interval_s();
    if (noise_enabled) noise_variance_[l] = bin_noise_variance(grid_, l, scenario_.channel, scenario_.pulse);
    for (std::size_t i = 0; i < n; ++i) {
      phase_[l * n + i] = std::polar(1.0, -kTwoPi * f * element_delay(i, scenario_.doa_deg, geom_));
    }
  }
}

SnapshotTensor synthesize_snapshots(const PreparedScenario& prepared, std::size_t snapshots, Rng& rng) {
  if (snapshots == 0) throw DomainError("snapshot count must be >= 1");
  const auto& grid = prepared.grid();
  const auto n = static_cast<std::size_t>(prepared.geometry().element_count);
  const auto& pulse = prepared.scenario().pulse;
  SnapshotTensor y(n, snapshots, grid);
  std::normal_distribution<double> normal(0.0, 1.0);

  for (std::size_t k = 0; k < snapshots; ++k) {
    const auto symbols = random_symbols(prepared.pulses_per_window(), pulse.duration_s, rng);
    for (std::size_t l = 0; l < grid.size(); ++l) {
      const std::complex<double> signal = train_coefficient(pulse, symbols, grid[l]) * prepared.bin_gain(l);
      const double variance = prepared.noise_variance(l);
      const double sd = std::sqrt(0.5 * variance);
      for (std::size_t i = 0; i < n; ++i) {
        std::complex<double> v = prepared.element_phase(i, l) * signal;
        if (variance > 0.0) {
          const double re = normal(rng);
          const double im = normal(rng);
          v += std::complex<double>(sd * re, sd * im);
        }
        y(i, k, l) = v;
      }
    }
  }
  return y;
}

SnapshotTensor synthesize_snapshots(const SourceScenario& scenario, const UlaGeometry& geom, const FrequencyGrid& grid,
                                    std::size_t snapshots, Rng& rng, bool noise_enabled) {
  return synthesize_snapshots(PreparedScenario(scenario, geom, grid, noise_enabled), snapshots, rng);
}

}  // namespace thzdoa
