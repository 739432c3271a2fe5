#pragma once

#include <Eigen/Core>

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <vector>

#include "thzdoa/channel.hpp"
#include "thzdoa/random.hpp"
#include "thzdoa/spectrum.hpp"

namespace thzdoa {

struct UlaGeometry {
  int element_count = 8;
  double spacing_m = 15e-6;

  double aperture_m() const noexcept { return (element_count - 1) * spacing_m; }
  void validate() const;
};

// Relative delay of element i (0-based; element 0 is the reference): i·d_s·sin θ / c0.
double element_delay(std::size_t i, double theta_deg, const UlaGeometry& geom);

// a(f, θ) = [exp(-j2πf τ_i)]_i, unit-modulus entries.
Eigen::VectorXcd steering_vector(double f_hz, double theta_deg, const UlaGeometry& geom);

// 2D² / λ_min
double far_field_min_distance(const UlaGeometry& geom, double lambda_min_m);

struct SourceScenario {
  double doa_deg = 10.25;
  PulseSpec pulse;
  ChannelParams channel;  // carries the distance d_r

  double distance_m() const noexcept { return channel.distance_m; }
};

// Throws DomainError when θ ∉ (-90°, 90°) or d_r is inside the far-field bound for the grid's
// highest frequency.
void validate_scenario(const SourceScenario& scenario, const UlaGeometry& geom, const FrequencyGrid& grid);

// Complex Fourier-series coefficients Y[i][k][l]. Stored bin-major so each N×K bin slice is contiguous.
class SnapshotTensor {
 public:
  SnapshotTensor(std::size_t elements, std::size_t snapshots, FrequencyGrid grid);

  std::size_t elements() const noexcept { return elements_; }
  std::size_t snapshots() const noexcept { return snapshots_; }
  std::size_t bins() const noexcept { return grid_.size(); }
  const FrequencyGrid& grid() const noexcept { return grid_; }

  std::complex<double>& operator()(std::size_t i, std::size_t k, std::size_t l) {
    return data_[(l * snapshots_ + k) * elements_ + i];
  }
  std::complex<double> operator()(std::size_t i, std::size_t k, std::size_t l) const {
    return data_[(l * snapshots_ + k) * elements_ + i];
  }

  // N×K view of one bin.
  Eigen::Map<const Eigen::MatrixXcd> bin(std::size_t l) const {
    return {data_.data() + l * snapshots_ * elements_, static_cast<Eigen::Index>(elements_),
            static_cast<Eigen::Index>(snapshots_)};
  }

  bool operator==(const SnapshotTensor& other) const { return data_ == other.data_ && elements_ == other.elements_; }

  // Text dump: header `N K L f_start delta_f`, then one `i k l re im` row per entry (0-based indices).
  void dump(std::ostream& out) const;

 private:
  std::size_t elements_;
  std::size_t snapshots_;
  FrequencyGrid grid_;
  std::vector<std::complex<double>> data_;
};

// Deterministic per-bin quantities of a scenario, computed once and reused across trials.
class PreparedScenario {
 public:
  PreparedScenario(SourceScenario scenario, UlaGeometry geom, FrequencyGrid grid, bool noise_enabled = true);

  const SourceScenario& scenario() const noexcept { return scenario_; }
  const UlaGeometry& geometry() const noexcept { return geom_; }
  const FrequencyGrid& grid() const noexcept { return grid_; }
  std::size_t pulses_per_window() const noexcept { return pulses_; }
  // (1/ΔT) · H(f_l, d_r)
  std::complex<double> bin_gain(std::size_t l) const { return gain_[l]; }
  double noise_variance(std::size_t l) const { return noise_variance_[l]; }
  std::complex<double> element_phase(std::size_t i, std::size_t l) const {
    return phase_[l * static_cast<std::size_t>(geom_.element_count) + i];
  }

 private:
  SourceScenario scenario_;
  UlaGeometry geom_;
  FrequencyGrid grid_;
  std::size_t pulses_;
  std::vector<std::complex<double>> gain_;
  std::vector<double> noise_variance_;
  std::vector<std::complex<double>> phase_;
};

// For each snapshot: a fresh ±1 symbol sequence; per bin the signal term
// exp(-j2πf_l τ_i) · P_k(f_l) · H(f_l, d_r) / ΔT plus circular Gaussian noise of variance σ²(f_l, d_r).
SnapshotTensor synthesize_snapshots(const PreparedScenario& prepared, std::size_t snapshots, Rng& rng);

SnapshotTensor synthesize_snapshots(const SourceScenario& scenario, const UlaGeometry& geom, const FrequencyGrid& grid,
                                    std::size_t snapshots, Rng& rng, bool noise_enabled = true);

}  // namespace thzdoa
