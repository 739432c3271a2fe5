#pragma once

#include <complex>
#include <cstddef>
#include <memory>

#include "thzdoa/medium.hpp"
#include "thzdoa/spectrum.hpp"

namespace thzdoa {

// How the background (atmospheric) noise depends on distance.
enum class BackgroundNoiseForm {
  saturated,        // d → ∞ limit: factor is 1 wherever k(f) > 0, 0 where k(f) = 0
  finite_distance,  // 1 - exp(-k(f) d_r)
};

struct ChannelParams {
  double distance_m = 1.0;
  double antenna_center_hz = 6e12;
  double temperature_k = 296.0;
  std::shared_ptr<const AbsorptionProfile> medium;
  BackgroundNoiseForm background = BackgroundNoiseForm::saturated;

  // DomainError on non-positive distance/center/temperature or a missing medium.
  void validate() const;
};

// (c0 / (4π d f_o)) · exp(-j2πf d / c0)
std::complex<double> spreading_loss(double f_hz, const ChannelParams& p);

// exp(-k(f) d / 2)
double absorption_loss(double f_hz, const ChannelParams& p);

std::complex<double> channel_response(double f_hz, const ChannelParams& p);

// k_B T0 · (saturation factor) · (c0 / (√(4π) f_o))²
double background_noise_psd(double f_hz, const ChannelParams& p);

// S_P(f) (1 - exp(-k d)) (c0 / (4π d f_o))²
double self_noise_psd(double f_hz, const ChannelParams& p, double source_psd);

double total_noise_psd(double f_hz, const ChannelParams& p, double source_psd);

// ∫ S_N over [f_l - Δf/2, f_l + Δf/2] with S_P = pulse_psd. Adaptive Gauss-Kronrod per
// piecewise-linear panel of k(f), relative tolerance 1e-10.
double bin_noise_variance(const FrequencyGrid& grid, std::size_t l, const ChannelParams& p, const PulseSpec& spec);

// Midpoint rule with `panels` equal panels over the same sub-band.
double bin_noise_variance_riemann(const FrequencyGrid& grid, std::size_t l, const ChannelParams& p,
                                  const PulseSpec& spec, std::size_t panels);

}  // namespace thzdoa
