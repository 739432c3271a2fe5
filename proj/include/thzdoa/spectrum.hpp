#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "thzdoa/random.hpp"

namespace thzdoa {

// Uniform DFT-style bin placement over [f_start, f_start + bandwidth] with spacing 1/ΔT.
class FrequencyGrid {
 public:
  double start_hz() const noexcept { return start_hz_; }
  double bandwidth_hz() const noexcept { return bandwidth_hz_; }
  double observation_interval_s() const noexcept { return observation_s_; }
  double bin_width_hz() const noexcept { return bin_width_hz_; }
  std::size_t size() const noexcept { return bins_.size(); }
  double operator[](std::size_t l) const { return bins_[l]; }
  double at(std::size_t l) const;
  std::span<const double> bins() const noexcept { return bins_; }
  double max_hz() const noexcept { return bins_.back(); }

 private:
  friend FrequencyGrid build_grid(double, double, double);
  FrequencyGrid() = default;

  double start_hz_ = 0.0;
  double bandwidth_hz_ = 0.0;
  double observation_s_ = 0.0;
  double bin_width_hz_ = 0.0;
  std::vector<double> bins_;
};

// L = floor(B·ΔT) + 1 bins. Throws DomainError on non-positive or non-finite input.
FrequencyGrid build_grid(double f_start_hz, double bandwidth_hz, double observation_s);

// nth time derivative of a Gaussian, parameterised by where its PSD peaks.
struct PulseSpec {
  int order = 1;
  double center_frequency_hz = 0.0;
  double energy_j = 0.0;
  double sigma_s = 0.0;      // sqrt(n) / (2π f_c)
  double duration_s = 0.0;   // 10σ
  double log_amplitude = 0.0;  // ln a_n (a_n is around 1e-100 for n = 6)

  double amplitude() const;
};

PulseSpec pulse_spec(int order, double center_frequency_hz, double energy_j);

// G_n(f) = a_n (j2πf)^n exp(-(2πσf)²/2). Hermitian: G(-f) = conj(G(f)).
std::complex<double> pulse_spectrum(const PulseSpec& spec, double f_hz);

struct HalfPowerBand {
  double low_hz;
  double high_hz;
  double bandwidth_hz;
};

HalfPowerBand half_power_band(const PulseSpec& spec);

// |G_n(f)|² / T_p, in W/Hz.
double pulse_psd(const PulseSpec& spec, double f_hz);

// Bi-phase (±1) symbols spaced T_p apart within one observation window.
class SymbolSequence {
 public:
  SymbolSequence(std::vector<int> symbols, double spacing_s);

  std::span<const int> symbols() const noexcept { return symbols_; }
  double spacing_s() const noexcept { return spacing_s_; }
  std::size_t size() const noexcept { return symbols_.size(); }

 private:
  std::vector<int> symbols_;
  double spacing_s_;
};

SymbolSequence random_symbols(std::size_t count, double spacing_s, Rng& rng);

// Pulses that fit in one observation window: floor(ΔT / T_p).
std::size_t pulses_per_window(const PulseSpec& spec, double observation_s);

// G_n(f) · Σ_r a_r exp(-j2πf r T_p).
std::complex<double> train_coefficient(const PulseSpec& spec, const SymbolSequence& seq, double f_hz);

}  // namespace thzdoa
