#include "thzdoa/spectrum.hpp"

#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <string>

#include "thzdoa/constants.hpp"
#include "thzdoa/error.hpp"

namespace thzdoa {

namespace {

bool positive_finite(double x) { return std::isfinite(x) && x > 0.0; }

// j^n
std::complex<double> j_power(int n) {
  switch (((n % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

}  // namespace

double FrequencyGrid::at(std::size_t l) const {
  if (l >= bins_.size()) {
    throw RangeError("frequency bin " + std::to_string(l) + " outside grid of " +
                     std::to_string(bins_.size()) + " bins");
  }
  return bins_[l];
}

FrequencyGrid build_grid(double f_start_hz, double bandwidth_hz, double observation_s) {
  if (!positive_finite(f_start_hz)) throw DomainError("grid start frequency must be positive");
  if (!positive_finite(bandwidth_hz)) throw DomainError("grid bandwidth must be positive");
  if (!positive_finite(observation_s)) throw DomainError("observation interval must be positive");

  // B·ΔT is usually meant to be an integer (9 THz · 10 ps = 90); absorb the last-ulp error of the product.
  const double product = bandwidth_hz * observation_s;
  const double count = std::floor(product * (1.0 + 1e-12)) + 1.0;
  if (count > 1e7) throw DomainError("grid would have more than 1e7 bins");

  FrequencyGrid grid;
  grid.start_hz_ = f_start_hz;
  grid.bandwidth_hz_ = bandwidth_hz;
  grid.observation_s_ = observation_s;
  grid.bin_width_hz_ = 1.0 / observation_s;
  const auto n = static_cast<std::size_t>(count);
  grid.bins_.reserve(n);
  const double f_end = f_start_hz + bandwidth_hz;
  for (std::size_t l = 0; l < n; ++l) {
    grid.bins_.push_back(std::min(f_start_hz + static_cast<double>(l) * grid.bin_width_hz_, f_end));
  }
  return grid;
}

double PulseSpec::amplitude() const { return std::exp(log_amplitude); }

PulseSpec pulse_spec(int order, double center_frequency_hz, double energy_j) {
  if (order < 1) throw DomainError("pulse order must be >= 1, got " + std::to_string(order));
  if (!positive_finite(center_frequency_hz)) throw DomainError("pulse center frequency must be positive");
  if (!positive_finite(energy_j)) throw DomainError("pulse energy must be positive");

  PulseSpec spec;
  spec.order = order;
  spec.center_frequency_hz = center_frequency_hz;
  spec.energy_j = energy_j;
  spec.sigma_s = std::sqrt(static_cast<double>(order)) / (kTwoPi * center_frequency_hz);
  spec.duration_s = 10.0 * spec.sigma_s;

  // Two-sided energy: E = 2 ∫0^∞ a² (2πf)^{2n} e^{-(2πσf)²} df = a² Γ(n + 1/2) / (2π σ^{2n+1}).
  const double n = order;
  spec.log_amplitude =
      0.5 * (std::log(kTwoPi * energy_j) + (2.0 * n + 1.0) * std::log(spec.sigma_s) - std::lgamma(n + 0.5));
  return spec;
}

std::complex<double> pulse_spectrum(const PulseSpec& spec, double f_hz) {
  if (f_hz == 0.0) return {0.0, 0.0};
  if (f_hz < 0.0) return std::conj(pulse_spectrum(spec, -f_hz));
  const double w = kTwoPi * f_hz;
  const double x = spec.sigma_s * w;
  const double magnitude = std::exp(spec.log_amplitude + spec.order * std::log(w) - 0.5 * x * x);
  return magnitude * j_power(spec.order);
}

HalfPowerBand half_power_band(const PulseSpec& spec) {
  // With u = f / f_c, |G(u f_c)|² / |G(f_c)|² = u^{2n} e^{n(1 - u²)}; roots of its log + ln 2.
  const double n = spec.order;
  const auto g = [n](double u) { return 2.0 * n * std::log(u) + n * (1.0 - u * u) + std::log(2.0); };
  const boost::math::tools::eps_tolerance<double> tol(48);

  std::uintmax_t iters = 200;
  const auto low = boost::math::tools::toms748_solve(g, 1e-6, 1.0, tol, iters);
  iters = 200;
  const auto high = boost::math::tools::toms748_solve(g, 1.0, 10.0, tol, iters);

  const double fc = spec.center_frequency_hz;
  const double f_low = 0.5 * (low.first + low.second) * fc;
  const double f_high = 0.5 * (high.first + high.second) * fc;
  return {f_low, f_high, f_high - f_low};
}

double pulse_psd(const PulseSpec& spec, double f_hz) {
  return std::norm(pulse_spectrum(spec, f_hz)) / spec.duration_s;
}

SymbolSequence::SymbolSequence(std::vector<int> symbols, double spacing_s)
    : symbols_(std::move(symbols)), spacing_s_(spacing_s) {
  if (symbols_.empty()) throw DomainError("symbol sequence must not be empty");
  for (const int s : symbols_) {
    if (s != 1 && s != -1) throw DomainError("symbols must be +1 or -1, got " + std::to_string(s));
  }
  if (!positive_finite(spacing_s_)) throw DomainError("symbol spacing must be positive");
}

SymbolSequence random_symbols(std::size_t count, double spacing_s, Rng& rng) {
  std::vector<int> symbols(count);
  for (auto& s : symbols) s = (rng() >> 63) ? 1 : -1;
  return SymbolSequence(std::move(symbols), spacing_s);
}

std::size_t pulses_per_window(const PulseSpec& spec, double observation_s) {
  return static_cast<std::size_t>(std::floor(observation_s / spec.duration_s * (1.0 + 1e-12)));
}

std::complex<double> train_coefficient(const PulseSpec& spec, const SymbolSequence& seq, double f_hz) {
  std::complex<double> sum{0.0, 0.0};
  const auto symbols = seq.symbols();
  for (std::size_t r = 0; r < symbols.size(); ++r) {
    const double phase = -kTwoPi * f_hz * static_cast<double>(r) * seq.spacing_s();
    sum += static_cast<double>(symbols[r]) * std::polar(1.0, phase);
  }
  return pulse_spectrum(spec, f_hz) * sum;
}

}  // namespace thzdoa
