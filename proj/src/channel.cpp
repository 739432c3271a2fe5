#include "thzdoa/channel.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <vector>

#include "thzdoa/constants.hpp"
#include "thzdoa/error.hpp"

namespace thzdoa {

namespace {

double spreading_gain(const ChannelParams& p) {
  return kSpeedOfLight / (4.0 * kPi * p.distance_m * p.antenna_center_hz);
}

double background_from_k(double k, const ChannelParams& p) {
  double factor = 0.0;
  if (p.background == BackgroundNoiseForm::saturated) {
    factor = k > 0.0 ? 1.0 : 0.0;
  } else {
    factor = -std::expm1(-k * p.distance_m);
  }
  const double aperture = kSpeedOfLight / (std::sqrt(4.0 * kPi) * p.antenna_center_hz);
  return kBoltzmann * p.temperature_k * factor * aperture * aperture;
}

double self_from_k(double k, const ChannelParams& p, double source_psd) {
  const double g = spreading_gain(p);
  return source_psd * -std::expm1(-k * p.distance_m) * g * g;
}

std::pair<double, double> sub_band(const FrequencyGrid& grid, std::size_t l, const ChannelParams& p) {
  const double center = grid.at(l);
  const double half = 0.5 * grid.bin_width_hz();
  const double lo = center - half;
  const double hi = center + half;
  if (!p.medium->covers(lo, hi)) {
    throw RangeError("bin " + std::to_string(l) + " sub-band [" + std::to_string(lo) + ", " + std::to_string(hi) +
                     "] Hz is outside the medium profile '" + p.medium->name() + "'");
  }
  return {lo, hi};
}

}  // namespace

void ChannelParams::validate() const {
  if (!(std::isfinite(distance_m) && distance_m > 0.0)) throw DomainError("distance_m must be positive");
  if (!(std::isfinite(antenna_center_hz) && antenna_center_hz > 0.0)) {
    throw DomainError("antenna center frequency must be positive");
  }
  if (!(std::isfinite(temperature_k) && temperature_k > 0.0)) throw DomainError("temperature_k must be positive");
  if (!medium) throw DomainError("channel has no absorption profile");
}

std::complex<double> spreading_loss(double f_hz, const ChannelParams& p) {
  return std::polar(spreading_gain(p), -kTwoPi * f_hz * p.distance_m / kSpeedOfLight);
}

double absorption_loss(double f_hz, const ChannelParams& p) {
  return std::exp(-0.5 * p.medium->at(f_hz) * p.distance_m);
}

std::complex<double> channel_response(double f_hz, const ChannelParams& p) {
  return spreading_loss(f_hz, p) * absorption_loss(f_hz, p);
}

double background_noise_psd(double f_hz, const ChannelParams& p) {
  return background_from_k(p.medium->at(f_hz), p);
}

double self_noise_psd(double f_hz, const ChannelParams& p, double source_psd) {
  if (source_psd < 0.0) throw DomainError("source PSD must be non-negative");
  return self_from_k(p.medium->at(f_hz), p, source_psd);
}

double total_noise_psd(double f_hz, const ChannelParams& p, double source_psd) {
  if (source_psd < 0.0) throw DomainError("source PSD must be non-negative");
  const double k = p.medium->at(f_hz);
  return background_from_k(k, p) + self_from_k(k, p, source_psd);
}

double bin_noise_variance(const FrequencyGrid& grid, std::size_t l, const ChannelParams& p, const PulseSpec& spec) {
  const auto [lo, hi] = sub_band(grid, l, p);
  const auto integrand = [&](double f) { return total_noise_psd(f, p, pulse_psd(spec, f)); };

  // k(f) has kinks at the profile samples; integrate each smooth panel separately.
  std::vector<double> edges{lo};
  for (const auto& s : p.medium->knots_between(lo, hi)) edges.push_back(s.frequency_hz);
  edges.push_back(hi);

  using Quadrature = boost::math::quadrature::gauss_kronrod<double, 15>;
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    total += Quadrature::integrate(integrand, edges[i], edges[i + 1], 12, 1e-10);
  }
  return std::max(total, 0.0);
}

double bin_noise_variance_riemann(const FrequencyGrid& grid, std::size_t l, const ChannelParams& p,
                                  const PulseSpec& spec, std::size_t panels) {
  if (panels == 0) throw DomainError("panel count must be positive");
  const auto [lo, hi] = sub_band(grid, l, p);
  const double width = (hi - lo) / static_cast<double>(panels);
  double total = 0.0;
  for (std::size_t i = 0; i < panels; ++i) {
    const double f = lo + (static_cast<double>(i) + 0.5) * width;
    total += total_noise_psd(f, p, pulse_psd(spec, f));
  }
  return total * width;
}

}  // namespace thzdoa
