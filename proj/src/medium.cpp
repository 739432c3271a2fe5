#include "thzdoa/medium.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string_view>

#include "thzdoa/error.hpp"

namespace thzdoa {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

bool parse_double(std::string_view text, double& out) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, out);
  return ec == std::errc{} && ptr == end && std::isfinite(out);
}

std::string format_double(double x) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

void validate_samples(const std::vector<AbsorptionProfile::Sample>& samples) {
  if (samples.size() < 2) throw DomainError("absorption profile needs at least 2 samples");
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    if (!std::isfinite(s.frequency_hz) || !std::isfinite(s.k_per_m)) {
      throw DomainError("absorption sample " + std::to_string(i) + " is not finite");
    }
    if (s.k_per_m < 0.0) throw DomainError("absorption sample " + std::to_string(i) + " has negative k");
    if (i > 0 && !(s.frequency_hz > samples[i - 1].frequency_hz)) {
      throw DomainError("absorption sample " + std::to_string(i) + " does not increase in frequency");
    }
  }
}

}  // namespace

AbsorptionProfile::AbsorptionProfile(std::vector<Sample> samples, std::string name)
    : samples_(std::move(samples)), name_(std::move(name)) {
  validate_samples(samples_);
}

double AbsorptionProfile::at(double f_hz) const {
  if (!(f_hz >= min_frequency_hz() && f_hz <= max_frequency_hz())) {
    throw RangeError("frequency " + format_double(f_hz) + " Hz outside absorption profile '" + name_ +
                     "' range [" + format_double(min_frequency_hz()) + ", " +
                     format_double(max_frequency_hz()) + "] Hz");
  }
  const auto it = std::lower_bound(samples_.begin(), samples_.end(), f_hz,
                                   [](const Sample& s, double f) { return s.frequency_hz < f; });
  if (it->frequency_hz == f_hz) return it->k_per_m;
  const auto& hi = *it;
  const auto& lo = *(it - 1);
  const double t = (f_hz - lo.frequency_hz) / (hi.frequency_hz - lo.frequency_hz);
  return lo.k_per_m + t * (hi.k_per_m - lo.k_per_m);
}

std::span<const AbsorptionProfile::Sample> AbsorptionProfile::knots_between(double lo_hz, double hi_hz) const {
  const auto first = std::upper_bound(samples_.begin(), samples_.end(), lo_hz,
                                      [](double f, const Sample& s) { return f < s.frequency_hz; });
  const auto last = std::lower_bound(first, samples_.end(), hi_hz,
                                     [](const Sample& s, double f) { return s.frequency_hz < f; });
  return {first, last};
}

AbsorptionProfile parse_profile(std::istream& in, std::string name) {
  std::vector<AbsorptionProfile::Sample> samples;
  std::string raw;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line(raw);
    if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.remove_prefix(3);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    if (samples.empty() && !header_seen && line == "frequency_hz,k_per_m") {
      header_seen = true;
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string_view::npos || line.find(',', comma + 1) != std::string_view::npos) {
      throw ParseError("expected 'frequency_hz,k_per_m'", line_no);
    }
    AbsorptionProfile::Sample s{};
    if (!parse_double(line.substr(0, comma), s.frequency_hz)) throw ParseError("bad frequency value", line_no);
    if (!parse_double(line.substr(comma + 1), s.k_per_m)) throw ParseError("bad absorption value", line_no);
    if (s.frequency_hz <= 0.0) throw ParseError("frequency must be positive", line_no);
    if (s.k_per_m < 0.0) throw ParseError("absorption coefficient must be non-negative", line_no);
    if (!samples.empty() && !(s.frequency_hz > samples.back().frequency_hz)) {
      throw ParseError("frequencies must be strictly ascending", line_no);
    }
    samples.push_back(s);
  }
  if (samples.size() < 2) {
    throw ParseError("absorption profile needs at least 2 data rows, found " + std::to_string(samples.size()),
                     line_no);
  }
  return AbsorptionProfile(std::move(samples), std::move(name));
}

AbsorptionProfile load_profile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open absorption profile '" + path.string() + "'");
  try {
    return parse_profile(in, path.stem().string());
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void write_profile(const AbsorptionProfile& profile, std::ostream& out) {
  out << "# absorption profile: " << profile.name() << '\n';
  out << "frequency_hz,k_per_m\n";
  for (const auto& s : profile.samples()) {
    out << format_double(s.frequency_hz) << ',' << format_double(s.k_per_m) << '\n';
  }
}

void save_profile(const AbsorptionProfile& profile, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write absorption profile '" + path.string() + "'");
  write_profile(profile, out);
  if (!out.flush()) throw IoError("write failed for '" + path.string() + "'");
}

AbsorptionProfile mix_profiles(std::span<const MixPart> parts) {
  if (parts.empty()) throw DomainError("mix needs at least one profile");
  double total = 0.0;
  double lo = -INFINITY;
  double hi = INFINITY;
  for (const auto& part : parts) {
    if (!std::isfinite(part.mole_fraction) || part.mole_fraction < 0.0) {
      throw DomainError("mole fractions must be non-negative");
    }
    total += part.mole_fraction;
    lo = std::max(lo, part.profile.get().min_frequency_hz());
    hi = std::min(hi, part.profile.get().max_frequency_hz());
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw DomainError("mole fractions sum to " + format_double(total) + ", expected 1");
  }
  if (!(hi > lo)) throw DomainError("profiles to mix do not overlap in frequency");

  std::vector<double> freqs;
  for (const auto& part : parts) {
    for (const auto& s : part.profile.get().samples()) {
      if (s.frequency_hz >= lo && s.frequency_hz <= hi) freqs.push_back(s.frequency_hz);
    }
  }
  std::sort(freqs.begin(), freqs.end());
  freqs.erase(std::unique(freqs.begin(), freqs.end()), freqs.end());

  std::vector<AbsorptionProfile::Sample> samples;
  samples.reserve(freqs.size());
  for (const double f : freqs) {
    double k = 0.0;
    for (const auto& part : parts) k += part.mole_fraction * part.profile.get().at(f);
    samples.push_back({f, k});
  }

  std::ostringstream name;
  name << "mix(";
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) name << ';';
    name << parts[i].profile.get().name() << ':' << format_double(parts[i].mole_fraction);
  }
  name << ')';
  return AbsorptionProfile(std::move(samples), name.str());
}

namespace {

struct SyntheticEvaluator {
  double f;
  double operator()(const synthetic::Vacuum&) const { return 0.0; }
  double operator()(const synthetic::Constant& c) const { return c.k_per_m; }
  double operator()(const synthetic::LorentzianLines& l) const {
    const double u = f / 1e12;
    double k = l.continuum_per_m_at_1thz * u * u;
    for (const auto& line : l.lines) {
      const double d = f - line.center_hz;
      const double g2 = line.hwhm_hz * line.hwhm_hz;
      k += line.peak_per_m * g2 / (d * d + g2);
    }
    return k;
  }
};

void validate_kind(const synthetic::Kind& kind) {
  if (const auto* c = std::get_if<synthetic::Constant>(&kind)) {
    if (!std::isfinite(c->k_per_m) || c->k_per_m < 0.0) throw DomainError("constant k must be finite and >= 0");
  }
  if (const auto* l = std::get_if<synthetic::LorentzianLines>(&kind)) {
    if (!std::isfinite(l->continuum_per_m_at_1thz) || l->continuum_per_m_at_1thz < 0.0) {
      throw DomainError("continuum coefficient must be finite and >= 0");
    }
    for (const auto& line : l->lines) {
      if (!std::isfinite(line.center_hz) || line.center_hz <= 0.0) throw DomainError("line center must be positive");
      if (!std::isfinite(line.hwhm_hz) || line.hwhm_hz <= 0.0) throw DomainError("line width must be positive");
      if (!std::isfinite(line.peak_per_m) || line.peak_per_m < 0.0) {
        throw DomainError("line strength must be non-negative");
      }
    }
  }
}

std::string kind_name(const synthetic::Kind& kind) {
  if (std::holds_alternative<synthetic::Vacuum>(kind)) return "vacuum";
  if (const auto* c = std::get_if<synthetic::Constant>(&kind)) return "constant(" + format_double(c->k_per_m) + ")";
  return "lorentzian(" + std::to_string(std::get<synthetic::LorentzianLines>(kind).lines.size()) + " lines)";
}

}  // namespace

AbsorptionProfile synthetic_profile(const synthetic::Kind& kind, const SamplingRange& range) {
  validate_kind(kind);
  if (!(range.min_hz > 0.0) || !(range.max_hz > range.min_hz) || !(range.step_hz > 0.0) ||
      !std::isfinite(range.max_hz)) {
    throw DomainError("sampling range must satisfy 0 < min < max and step > 0");
  }
  const auto intervals = static_cast<std::size_t>(std::ceil((range.max_hz - range.min_hz) / range.step_hz - 1e-9));
  if (intervals > 50'000'000) throw DomainError("sampling range too dense");

  std::vector<AbsorptionProfile::Sample> samples;
  samples.reserve(intervals + 1);
  for (std::size_t i = 0; i <= intervals; ++i) {
    const double f = (i == intervals) ? range.max_hz : range.min_hz + static_cast<double>(i) * range.step_hz;
    samples.push_back({f, std::visit(SyntheticEvaluator{f}, kind)});
  }
  return AbsorptionProfile(std::move(samples), kind_name(kind));
}

synthetic::LorentzianLines summer_air_lines() {
  // {center THz, peak 1/m}
  static constexpr std::pair<double, double> kLines[] = {
      {1.097, 1}, {1.113, 0.5}, {1.163, 1.5}, {1.208, 0.75}, {1.229, 0.5}, {1.411, 1.25},
      {1.603, 2}, {1.662, 1.5}, {1.670, 3}, {1.717, 2.25}, {1.794, 1.5}, {1.867, 1.25},
      {1.920, 1.75}, {2.041, 2.5}, {2.074, 2}, {2.164, 1.75}, {2.196, 1.5}, {2.222, 1.25},
      {2.264, 3}, {2.345, 1.5}, {2.392, 2.25}, {2.531, 2}, {2.640, 3.5}, {2.686, 2.5},
      {2.774, 4}, {2.970, 3}, {3.013, 3.75}, {3.136, 2.75}, {3.169, 3.25}, {3.332, 3.5},
      {3.535, 3}, {3.599, 3.75}, {3.654, 3.25}, {3.808, 4}, {3.977, 3.5}, {4.192, 4.5},
      {4.402, 4}, {4.603, 5}, {4.751, 4.5}, {5.003, 5.5}, {5.278, 5}, {5.536, 6},
      {5.780, 5.5}, {6.028, 6.25}, {6.330, 6}, {6.639, 6.5}, {6.917, 6.25}, {7.244, 6.75},
      {7.552, 6.5}, {7.892, 7}, {8.215, 6.75}, {8.555, 7}, {8.884, 6.75}, {9.216, 7},
      {9.549, 6.75}, {9.882, 6.5},
  };
  synthetic::LorentzianLines out;
  out.continuum_per_m_at_1thz = 0.005;
  for (const auto& [center_thz, peak] : kLines) out.lines.push_back({center_thz * 1e12, 5e9, peak});
  return out;
}

AbsorptionProfile summer_air_profile() {
  const auto base = synthetic_profile(summer_air_lines(), SamplingRange{});
  return AbsorptionProfile({base.samples().begin(), base.samples().end()}, "summer-air-synthetic");
}

}  // namespace thzdoa
