#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace thzdoa {

// Sampled medium absorption coefficient k(f), linearly interpolated, never extrapolated.
class AbsorptionProfile {
 public:
  struct Sample {
    double frequency_hz;
    double k_per_m;
    bool operator==(const Sample&) const = default;
  };

  // Throws DomainError unless there are >= 2 samples, frequencies strictly increase and k >= 0.
  AbsorptionProfile(std::vector<Sample> samples, std::string name);

  std::span<const Sample> samples() const noexcept { return samples_; }
  const std::string& name() const noexcept { return name_; }
  std::size_t size() const noexcept { return samples_.size(); }
  double min_frequency_hz() const noexcept { return samples_.front().frequency_hz; }
  double max_frequency_hz() const noexcept { return samples_.back().frequency_hz; }
  bool covers(double lo_hz, double hi_hz) const noexcept {
    return lo_hz >= min_frequency_hz() && hi_hz <= max_frequency_hz();
  }

  // RangeError outside [min, max].
  double at(double f_hz) const;

  // Sample indices whose frequencies lie strictly inside (lo, hi).
  std::span<const Sample> knots_between(double lo_hz, double hi_hz) const;

 private:
  std::vector<Sample> samples_;
  std::string name_;
};

inline double absorption_at(const AbsorptionProfile& profile, double f_hz) { return profile.at(f_hz); }

// CSV: optional `frequency_hz,k_per_m` header, then one sample per line in ascending frequency;
// `#` starts a comment.
AbsorptionProfile parse_profile(std::istream& in, std::string name);
AbsorptionProfile load_profile(const std::filesystem::path& path);
void write_profile(const AbsorptionProfile& profile, std::ostream& out);
void save_profile(const AbsorptionProfile& profile, const std::filesystem::path& path);

struct MixPart {
  std::reference_wrapper<const AbsorptionProfile> profile;
  double mole_fraction;
};

// k(f) = Σ x_q K_q(f) on the union of the parts' sample frequencies over their common range.
AbsorptionProfile mix_profiles(std::span<const MixPart> parts);

struct LorentzLine {
  double center_hz;
  double hwhm_hz;
  double peak_per_m;
};

namespace synthetic {

struct Vacuum {};

struct Constant {
  double k_per_m;
};

// Σ peak·γ²/((f-f0)² + γ²), plus an optional continuum c·(f / 1 THz)².
struct LorentzianLines {
  std::vector<LorentzLine> lines;
  double continuum_per_m_at_1thz = 0.0;
};

using Kind = std::variant<Vacuum, Constant, LorentzianLines>;

}  // namespace synthetic

struct SamplingRange {
  double min_hz = 0.5e12;
  double max_hz = 10.5e12;
  double step_hz = 1e9;
};

AbsorptionProfile synthetic_profile(const synthetic::Kind& kind, const SamplingRange& range = {});

// Line list behind the bundled humid-air stand-in profile. Synthetic: positions loosely follow the
// water-vapour rotational band, strengths are illustrative, not line-by-line data.
synthetic::LorentzianLines summer_air_lines();
AbsorptionProfile summer_air_profile();

}  // namespace thzdoa
