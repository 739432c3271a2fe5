#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "thzdoa/array.hpp"
#include "thzdoa/subspace.hpp"

namespace thzdoa {

enum class SweepAxis { none, distance_m, energy_aj, snapshots, order, fc_thz, doa_deg };

std::string_view to_string(SweepAxis axis);
std::optional<SweepAxis> parse_sweep_axis(std::string_view text);

// Defaults reproduce the reference scenario: 8-element ULA at 15 µm, 1-10 THz with 10 ps windows
// (91 bins), first-order 6 THz 1 aJ pulse from 10.25°, K = 50 snapshots, 100 runs.
struct ExperimentConfig {
  struct Scenario {
    double doa_deg = 10.25;
    double distance_m = 1.0;
    std::size_t snapshots = 50;
  } scenario;

  struct Pulse {
    int order = 1;
    double fc_hz = 6e12;
    double energy_j = 1e-18;
  } pulse;

  struct Array {
    UlaGeometry geometry;
    double f_start_hz = 1e12;
    double bandwidth_hz = 9e12;
    double observation_s = 10e-12;
  } array;

  struct Medium {
    // "summer-air", "vacuum", "constant:<k_per_m>" or a profile file path.
    std::string profile = "summer-air";
    std::shared_ptr<const AbsorptionProfile> resolved;
    double antenna_center_hz = 0.0;  // 0 → pulse center frequency
    double temperature_k = 296.0;
    BackgroundNoiseForm background = BackgroundNoiseForm::saturated;
    bool noise = true;
  } medium;

  struct Estimator {
    AngleGrid angles;
    bool refine = true;
    int source_count = 1;
  } estimator;

  struct Sweep {
    SweepAxis axis = SweepAxis::none;
    std::vector<double> values;
  } sweep;

  struct Run {
    std::size_t runs = 100;
    std::uint64_t seed = 1;
    unsigned threads = 0;  // 0 → hardware concurrency
  } run;
};

// Loads the medium named by config.medium.profile (relative paths against base_dir).
void resolve_medium(ExperimentConfig& config, const std::filesystem::path& base_dir = {});

// DomainError naming the offending `section.key`.
void validate(const ExperimentConfig& config);

ExperimentConfig with_sweep_value(const ExperimentConfig& config, SweepAxis axis, double value);

SourceScenario make_scenario(const ExperimentConfig& config);
FrequencyGrid make_grid(const ExperimentConfig& config);
PreparedScenario prepare(const ExperimentConfig& config);

// One Monte Carlo trial: synthesize → per-bin covariance → IMUSIC → argmax. The random stream is
// seeded from (run.seed, sweep_index, trial).
double run_trial(const ExperimentConfig& config, std::size_t trial, std::size_t sweep_index = 0);
double run_trial(const PreparedScenario& prepared, const ExperimentConfig& config, std::size_t trial,
                 std::size_t sweep_index = 0);

SnapshotTensor trial_snapshots(const PreparedScenario& prepared, const ExperimentConfig& config, std::size_t trial,
                               std::size_t sweep_index = 0);
MusicSpectrum trial_spectrum(const ExperimentConfig& config, std::size_t trial, std::size_t sweep_index = 0);

double rmse(std::span<const double> estimates_deg, double truth_deg);
// Delta-method standard error of the RMSE.
double rmse_standard_error(std::span<const double> estimates_deg, double truth_deg);

struct RmseReport {
  double sweep_value = 0.0;
  double truth_deg = 0.0;
  double rmse_deg = 0.0;
  double stderr_deg = 0.0;
  std::vector<double> estimates_deg;
  std::uint64_t seed = 0;
  double wall_time_s = 0.0;
};

// One report per sweep value (a single report with NaN sweep value when the axis is none).
std::vector<RmseReport> sweep(const ExperimentConfig& config);

// (c0/(4π d f_o))² · sqrt(1 - exp(-k d)) / exp(k d / 2): envelope of the signal/self-noise cross term.
double cross_term_magnitude(double antenna_center_hz, double distance_m, double k_per_m);

// `sweep_value,rmse_deg,stderr_deg,n_run,seed`
void write_rmse_csv(std::span<const RmseReport> reports, std::ostream& out);
// `sweep_value,run_index,estimate_deg`
void write_runs_csv(std::span<const RmseReport> reports, std::ostream& out);

std::string format_number(double x);

}  // namespace thzdoa
