#include "thzdoa/experiment.hpp"

#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <ostream>
#include <string>
#include <thread>

#include "thzdoa/constants.hpp"
#include "thzdoa/error.hpp"

namespace thzdoa {

namespace {

constexpr std::pair<SweepAxis, std::string_view> kAxisNames[] = {
    {SweepAxis::none, "none"},         {SweepAxis::distance_m, "distance_m"}, {SweepAxis::energy_aj, "energy_aj"},
    {SweepAxis::snapshots, "snapshots"}, {SweepAxis::order, "order"},         {SweepAxis::fc_thz, "fc_thz"},
    {SweepAxis::doa_deg, "doa_deg"},
};

[[noreturn]] void field_error(std::string_view field, const std::string& message) {
  throw DomainError(std::string(field) + ": " + message);
}

void require_positive(std::string_view field, double v) {
  if (!(std::isfinite(v) && v > 0.0)) field_error(field, "must be positive and finite, got " + format_number(v));
}

bool is_integral(double v) { return std::isfinite(v) && v == std::floor(v); }

std::shared_ptr<const AbsorptionProfile> builtin_constant(double k, const ExperimentConfig& config) {
  // Two samples spanning every bin edge of the configured grid.
  const double lo = std::min(0.5e12, 0.5 * config.array.f_start_hz);
  double hi = 10.5e12;
  const double top = config.array.f_start_hz + config.array.bandwidth_hz + 2.0 / config.array.observation_s;
  if (std::isfinite(top) && top > hi) hi = top;
  return std::make_shared<const AbsorptionProfile>(
      std::vector<AbsorptionProfile::Sample>{{lo, k}, {hi, k}}, k == 0.0 ? "vacuum" : "constant(" + format_number(k) + ")");
}

}  // namespace

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

std::string_view to_string(SweepAxis axis) {
  for (const auto& [a, name] : kAxisNames) {
    if (a == axis) return name;
  }
  return "none";
}

std::optional<SweepAxis> parse_sweep_axis(std::string_view text) {
  for (const auto& [a, name] : kAxisNames) {
    if (name == text) return a;
  }
  return std::nullopt;
}

void resolve_medium(ExperimentConfig& config, const std::filesystem::path& base_dir) {
  const std::string& spec = config.medium.profile;
  if (spec == "summer-air") {
    static const auto summer = std::make_shared<const AbsorptionProfile>(summer_air_profile());
    config.medium.resolved = summer;
  } else if (spec == "vacuum") {
    config.medium.resolved = builtin_constant(0.0, config);
  } else if (spec.starts_with("constant:")) {
    double k = 0.0;
    const std::string_view value = std::string_view(spec).substr(9);
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), k);
    if (ec != std::errc{} || ptr != value.data() + value.size() || !std::isfinite(k) || k < 0.0) {
      field_error("medium.profile", "constant absorption must be a non-negative number, got '" + std::string(value) + "'");
    }
    config.medium.resolved = builtin_constant(k, config);
  } else {
    std::filesystem::path path(spec);
    if (path.is_relative() && !base_dir.empty()) path = base_dir / path;
    config.medium.resolved = std::make_shared<const AbsorptionProfile>(load_profile(path));
  }
}

void validate(const ExperimentConfig& c) {
  if (!(std::isfinite(c.scenario.doa_deg) && c.scenario.doa_deg > -90.0 && c.scenario.doa_deg < 90.0)) {
    field_error("scenario.doa_deg", "must lie in (-90, 90), got " + format_number(c.scenario.doa_deg));
  }
  require_positive("scenario.distance_m", c.scenario.distance_m);
  if (c.scenario.snapshots < 1) field_error("scenario.snapshots", "must be >= 1");
  if (c.pulse.order < 1) field_error("pulse.order", "must be >= 1, got " + std::to_string(c.pulse.order));
  require_positive("pulse.fc_thz", c.pulse.fc_hz);
  require_positive("pulse.energy_aj", c.pulse.energy_j);
  if (c.array.geometry.element_count < 2) field_error("array.elements", "must be >= 2");
  require_positive("array.spacing_um", c.array.geometry.spacing_m);
  require_positive("array.f_start_thz", c.array.f_start_hz);
  require_positive("array.bandwidth_thz", c.array.bandwidth_hz);
  require_positive("array.observation_ps", c.array.observation_s);
  if (!(std::isfinite(c.medium.antenna_center_hz) && c.medium.antenna_center_hz >= 0.0)) {
    field_error("medium.antenna_center_thz", "must be >= 0 (0 follows the pulse center frequency)");
  }
  require_positive("medium.temperature_k", c.medium.temperature_k);
  if (!c.medium.resolved) field_error("medium.profile", "profile '" + c.medium.profile + "' was not resolved");
  try {
    c.estimator.angles.validate();
  } catch (const DomainError& e) {
    field_error("estimator.angle_*", e.what());
  }
  if (c.estimator.source_count < 1 || c.estimator.source_count >= c.array.geometry.element_count) {
    field_error("estimator.source_count", "must be in [1, elements - 1]");
  }
  if (c.run.runs < 1) field_error("run.runs", "must be >= 1");

  if (c.sweep.axis != SweepAxis::none) {
    if (c.sweep.values.empty()) field_error("sweep.values", "must list at least one value");
    for (const double v : c.sweep.values) {
      if (!std::isfinite(v)) field_error("sweep.values", "values must be finite");
      switch (c.sweep.axis) {
        case SweepAxis::snapshots:
        case SweepAxis::order:
          if (!is_integral(v) || v < 1.0) field_error("sweep.values", "must be positive integers for this axis");
          break;
        case SweepAxis::doa_deg:
          if (!(v > -90.0 && v < 90.0)) field_error("sweep.values", "angles must lie in (-90, 90)");
          break;
        default:
          if (!(v > 0.0)) field_error("sweep.values", "must be positive for this axis");
      }
    }
  }

  // Component-level checks (far field, pulse fitting a window) on the base scenario and every sweep point.
  const auto check = [](const ExperimentConfig& cfg, const std::string& where) {
    const auto grid = make_grid(cfg);
    const auto scenario = make_scenario(cfg);
    try {
      validate_scenario(scenario, cfg.array.geometry, grid);
    } catch (const DomainError& e) {
      field_error("scenario.distance_m", where + e.what());
    }
    if (pulses_per_window(scenario.pulse, grid.observation_interval_s()) == 0) {
      field_error("pulse", where + "pulse duration 10*sigma exceeds array.observation_ps");
    }
    const double half = 0.5 * grid.bin_width_hz();
    if (!cfg.medium.resolved->covers(grid[0] - half, grid.max_hz() + half)) {
      field_error("medium.profile", where + "profile does not cover the frequency grid");
    }
  };
  if (c.sweep.axis == SweepAxis::none) {
    check(c, "");
  } else {
    for (const double v : c.sweep.values) {
      check(with_sweep_value(c, c.sweep.axis, v), "at sweep value " + format_number(v) + ": ");
    }
  }
}

ExperimentConfig with_sweep_value(const ExperimentConfig& config, SweepAxis axis, double value) {
  ExperimentConfig out = config;
  switch (axis) {
    case SweepAxis::none: break;
    case SweepAxis::distance_m: out.scenario.distance_m = value; break;
    case SweepAxis::energy_aj: out.pulse.energy_j = from_unit(value, kAtto); break;
    case SweepAxis::snapshots: out.scenario.snapshots = static_cast<std::size_t>(value); break;
    case SweepAxis::order: out.pulse.order = static_cast<int>(value); break;
    case SweepAxis::fc_thz: out.pulse.fc_hz = from_unit(value, kTera); break;
    case SweepAxis::doa_deg: out.scenario.doa_deg = value; break;
  }
  return out;
}

FrequencyGrid make_grid(const ExperimentConfig& c) {
  return build_grid(c.array.f_start_hz, c.array.bandwidth_hz, c.array.observation_s);
}

SourceScenario make_scenario(const ExperimentConfig& c) {
  SourceScenario s;
  s.doa_deg = c.scenario.doa_deg;
  s.pulse = pulse_spec(c.pulse.order, c.pulse.fc_hz, c.pulse.energy_j);
  s.channel.distance_m = c.scenario.distance_m;
  s.channel.antenna_center_hz = c.medium.antenna_center_hz > 0.0 ? c.medium.antenna_center_hz : c.pulse.fc_hz;
  s.channel.temperature_k = c.medium.temperature_k;
  s.channel.medium = c.medium.resolved;
  s.channel.background = c.medium.background;
  return s;
}

PreparedScenario prepare(const ExperimentConfig& c) {
  return PreparedScenario(make_scenario(c), c.array.geometry, make_grid(c), c.medium.noise);
}

SnapshotTensor trial_snapshots(const PreparedScenario& prepared, const ExperimentConfig& config, std::size_t trial,
                               std::size_t sweep_index) {
  Rng rng(derive_seed(config.run.seed, sweep_index, trial));
  return synthesize_snapshots(prepared, config.scenario.snapshots, rng);
}

namespace {

MusicSpectrum spectrum_of(const PreparedScenario& prepared, const ExperimentConfig& config, std::size_t trial,
                          std::size_t sweep_index) {
  const auto y = trial_snapshots(prepared, config, trial, sweep_index);
  const auto& grid = prepared.grid();
  std::vector<Eigen::MatrixXcd> subspaces;
  subspaces.reserve(grid.size());
  for (std::size_t l = 0; l < grid.size(); ++l) {
    subspaces.push_back(noise_subspace(hermitian_evd(sample_covariance(y.bin(l))), config.estimator.source_count));
  }
  return imusic_spectrum_from_subspaces(subspaces, grid.bins(), prepared.geometry(), config.estimator.angles);
}

}  // namespace

double run_trial(const PreparedScenario& prepared, const ExperimentConfig& config, std::size_t trial,
                 std::size_t sweep_index) {
  return estimate_doa(spectrum_of(prepared, config, trial, sweep_index), config.estimator.refine);
}

double run_trial(const ExperimentConfig& config, std::size_t trial, std::size_t sweep_index) {
  return run_trial(prepare(config), config, trial, sweep_index);
}

MusicSpectrum trial_spectrum(const ExperimentConfig& config, std::size_t trial, std::size_t sweep_index) {
  return spectrum_of(prepare(config), config, trial, sweep_index);
}

double rmse(std::span<const double> estimates_deg, double truth_deg) {
  if (estimates_deg.empty()) throw DomainError("RMSE of an empty estimate list");
  double sum = 0.0;
  for (const double e : estimates_deg) sum += (e - truth_deg) * (e - truth_deg);
  return std::sqrt(sum / static_cast<double>(estimates_deg.size()));
}

double rmse_standard_error(std::span<const double> estimates_deg, double truth_deg) {
  const double r = rmse(estimates_deg, truth_deg);
  const auto n = static_cast<double>(estimates_deg.size());
  if (r == 0.0 || estimates_deg.size() < 2) return 0.0;
  const double mse = r * r;
  double var = 0.0;
  for (const double e : estimates_deg) {
    const double sq = (e - truth_deg) * (e - truth_deg);
    var += (sq - mse) * (sq - mse);
  }
  var /= (n - 1.0);
  return std::sqrt(var / n) / (2.0 * r);
}

std::vector<RmseReport> sweep(const ExperimentConfig& config) {
  validate(config);

  std::vector<ExperimentConfig> points;
  std::vector<double> values;
  if (config.sweep.axis == SweepAxis::none) {
    points.push_back(config);
    values.push_back(std::nan(""));
  } else {
    for (const double v : config.sweep.values) {
      points.push_back(with_sweep_value(config, config.sweep.axis, v));
      values.push_back(v);
    }
  }

  std::vector<PreparedScenario> prepared;
  prepared.reserve(points.size());
  for (const auto& p : points) prepared.push_back(prepare(p));

  const std::size_t runs = config.run.runs;
  const std::size_t tasks = points.size() * runs;
  std::vector<double> estimates(tasks);
  std::vector<double> seconds(tasks);

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const auto worker = [&] {
    for (std::size_t task = next++; task < tasks; task = next++) {
      const std::size_t s = task / runs;
      const std::size_t t = task % runs;
      try {
        const auto start = std::chrono::steady_clock::now();
        estimates[task] = run_trial(prepared[s], points[s], t, s);
        seconds[task] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = tasks;
      }
    }
  };

  unsigned threads = config.run.threads ? config.run.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, tasks));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<RmseReport> reports;
  reports.reserve(points.size());
  for (std::size_t s = 0; s < points.size(); ++s) {
    RmseReport r;
    r.sweep_value = values[s];
    r.truth_deg = points[s].scenario.doa_deg;
    r.estimates_deg.assign(estimates.begin() + s * runs, estimates.begin() + (s + 1) * runs);
    r.rmse_deg = rmse(r.estimates_deg, r.truth_deg);
    r.stderr_deg = rmse_standard_error(r.estimates_deg, r.truth_deg);
    r.seed = config.run.seed;
    for (std::size_t t = 0; t < runs; ++t) r.wall_time_s += seconds[s * runs + t];
    reports.push_back(std::move(r));
  }
  return reports;
}

double cross_term_magnitude(double antenna_center_hz, double distance_m, double k_per_m) {
  if (!(antenna_center_hz > 0.0) || !(distance_m > 0.0) || !(k_per_m >= 0.0)) {
    throw DomainError("cross-term envelope needs f_o > 0, d_r > 0 and k >= 0");
  }
  const double g = kSpeedOfLight / (4.0 * kPi * distance_m * antenna_center_hz);
  const double x = k_per_m * distance_m;
  return g * g * std::sqrt(-std::expm1(-x)) * std::exp(-0.5 * x);
}

void write_rmse_csv(std::span<const RmseReport> reports, std::ostream& out) {
  out << "sweep_value,rmse_deg,stderr_deg,n_run,seed\n";
  for (const auto& r : reports) {
    out << format_number(r.sweep_value) << ',' << format_number(r.rmse_deg) << ',' << format_number(r.stderr_deg)
        << ',' << r.estimates_deg.size() << ',' << r.seed << '\n';
  }
}

void write_runs_csv(std::span<const RmseReport> reports, std::ostream& out) {
  out << "sweep_value,run_index,estimate_deg\n";
  for (const auto& r : reports) {
    for (std::size_t i = 0; i < r.estimates_deg.size(); ++i) {
      out << format_number(r.sweep_value) << ',' << i << ',' << format_number(r.estimates_deg[i]) << '\n';
    }
  }
}

}  // namespace thzdoa
