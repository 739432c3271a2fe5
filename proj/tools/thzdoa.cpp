#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "thzdoa/thzdoa.h"

namespace fs = std::filesystem;

namespace {

struct Failure : std::runtime_error {
  thz_status status;
  Failure(thz_status s, const std::string& m) : std::runtime_error(m), status(s) {}
};

void check(thz_status s) {
  if (s != THZ_OK) throw Failure(s, std::string(thz_status_name(s)) + ": " + thz_last_error());
}

template <typename T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using Config = std::unique_ptr<thz_config, Deleter<thz_config, thz_config_free>>;
using Sweep = std::unique_ptr<thz_sweep_result, Deleter<thz_sweep_result, thz_sweep_result_free>>;
using Spectrum = std::unique_ptr<thz_spectrum, Deleter<thz_spectrum, thz_spectrum_free>>;
using Profile = std::unique_ptr<thz_profile, Deleter<thz_profile, thz_profile_free>>;

fs::path default_output_dir() {
  const char* env = std::getenv("THZDOA_OUTPUT_DIR");
  return env && *env ? fs::path(env) : fs::path("results");
}

void ensure_parent(const fs::path& file) {
  if (file.has_parent_path()) fs::create_directories(file.parent_path());
}

Config load(const std::string& path, std::optional<std::uint64_t> seed, std::optional<unsigned> threads) {
  thz_config* raw = nullptr;
  if (fs::path(path).extension() == ".json") {
    check(thz_config_from_manifest(path.c_str(), &raw));
  } else {
    check(thz_config_load(path.c_str(), &raw));
  }
  Config config(raw);
  if (seed) check(thz_config_set_seed(config.get(), *seed));
  if (threads) check(thz_config_set_threads(config.get(), *threads));
  return config;
}

Profile profile_from(const std::string& source) {
  thz_profile* raw = nullptr;
  if (source == "vacuum" || source == "summer-air" || source.starts_with("constant:")) {
    check(thz_profile_synth(source.c_str(), 0.5e12, 10.5e12, 1e9, &raw));
  } else {
    check(thz_profile_load(source.c_str(), &raw));
  }
  return Profile(raw);
}

struct SimulateArgs {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  bool quiet = false;
};

void simulate(const SimulateArgs& a) {
  const Config config = load(a.config, a.seed, a.threads);
  const fs::path dir = a.out.empty() ? default_output_dir() : fs::path(a.out);
  fs::create_directories(dir);

  thz_sweep_result* raw = nullptr;
  check(thz_run_sweep(config.get(), &raw));
  const Sweep result(raw);

  const std::string rmse = (dir / "rmse.csv").string();
  const std::string runs = (dir / "runs.csv").string();
  const std::string spectrum = (dir / "spectrum.csv").string();
  check(thz_sweep_result_write_rmse_csv(result.get(), rmse.c_str()));
  check(thz_sweep_result_write_runs_csv(result.get(), runs.c_str()));

  thz_spectrum* sraw = nullptr;
  check(thz_compute_spectrum(config.get(), 0, &sraw));
  const Spectrum first(sraw);
  check(thz_spectrum_write_csv(first.get(), spectrum.c_str()));

  const char* outputs[] = {"rmse.csv", "runs.csv", "spectrum.csv"};
  const std::string manifest = (dir / "manifest.json").string();
  check(thz_write_manifest(config.get(), fs::absolute(a.config).string().c_str(), fs::absolute(dir).string().c_str(),
                           outputs, 3, manifest.c_str()));

  if (a.quiet) return;
  for (std::size_t i = 0; i < thz_sweep_result_count(result.get()); ++i) {
    thz_rmse_point p{};
    check(thz_sweep_result_point(result.get(), i, &p));
    std::printf("sweep_value=%-10g rmse_deg=%-12.6g stderr_deg=%-12.6g n_run=%zu time_s=%.2f\n", p.sweep_value,
                p.rmse_deg, p.stderr_deg, p.n_run, p.wall_time_s);
  }
  std::printf("wrote %s\n", fs::absolute(dir).string().c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"THz pulse DOA simulator: wideband MUSIC over molecular-absorption channels"};
  app.set_version_flag("--version", std::string(thz_version()));
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate_cmd = app.add_subcommand("simulate", "Run the Monte Carlo sweep of a config (or a manifest.json)");
  simulate_cmd->add_option("config", sim.config, "Scenario file")->required()->check(CLI::ExistingFile);
  simulate_cmd->add_option("--out", sim.out, "Output directory (default $THZDOA_OUTPUT_DIR or ./results)");
  simulate_cmd->add_option("--seed", sim.seed, "Override run.seed");
  simulate_cmd->add_option("--threads", sim.threads, "Override run.threads (0 = all cores)");
  simulate_cmd->add_flag("--quiet", sim.quiet, "No summary on stdout");

  std::string spectrum_config, spectrum_out;
  std::optional<std::uint64_t> spectrum_seed;
  std::size_t spectrum_trial = 0;
  auto* spectrum_cmd = app.add_subcommand("spectrum", "Export the IMUSIC spectrum of one trial");
  spectrum_cmd->add_option("config", spectrum_config, "Scenario file")->required()->check(CLI::ExistingFile);
  spectrum_cmd->add_option("--out", spectrum_out, "CSV path (default <output dir>/spectrum.csv)");
  spectrum_cmd->add_option("--seed", spectrum_seed, "Override run.seed");
  spectrum_cmd->add_option("--trial", spectrum_trial, "Trial index selecting the random stream");

  std::string snapshots_config, snapshots_out;
  std::size_t snapshots_trial = 0;
  auto* snapshots_cmd = app.add_subcommand("snapshots", "Dump the raw snapshot tensor of one trial");
  snapshots_cmd->add_option("config", snapshots_config, "Scenario file")->required()->check(CLI::ExistingFile);
  snapshots_cmd->add_option("--out", snapshots_out, "Output path (default <output dir>/snapshots.txt)");
  snapshots_cmd->add_option("--trial", snapshots_trial, "Trial index selecting the random stream");

  std::string table_out;
  auto* table_cmd = app.add_subcommand("table1", "Half-power table of the pulse family (n = 1..6, f_c = 2..6 THz)");
  table_cmd->add_option("--out", table_out, "CSV path (default <output dir>/table1.csv)");

  auto* medium_cmd = app.add_subcommand("medium", "Absorption profile utilities");
  medium_cmd->require_subcommand(1);

  std::string inspect_source;
  auto* inspect_cmd = medium_cmd->add_subcommand("inspect", "Print range and k statistics of a profile");
  inspect_cmd->add_option("profile", inspect_source, "Profile file, vacuum, summer-air or constant:<k>")->required();

  std::string synth_kind, synth_out;
  double synth_min = 0.5, synth_max = 10.5, synth_step = 1.0;
  auto* synth_cmd = medium_cmd->add_subcommand("synth", "Write a synthetic profile");
  synth_cmd->add_option("kind", synth_kind, "vacuum, summer-air or constant:<k_per_m>")->required();
  synth_cmd->add_option("--out", synth_out, "Profile path")->required();
  synth_cmd->add_option("--min-thz", synth_min, "Lowest sample frequency")->capture_default_str();
  synth_cmd->add_option("--max-thz", synth_max, "Highest sample frequency")->capture_default_str();
  synth_cmd->add_option("--step-ghz", synth_step, "Sample spacing")->capture_default_str();

  std::vector<std::string> mix_parts;
  std::string mix_out;
  auto* mix_cmd = medium_cmd->add_subcommand("mix", "Mole-fraction weighted sum of profiles");
  mix_cmd->add_option("parts", mix_parts, "SOURCE@FRACTION, e.g. water.csv@0.02 or constant:2@0.5")->required();
  mix_cmd->add_option("--out", mix_out, "Profile path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*simulate_cmd) {
      simulate(sim);
    } else if (*spectrum_cmd) {
      const Config config = load(spectrum_config, spectrum_seed, std::nullopt);
      const fs::path out = spectrum_out.empty() ? default_output_dir() / "spectrum.csv" : fs::path(spectrum_out);
      ensure_parent(out);
      thz_spectrum* raw = nullptr;
      check(thz_compute_spectrum(config.get(), spectrum_trial, &raw));
      const Spectrum spectrum(raw);
      check(thz_spectrum_write_csv(spectrum.get(), out.string().c_str()));
      double doa = 0.0;
      check(thz_spectrum_estimate(spectrum.get(), 1, &doa));
      std::printf("estimate_deg=%.6f points=%zu wrote %s\n", doa, thz_spectrum_size(spectrum.get()),
                  out.string().c_str());
    } else if (*snapshots_cmd) {
      const Config config = load(snapshots_config, std::nullopt, std::nullopt);
      const fs::path out = snapshots_out.empty() ? default_output_dir() / "snapshots.txt" : fs::path(snapshots_out);
      ensure_parent(out);
      check(thz_dump_snapshots(config.get(), snapshots_trial, out.string().c_str()));
      std::printf("wrote %s\n", out.string().c_str());
    } else if (*table_cmd) {
      const fs::path out = table_out.empty() ? default_output_dir() / "table1.csv" : fs::path(table_out);
      ensure_parent(out);
      check(thz_write_table1_csv(out.string().c_str()));
      std::printf("wrote %s\n", out.string().c_str());
    } else if (*inspect_cmd) {
      const Profile p = profile_from(inspect_source);
      thz_profile_stats st{};
      check(thz_profile_get_stats(p.get(), &st));
      std::printf("name            %s\n", thz_profile_name(p.get()));
      std::printf("samples         %zu\n", st.samples);
      std::printf("min_freq_thz    %.6g\n", st.min_frequency_hz / 1e12);
      std::printf("max_freq_thz    %.6g\n", st.max_frequency_hz / 1e12);
      std::printf("min_k_per_m     %.6g\n", st.min_k_per_m);
      std::printf("max_k_per_m     %.6g\n", st.max_k_per_m);
      std::printf("mean_k_per_m    %.6g\n", st.mean_k_per_m);
    } else if (*synth_cmd) {
      thz_profile* raw = nullptr;
      check(thz_profile_synth(synth_kind.c_str(), synth_min * 1e12, synth_max * 1e12, synth_step * 1e9, &raw));
      const Profile p(raw);
      ensure_parent(synth_out);
      check(thz_profile_save(p.get(), synth_out.c_str()));
      std::printf("wrote %s\n", synth_out.c_str());
    } else if (*mix_cmd) {
      std::vector<Profile> owned;
      std::vector<const thz_profile*> parts;
      std::vector<double> fractions;
      for (const auto& spec : mix_parts) {
        const auto at = spec.rfind('@');
        if (at == std::string::npos) throw Failure(THZ_ERR_INVALID_ARGUMENT, "mix part '" + spec + "' lacks @FRACTION");
        std::size_t used = 0;
        double x = 0.0;
        try {
          x = std::stod(spec.substr(at + 1), &used);
        } catch (const std::exception&) {
          used = 0;
        }
        if (used == 0 || used != spec.size() - at - 1) {
          throw Failure(THZ_ERR_INVALID_ARGUMENT, "mix part '" + spec + "': bad mole fraction");
        }
        owned.push_back(profile_from(spec.substr(0, at)));
        parts.push_back(owned.back().get());
        fractions.push_back(x);
      }
      thz_profile* raw = nullptr;
      check(thz_profile_mix(parts.data(), fractions.data(), parts.size(), &raw));
      const Profile p(raw);
      ensure_parent(mix_out);
      check(thz_profile_save(p.get(), mix_out.c_str()));
      std::printf("wrote %s\n", mix_out.c_str());
    }
  } catch (const Failure& e) {
    std::fprintf(stderr, "thzdoa: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "thzdoa: %s\n", e.what());
    return 1;
  }
  return 0;
}
