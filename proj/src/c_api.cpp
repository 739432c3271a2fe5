#include "thzdoa/thzdoa.h"

#include <charconv>
#include <algorithm>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <new>
#include <sstream>
#include <string>
#include <vector>

#include "thzdoa/config.hpp"
#include "thzdoa/error.hpp"
#include "thzdoa/experiment.hpp"
#include "thzdoa/manifest.hpp"
#include "thzdoa/medium.hpp"
#include "thzdoa/table1.hpp"

struct thz_config {
  thzdoa::ExperimentConfig config;
};

struct thz_sweep_result {
  std::vector<thzdoa::RmseReport> reports;
};

struct thz_spectrum {
  thzdoa::MusicSpectrum spectrum;
};

struct thz_profile {
  thzdoa::AbsorptionProfile profile;
};

namespace {

thread_local std::string g_last_error;

thz_status fail(thz_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

template <typename F>
thz_status guarded(F&& body) {
  try {
    body();
    g_last_error.clear();
    return THZ_OK;
  } catch (const thzdoa::ParseError& e) {
    return fail(THZ_ERR_PARSE, e.what());
  } catch (const thzdoa::IoError& e) {
    return fail(THZ_ERR_IO, e.what());
  } catch (const std::out_of_range& e) {
    return fail(THZ_ERR_OUT_OF_RANGE, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(THZ_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::bad_alloc&) {
    return fail(THZ_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(THZ_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(THZ_ERR_INTERNAL, "unknown error");
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw thzdoa::DomainError(what);
}

std::ofstream open_output(const char* path) {
  require(path != nullptr, "output path is null");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw thzdoa::IoError(std::string("cannot write '") + path + "'");
  return out;
}

void finish(std::ofstream& out, const char* path) {
  out.flush();
  if (!out) throw thzdoa::IoError(std::string("write failed for '") + path + "'");
}

char* copy_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

thzdoa::synthetic::Kind parse_kind(const std::string& kind) {
  if (kind == "vacuum") return thzdoa::synthetic::Vacuum{};
  if (kind == "summer-air") return thzdoa::summer_air_lines();
  if (kind.starts_with("constant:")) {
    const std::string v = kind.substr(9);
    double k = 0.0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), k);
    if (ec == std::errc{} && ptr == v.data() + v.size()) return thzdoa::synthetic::Constant{k};
  }
  throw thzdoa::DomainError("unknown synthetic kind '" + kind + "' (vacuum, constant:<k_per_m>, summer-air)");
}

}  // namespace

extern "C" {

const char* thz_last_error(void) { return g_last_error.c_str(); }

const char* thz_status_name(thz_status status) {
  switch (status) {
    case THZ_OK: return "ok";
    case THZ_ERR_INVALID_ARGUMENT: return "invalid argument";
    case THZ_ERR_PARSE: return "parse error";
    case THZ_ERR_IO: return "i/o error";
    case THZ_ERR_OUT_OF_RANGE: return "out of range";
    case THZ_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* thz_version(void) { return THZDOA_VERSION; }

void thz_string_free(char* s) { delete[] s; }

thz_status thz_config_load(const char* path, thz_config** out) {
  return guarded([&] {
    require(path && out, "null argument");
    *out = new thz_config{thzdoa::load_config(path)};
  });
}

thz_status thz_config_parse(const char* text, const char* base_dir, thz_config** out) {
  return guarded([&] {
    require(text && out, "null argument");
    std::istringstream in(text);
    *out = new thz_config{thzdoa::parse_config(in, base_dir ? base_dir : "")};
  });
}

thz_status thz_config_from_manifest(const char* manifest_path, thz_config** out) {
  return guarded([&] {
    require(manifest_path && out, "null argument");
    std::ifstream in(manifest_path, std::ios::binary);
    if (!in) throw thzdoa::IoError(std::string("cannot open manifest '") + manifest_path + "'");
    const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    const auto manifest = thzdoa::parse_manifest_json(text);
    std::istringstream config_text(manifest.resolved_config);
    *out = new thz_config{thzdoa::parse_config(config_text, std::filesystem::path(manifest_path).parent_path())};
  });
}

void thz_config_free(thz_config* config) { delete config; }

thz_status thz_config_set_seed(thz_config* config, uint64_t seed) {
  return guarded([&] {
    require(config, "null config");
    config->config.run.seed = seed;
  });
}

thz_status thz_config_set_threads(thz_config* config, unsigned threads) {
  return guarded([&] {
    require(config, "null config");
    config->config.run.threads = threads;
  });
}

thz_status thz_config_resolved_text(const thz_config* config, char** out) {
  return guarded([&] {
    require(config && out, "null argument");
    *out = copy_string(thzdoa::resolved_config_text(config->config));
  });
}

thz_status thz_run_sweep(const thz_config* config, thz_sweep_result** out) {
  return guarded([&] {
    require(config && out, "null argument");
    *out = new thz_sweep_result{thzdoa::sweep(config->config)};
  });
}

void thz_sweep_result_free(thz_sweep_result* result) { delete result; }

size_t thz_sweep_result_count(const thz_sweep_result* result) { return result ? result->reports.size() : 0; }

thz_status thz_sweep_result_point(const thz_sweep_result* result, size_t index, thz_rmse_point* out) {
  return guarded([&] {
    require(result && out, "null argument");
    const auto& r = result->reports.at(index);
    *out = thz_rmse_point{r.sweep_value, r.truth_deg, r.rmse_deg, r.stderr_deg, r.estimates_deg.size(), r.seed,
                          r.wall_time_s};
  });
}

thz_status thz_sweep_result_estimates(const thz_sweep_result* result, size_t index, const double** estimates,
                                      size_t* count) {
  return guarded([&] {
    require(result && estimates && count, "null argument");
    const auto& r = result->reports.at(index);
    *estimates = r.estimates_deg.data();
    *count = r.estimates_deg.size();
  });
}

thz_status thz_sweep_result_write_rmse_csv(const thz_sweep_result* result, const char* path) {
  return guarded([&] {
    require(result, "null result");
    auto out = open_output(path);
    thzdoa::write_rmse_csv(result->reports, out);
    finish(out, path);
  });
}

thz_status thz_sweep_result_write_runs_csv(const thz_sweep_result* result, const char* path) {
  return guarded([&] {
    require(result, "null result");
    auto out = open_output(path);
    thzdoa::write_runs_csv(result->reports, out);
    finish(out, path);
  });
}

thz_status thz_compute_spectrum(const thz_config* config, size_t trial, thz_spectrum** out) {
  return guarded([&] {
    require(config && out, "null argument");
    thzdoa::validate(config->config);
    *out = new thz_spectrum{thzdoa::trial_spectrum(config->config, trial)};
  });
}

void thz_spectrum_free(thz_spectrum* spectrum) { delete spectrum; }

size_t thz_spectrum_size(const thz_spectrum* spectrum) { return spectrum ? spectrum->spectrum.values.size() : 0; }

thz_status thz_spectrum_point(const thz_spectrum* spectrum, size_t index, double* angle_deg, double* value) {
  return guarded([&] {
    require(spectrum && angle_deg && value, "null argument");
    *angle_deg = spectrum->spectrum.angles_deg.at(index);
    *value = spectrum->spectrum.values.at(index);
  });
}

thz_status thz_spectrum_estimate(const thz_spectrum* spectrum, int refine, double* doa_deg) {
  return guarded([&] {
    require(spectrum && doa_deg, "null argument");
    *doa_deg = thzdoa::estimate_doa(spectrum->spectrum, refine != 0);
  });
}

thz_status thz_spectrum_write_csv(const thz_spectrum* spectrum, const char* path) {
  return guarded([&] {
    require(spectrum, "null spectrum");
    auto out = open_output(path);
    thzdoa::write_spectrum_csv(spectrum->spectrum, out);
    finish(out, path);
  });
}

thz_status thz_dump_snapshots(const thz_config* config, size_t trial, const char* path) {
  return guarded([&] {
    require(config, "null config");
    thzdoa::validate(config->config);
    const auto tensor = thzdoa::trial_snapshots(thzdoa::prepare(config->config), config->config, trial);
    auto out = open_output(path);
    tensor.dump(out);
    finish(out, path);
  });
}

thz_status thz_write_table1_csv(const char* path) {
  return guarded([&] {
    const auto rows = thzdoa::half_power_table();
    auto out = open_output(path);
    thzdoa::write_half_power_csv(rows, out);
    finish(out, path);
  });
}

thz_status thz_profile_load(const char* path, thz_profile** out) {
  return guarded([&] {
    require(path && out, "null argument");
    *out = new thz_profile{thzdoa::load_profile(path)};
  });
}

thz_status thz_profile_synth(const char* kind, double min_hz, double max_hz, double step_hz, thz_profile** out) {
  return guarded([&] {
    require(kind && out, "null argument");
    const std::string name = kind;
    auto base = thzdoa::synthetic_profile(parse_kind(name), thzdoa::SamplingRange{min_hz, max_hz, step_hz});
    const std::string label = name == "summer-air" ? "summer-air-synthetic" : name;
    *out = new thz_profile{thzdoa::AbsorptionProfile({base.samples().begin(), base.samples().end()}, label)};
  });
}

thz_status thz_profile_mix(const thz_profile* const* parts, const double* mole_fractions, size_t count,
                           thz_profile** out) {
  return guarded([&] {
    require(parts && mole_fractions && out, "null argument");
    std::vector<thzdoa::MixPart> mix;
    for (size_t i = 0; i < count; ++i) {
      require(parts[i] != nullptr, "null profile in mixture");
      mix.push_back({std::cref(parts[i]->profile), mole_fractions[i]});
    }
    *out = new thz_profile{thzdoa::mix_profiles(mix)};
  });
}

void thz_profile_free(thz_profile* profile) { delete profile; }

thz_status thz_profile_save(const thz_profile* profile, const char* path) {
  return guarded([&] {
    require(profile, "null profile");
    auto out = open_output(path);
    thzdoa::write_profile(profile->profile, out);
    finish(out, path);
  });
}

thz_status thz_profile_at(const thz_profile* profile, double frequency_hz, double* k_per_m) {
  return guarded([&] {
    require(profile && k_per_m, "null argument");
    *k_per_m = profile->profile.at(frequency_hz);
  });
}

thz_status thz_profile_get_stats(const thz_profile* profile, thz_profile_stats* out) {
  return guarded([&] {
    require(profile && out, "null argument");
    const auto s = profile->profile.samples();
    thz_profile_stats st{s.size(), s.front().frequency_hz, s.back().frequency_hz, s.front().k_per_m,
                         s.front().k_per_m, 0.0};
    double area = 0.0;
    for (size_t i = 0; i < s.size(); ++i) {
      st.min_k_per_m = std::min(st.min_k_per_m, s[i].k_per_m);
      st.max_k_per_m = std::max(st.max_k_per_m, s[i].k_per_m);
      if (i > 0) area += 0.5 * (s[i].k_per_m + s[i - 1].k_per_m) * (s[i].frequency_hz - s[i - 1].frequency_hz);
    }
    st.mean_k_per_m = area / (st.max_frequency_hz - st.min_frequency_hz);
    *out = st;
  });
}

const char* thz_profile_name(const thz_profile* profile) { return profile ? profile->profile.name().c_str() : ""; }

thz_status thz_write_manifest(const thz_config* config, const char* config_path, const char* output_dir,
                              const char* const* outputs, size_t output_count, const char* path) {
  return guarded([&] {
    require(config && path, "null argument");
    require(outputs || output_count == 0, "null output list");
    thzdoa::RunManifest m;
    m.config_path = config_path ? config_path : "";
    m.resolved_config = thzdoa::resolved_config_text(config->config);
    m.output_dir = output_dir ? output_dir : "";
    m.tool_version = thzdoa::tool_version();
    m.timestamp = thzdoa::utc_timestamp();
    for (size_t i = 0; i < output_count; ++i) m.outputs.emplace_back(outputs[i]);
    thzdoa::write_manifest(m, path);
  });
}

}  // extern "C"
