#ifndef THZDOA_THZDOA_H
#define THZDOA_THZDOA_H

#include <stddef.h>
#include <stdint.h>

#if defined(THZDOA_BUILDING_LIBRARY)
#define THZ_API __attribute__((visibility("default")))
#else
#define THZ_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum thz_status {
  THZ_OK = 0,
  THZ_ERR_INVALID_ARGUMENT = 1,
  THZ_ERR_PARSE = 2,
  THZ_ERR_IO = 3,
  THZ_ERR_OUT_OF_RANGE = 4,
  THZ_ERR_INTERNAL = 5
} thz_status;

/* Message of the last failing call on this thread; "" after a success. */
THZ_API const char* thz_last_error(void);
THZ_API const char* thz_status_name(thz_status status);
THZ_API const char* thz_version(void);

/* Strings returned through char** are owned by the caller. */
THZ_API void thz_string_free(char* s);

typedef struct thz_config thz_config;

THZ_API thz_status thz_config_load(const char* path, thz_config** out);
THZ_API thz_status thz_config_parse(const char* text, const char* base_dir, thz_config** out);
/* Rebuilds the configuration recorded in a run manifest. */
THZ_API thz_status thz_config_from_manifest(const char* manifest_path, thz_config** out);
THZ_API void thz_config_free(thz_config* config);
THZ_API thz_status thz_config_set_seed(thz_config* config, uint64_t seed);
THZ_API thz_status thz_config_set_threads(thz_config* config, unsigned threads);
THZ_API thz_status thz_config_resolved_text(const thz_config* config, char** out);

typedef struct thz_rmse_point {
  double sweep_value; /* NaN without a sweep axis */
  double truth_deg;
  double rmse_deg;
  double stderr_deg;
  size_t n_run;
  uint64_t seed;
  double wall_time_s;
} thz_rmse_point;

typedef struct thz_sweep_result thz_sweep_result;

THZ_API thz_status thz_run_sweep(const thz_config* config, thz_sweep_result** out);
THZ_API void thz_sweep_result_free(thz_sweep_result* result);
THZ_API size_t thz_sweep_result_count(const thz_sweep_result* result);
THZ_API thz_status thz_sweep_result_point(const thz_sweep_result* result, size_t index, thz_rmse_point* out);
THZ_API thz_status thz_sweep_result_estimates(const thz_sweep_result* result, size_t index, const double** estimates,
                                              size_t* count);
THZ_API thz_status thz_sweep_result_write_rmse_csv(const thz_sweep_result* result, const char* path);
THZ_API thz_status thz_sweep_result_write_runs_csv(const thz_sweep_result* result, const char* path);

typedef struct thz_spectrum thz_spectrum;

/* IMUSIC spectrum of one trial (trial index selects the random stream). */
THZ_API thz_status thz_compute_spectrum(const thz_config* config, size_t trial, thz_spectrum** out);
THZ_API void thz_spectrum_free(thz_spectrum* spectrum);
THZ_API size_t thz_spectrum_size(const thz_spectrum* spectrum);
THZ_API thz_status thz_spectrum_point(const thz_spectrum* spectrum, size_t index, double* angle_deg, double* value);
THZ_API thz_status thz_spectrum_estimate(const thz_spectrum* spectrum, int refine, double* doa_deg);
THZ_API thz_status thz_spectrum_write_csv(const thz_spectrum* spectrum, const char* path);

/* Raw snapshot tensor of one trial: header `N K L f_start delta_f`, then `i k l re im` rows. */
THZ_API thz_status thz_dump_snapshots(const thz_config* config, size_t trial, const char* path);

/* Half-power table, n = 1..6 and f_c = 2..6 THz. */
THZ_API thz_status thz_write_table1_csv(const char* path);

typedef struct thz_profile thz_profile;

typedef struct thz_profile_stats {
  size_t samples;
  double min_frequency_hz;
  double max_frequency_hz;
  double min_k_per_m;
  double max_k_per_m;
  double mean_k_per_m; /* trapezoidal average over the frequency range */
} thz_profile_stats;

THZ_API thz_status thz_profile_load(const char* path, thz_profile** out);
/* kind: "vacuum", "constant:<k_per_m>" or "summer-air"; sampled on [min_hz, max_hz] with step_hz. */
THZ_API thz_status thz_profile_synth(const char* kind, double min_hz, double max_hz, double step_hz,
                                     thz_profile** out);
THZ_API thz_status thz_profile_mix(const thz_profile* const* parts, const double* mole_fractions, size_t count,
                                   thz_profile** out);
THZ_API void thz_profile_free(thz_profile* profile);
THZ_API thz_status thz_profile_save(const thz_profile* profile, const char* path);
THZ_API thz_status thz_profile_at(const thz_profile* profile, double frequency_hz, double* k_per_m);
THZ_API thz_status thz_profile_get_stats(const thz_profile* profile, thz_profile_stats* out);
THZ_API const char* thz_profile_name(const thz_profile* profile);

THZ_API thz_status thz_write_manifest(const thz_config* config, const char* config_path, const char* output_dir,
                                      const char* const* outputs, size_t output_count, const char* path);

#ifdef __cplusplus
}
#endif

#endif
