#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "thzdoa/experiment.hpp"

namespace thzdoa {

// INI-style scenario file. Sections and keys (units are part of the key name):
//
//   [scenario]  doa_deg, distance_m, snapshots
//   [pulse]     order, fc_thz, energy_aj
//   [array]     elements, spacing_um, f_start_thz, bandwidth_thz, observation_ps
//   [medium]    profile, antenna_center_thz (number or `pulse`), temperature_k, background_noise (saturated|finite), noise (on|off)
//   [estimator] angle_min_deg, angle_max_deg, angle_step_deg, refine, source_count
//   [sweep]     axis (none|distance_m|energy_aj|snapshots|order|fc_thz|doa_deg), values (comma separated)
//   [run]       runs, seed, threads
//
// Every key is optional; omitted keys keep the ExperimentConfig defaults. Unknown keys are errors.
// Relative profile paths resolve against base_dir. The result is validated.
ExperimentConfig parse_config(std::istream& in, const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);

// Every key written out explicitly; parse_config of this text yields the same experiment.
std::string resolved_config_text(const ExperimentConfig& config);

}  // namespace thzdoa
