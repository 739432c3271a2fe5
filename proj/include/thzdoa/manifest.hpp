#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace thzdoa {

struct RunManifest {
  std::string config_path;
  std::string resolved_config;  // full resolved_config_text snapshot
  std::string output_dir;
  std::string tool_version;
  std::string timestamp;  // UTC, ISO 8601
  std::vector<std::string> outputs;
};

std::string tool_version();
std::string utc_timestamp();

std::string manifest_json(const RunManifest& manifest);
RunManifest parse_manifest_json(const std::string& text);
void write_manifest(const RunManifest& manifest, const std::filesystem::path& path);

}  // namespace thzdoa
