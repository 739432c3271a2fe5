#include "thzdoa/manifest.hpp"

#include <ctime>
#include <fstream>

#include <json.hpp>

#include "thzdoa/error.hpp"

namespace thzdoa {

std::string tool_version() { return THZDOA_VERSION; }

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &utc);
  return buf;
}

std::string manifest_json(const RunManifest& m) {
  const nlohmann::ordered_json j = {
      {"tool_version", m.tool_version}, {"timestamp", m.timestamp},          {"config_path", m.config_path},
      {"output_dir", m.output_dir},     {"resolved_config", m.resolved_config}, {"outputs", m.outputs},
  };
  return j.dump(2) + "\n";
}

RunManifest parse_manifest_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    RunManifest m;
    j.at("tool_version").get_to(m.tool_version);
    j.at("timestamp").get_to(m.timestamp);
    j.at("config_path").get_to(m.config_path);
    j.at("output_dir").get_to(m.output_dir);
    j.at("resolved_config").get_to(m.resolved_config);
    j.at("outputs").get_to(m.outputs);
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("manifest: ") + e.what());
  }
}

void write_manifest(const RunManifest& manifest, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << manifest_json(manifest);
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

}  // namespace thzdoa
