#include "thzdoa/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "thzdoa/constants.hpp"
#include "thzdoa/error.hpp"

namespace thzdoa {

namespace {

namespace pt = boost::property_tree;

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"scenario", {"doa_deg", "distance_m", "snapshots"}},
      {"pulse", {"order", "fc_thz", "energy_aj"}},
      {"array", {"elements", "spacing_um", "f_start_thz", "bandwidth_thz", "observation_ps"}},
      {"medium", {"profile", "antenna_center_thz", "temperature_k", "background_noise", "noise"}},
      {"estimator", {"angle_min_deg", "angle_max_deg", "angle_step_deg", "refine", "source_count"}},
      {"sweep", {"axis", "values"}},
      {"run", {"runs", "seed", "threads"}},
  };
  return keys;
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  return s.substr(first, s.find_last_not_of(" \t\r") - first + 1);
}

class Reader {
 public:
  explicit Reader(const pt::ptree& tree) : tree_(tree) {}

  const std::string* raw(const std::string& section, const std::string& key) const {
    const auto sec = tree_.find(section);
    if (sec == tree_.not_found()) return nullptr;
    const auto it = sec->second.find(key);
    if (it == sec->second.not_found()) return nullptr;
    return &it->second.data();
  }

  void real(const std::string& section, const std::string& key, double& out, double scale = 1.0) const {
    if (const auto* text = raw(section, key)) out = from_unit(parse_real(section + "." + key, *text), scale);
  }

  template <typename Int>
  void integer(const std::string& section, const std::string& key, Int& out) const {
    const auto* text = raw(section, key);
    if (!text) return;
    const std::string v = trim(*text);
    long long parsed = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), parsed);
    if (ec != std::errc{} || ptr != v.data() + v.size()) bad(section + "." + key, "an integer", *text);
    if constexpr (std::is_unsigned_v<Int>) {
      if (parsed < 0) bad(section + "." + key, "a non-negative integer", *text);
    }
    out = static_cast<Int>(parsed);
  }

  void seed(const std::string& section, const std::string& key, std::uint64_t& out) const {
    const auto* text = raw(section, key);
    if (!text) return;
    const std::string v = trim(*text);
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size()) bad(section + "." + key, "an unsigned 64-bit integer", *text);
  }

  void boolean(const std::string& section, const std::string& key, bool& out) const {
    const auto* text = raw(section, key);
    if (!text) return;
    const std::string v = trim(*text);
    if (v == "true" || v == "on" || v == "yes" || v == "1") {
      out = true;
    } else if (v == "false" || v == "off" || v == "no" || v == "0") {
      out = false;
    } else {
      bad(section + "." + key, "on/off", *text);
    }
  }

  static double parse_real(const std::string& field, const std::string& text) {
    std::string v = trim(text);
    if (!v.empty() && v.front() == '+') v.erase(0, 1);
    double out = 0.0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size() || !std::isfinite(out)) bad(field, "a finite number", text);
    return out;
  }

  [[noreturn]] static void bad(const std::string& field, const std::string& expected, const std::string& got) {
    throw ParseError(field + ": expected " + expected + ", got '" + got + "'");
  }

 private:
  const pt::ptree& tree_;
};

// Shortest decimal d with d * unit == v exactly, so the snapshot reparses bit-identically.
std::string in_unit(double v, double unit) {
  for (int digits = 1; digits <= 17; ++digits) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.*g", digits, to_unit(v, unit));
    if (from_unit(std::strtod(buf, nullptr), unit) == v) return buf;
  }
  return format_number(to_unit(v, unit));
}

}  // namespace

ExperimentConfig parse_config(std::istream& in, const std::filesystem::path& base_dir) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ParseError("config: " + e.message(), e.line());
  }

  for (const auto& [section, body] : tree) {
    const auto known = known_keys().find(section);
    if (known == known_keys().end()) {
      if (body.empty()) throw ParseError("config: key '" + section + "' must be inside a section");
      throw ParseError("config: unknown section [" + section + "]");
    }
    for (const auto& [key, value] : body) {
      if (!known->second.contains(key)) throw ParseError("config: unknown key '" + section + "." + key + "'");
    }
  }

  ExperimentConfig c;
  const Reader r(tree);
  r.real("scenario", "doa_deg", c.scenario.doa_deg);
  r.real("scenario", "distance_m", c.scenario.distance_m);
  r.integer("scenario", "snapshots", c.scenario.snapshots);

  r.integer("pulse", "order", c.pulse.order);
  r.real("pulse", "fc_thz", c.pulse.fc_hz, kTera);
  r.real("pulse", "energy_aj", c.pulse.energy_j, kAtto);

  r.integer("array", "elements", c.array.geometry.element_count);
  r.real("array", "spacing_um", c.array.geometry.spacing_m, kMicro);
  r.real("array", "f_start_thz", c.array.f_start_hz, kTera);
  r.real("array", "bandwidth_thz", c.array.bandwidth_hz, kTera);
  r.real("array", "observation_ps", c.array.observation_s, kPico);

  if (const auto* p = r.raw("medium", "profile")) c.medium.profile = trim(*p);
  if (const auto* a = r.raw("medium", "antenna_center_thz"); a && trim(*a) == "pulse") {
    c.medium.antenna_center_hz = 0.0;
  } else {
    r.real("medium", "antenna_center_thz", c.medium.antenna_center_hz, kTera);
  }
  r.real("medium", "temperature_k", c.medium.temperature_k);
  if (const auto* b = r.raw("medium", "background_noise")) {
    const auto v = trim(*b);
    if (v == "saturated") {
      c.medium.background = BackgroundNoiseForm::saturated;
    } else if (v == "finite") {
      c.medium.background = BackgroundNoiseForm::finite_distance;
    } else {
      Reader::bad("medium.background_noise", "saturated or finite", *b);
    }
  }
  r.boolean("medium", "noise", c.medium.noise);

  r.real("estimator", "angle_min_deg", c.estimator.angles.min_deg);
  r.real("estimator", "angle_max_deg", c.estimator.angles.max_deg);
  r.real("estimator", "angle_step_deg", c.estimator.angles.step_deg);
  r.boolean("estimator", "refine", c.estimator.refine);
  r.integer("estimator", "source_count", c.estimator.source_count);

  if (const auto* a = r.raw("sweep", "axis")) {
    const auto axis = parse_sweep_axis(trim(*a));
    if (!axis) Reader::bad("sweep.axis", "one of none, distance_m, energy_aj, snapshots, order, fc_thz, doa_deg", *a);
    c.sweep.axis = *axis;
  }
  if (const auto* v = r.raw("sweep", "values")) {
    std::stringstream list(*v);
    std::string item;
    while (std::getline(list, item, ',')) {
      if (trim(item).empty()) continue;
      c.sweep.values.push_back(Reader::parse_real("sweep.values", item));
    }
  }

  r.integer("run", "runs", c.run.runs);
  r.seed("run", "seed", c.run.seed);
  r.integer("run", "threads", c.run.threads);

  if (c.array.geometry.spacing_m > 0.0 && c.array.observation_s > 0.0) {
    resolve_medium(c, base_dir);
    const auto& p = c.medium.profile;
    if (p != "summer-air" && p != "vacuum" && !p.starts_with("constant:")) {
      c.medium.profile = std::filesystem::absolute(base_dir / p).lexically_normal().string();
    }
  }
  validate(c);
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path.string() + "'");
  try {
    return parse_config(in, path.parent_path());
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

std::string resolved_config_text(const ExperimentConfig& c) {
  std::ostringstream out;
  const auto n = [](double v) { return format_number(v); };
  out << "[scenario]\n"
      << "doa_deg = " << n(c.scenario.doa_deg) << '\n'
      << "distance_m = " << n(c.scenario.distance_m) << '\n'
      << "snapshots = " << c.scenario.snapshots << "\n\n";
  out << "[pulse]\n"
      << "order = " << c.pulse.order << '\n'
      << "fc_thz = " << in_unit(c.pulse.fc_hz, kTera) << '\n'
      << "energy_aj = " << in_unit(c.pulse.energy_j, kAtto) << "\n\n";
  out << "[array]\n"
      << "elements = " << c.array.geometry.element_count << '\n'
      << "spacing_um = " << in_unit(c.array.geometry.spacing_m, kMicro) << '\n'
      << "f_start_thz = " << in_unit(c.array.f_start_hz, kTera) << '\n'
      << "bandwidth_thz = " << in_unit(c.array.bandwidth_hz, kTera) << '\n'
      << "observation_ps = " << in_unit(c.array.observation_s, kPico) << "\n\n";
  out << "[medium]\n"
      << "profile = " << c.medium.profile << '\n'
      << "antenna_center_thz = "
      << (c.medium.antenna_center_hz > 0.0 ? in_unit(c.medium.antenna_center_hz, kTera) : std::string("pulse")) << '\n'
      << "temperature_k = " << n(c.medium.temperature_k) << '\n'
      << "background_noise = " << (c.medium.background == BackgroundNoiseForm::saturated ? "saturated" : "finite")
      << '\n'
      << "noise = " << (c.medium.noise ? "on" : "off") << "\n\n";
  out << "[estimator]\n"
      << "angle_min_deg = " << n(c.estimator.angles.min_deg) << '\n'
      << "angle_max_deg = " << n(c.estimator.angles.max_deg) << '\n'
      << "angle_step_deg = " << n(c.estimator.angles.step_deg) << '\n'
      << "refine = " << (c.estimator.refine ? "true" : "false") << '\n'
      << "source_count = " << c.estimator.source_count << "\n\n";
  out << "[sweep]\n"
      << "axis = " << to_string(c.sweep.axis) << '\n'
      << "values = ";
  for (std::size_t i = 0; i < c.sweep.values.size(); ++i) out << (i ? ", " : "") << n(c.sweep.values[i]);
  out << "\n\n";
  out << "[run]\n"
      << "runs = " << c.run.runs << '\n'
      << "seed = " << c.run.seed << '\n'
      << "threads = " << c.run.threads << '\n';
  return out.str();
}

}  // namespace thzdoa
