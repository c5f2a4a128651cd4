#pragma once

#include <array>
#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "fieldvision/error.hpp"
#include "fieldvision/pipeline.hpp"
#include "fieldvision/session.hpp"

namespace fieldvision {

/// Every tunable of the pipeline and the session simulator, with defaults.
/// Read from `key = value` text and overridable key by key.
struct RunConfig {
  int q_levels = 64;
  std::vector<Offset> offsets{{1, 0}, {0, 1}};
  double peak_frac = 0.05;
  int min_separation = 4;
  int min_region_area = 16;
  double eta = 0.1;
  double epsilon = 0.01;
  int k_points = 10;
  int suppression_radius = 16;
  double min_score = 0.1;
  int window_width = 640;
  int window_height = 480;
  double px_per_degree = 10.0;
  double inhibition_radius = 50.0;
  int max_steps = 20;
  bool parallel = false;

  static constexpr std::array<std::string_view, 15> kKeys = {
      "q_levels",   "offsets",          "peak_frac",         "min_separation", "min_region_area",
      "eta",        "epsilon",          "k_points",          "suppression_radius",
      "min_score",  "window",           "px_per_degree",     "inhibition_radius", "max_steps",
      "parallel"};

  void set(std::string_view key, std::string_view value);
  void validate() const;

  PipelineParams pipeline_params() const {
    PipelineParams p;
    p.segmentation = {q_levels, offsets, peak_frac, min_separation, min_region_area};
    p.extraction = {k_points, suppression_radius, min_score};
    p.parallel = parallel;
    return p;
  }

  SessionConfig session_config() const {
    SessionConfig s;
    s.window_width = window_width;
    s.window_height = window_height;
    s.px_per_degree = px_per_degree;
    s.inhibition_radius = inhibition_radius;
    s.max_steps = max_steps;
    s.pipeline = pipeline_params();
    return s;
  }

  FusionState fresh_fusion_state() const {
    return FusionState::fresh(kCanonicalFeatures.size(), eta, epsilon);
  }
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(std::string_view key, std::string_view text) {
  text = trim(text);
  T value{};
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || text.empty())
    throw ConfigError("invalid value '" + std::string(text) + "' for " + std::string(key));
  return value;
}

// "1,0;0,1"
inline std::vector<Offset> parse_offsets(std::string_view text) {
  std::vector<Offset> out;
  std::string s(trim(text));
  std::istringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ';')) {
    const auto comma = item.find(',');
    if (comma == std::string::npos) throw ConfigError("offset '" + item + "' must be dx,dy");
    out.push_back({parse_number<int>("offsets", std::string_view(item).substr(0, comma)),
                   parse_number<int>("offsets", std::string_view(item).substr(comma + 1))});
  }
  if (out.empty()) throw ConfigError("offsets must list at least one dx,dy pair");
  return out;
}

}  // namespace detail

inline void RunConfig::set(std::string_view key, std::string_view value) {
  using detail::parse_number;
  key = detail::trim(key);
  if (key == "q_levels") q_levels = parse_number<int>(key, value);
  else if (key == "offsets") offsets = detail::parse_offsets(value);
  else if (key == "peak_frac") peak_frac = parse_number<double>(key, value);
  else if (key == "min_separation") min_separation = parse_number<int>(key, value);
  else if (key == "min_region_area") min_region_area = parse_number<int>(key, value);
  else if (key == "eta") eta = parse_number<double>(key, value);
  else if (key == "epsilon") epsilon = parse_number<double>(key, value);
  else if (key == "k_points") k_points = parse_number<int>(key, value);
  else if (key == "suppression_radius") suppression_radius = parse_number<int>(key, value);
  else if (key == "min_score") min_score = parse_number<double>(key, value);
  else if (key == "window") {
    const std::string_view v = detail::trim(value);
    const auto x = v.find('x');
    if (x == std::string_view::npos) throw ConfigError("window must be WIDTHxHEIGHT");
    window_width = parse_number<int>(key, v.substr(0, x));
    window_height = parse_number<int>(key, v.substr(x + 1));
  } else if (key == "px_per_degree") px_per_degree = parse_number<double>(key, value);
  else if (key == "inhibition_radius") inhibition_radius = parse_number<double>(key, value);
  else if (key == "max_steps") max_steps = parse_number<int>(key, value);
  else if (key == "parallel") {
    const std::string_view v = detail::trim(value);
    if (v == "true" || v == "1") parallel = true;
    else if (v == "false" || v == "0") parallel = false;
    else throw ConfigError("parallel must be true or false");
  }
  else throw ConfigError("unknown configuration key '" + std::string(key) + "'");
}

inline void RunConfig::validate() const {
  auto check = [](bool ok, const char* what) {
    if (!ok) throw ConfigError(what);
  };
  check(q_levels >= 2 && q_levels <= 65536, "q_levels must be in [2, 65536]");
  check(!offsets.empty(), "offsets must be nonempty");
  for (const Offset& o : offsets) check(o.dx != 0 || o.dy != 0, "offsets must be nonzero");
  check(peak_frac > 0.0 && peak_frac < 1.0, "peak_frac must be in (0,1)");
  check(min_separation >= 1, "min_separation must be >= 1");
  check(min_region_area >= 1, "min_region_area must be >= 1");
  check(eta > 0.0 && eta <= 1.0, "eta must be in (0,1]");
  check(epsilon > 0.0, "epsilon must be positive");
  check(k_points >= 1, "k_points must be >= 1");
  check(suppression_radius >= 0, "suppression_radius must be >= 0");
  check(min_score >= 0.0 && min_score <= 1.0, "min_score must be in [0,1]");
  check(window_width >= 3 && window_height >= 3, "window must be at least 3x3");
  check(px_per_degree > 0.0, "px_per_degree must be positive");
  check(inhibition_radius >= 0.0, "inhibition_radius must be >= 0");
  check(max_steps >= 0, "max_steps must be >= 0");
}

/// Parses `key = value` lines; blank lines and `#` comments are ignored.
inline RunConfig parse_config(std::istream& in, RunConfig base = {}) {
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string_view v = detail::trim(line);
    if (v.empty()) continue;
    const auto eq = v.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    base.set(v.substr(0, eq), v.substr(eq + 1));
  }
  base.validate();
  return base;
}

inline RunConfig load_config(const std::string& path, RunConfig base = {}) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path + "'");
  return parse_config(in, std::move(base));
}

}  // namespace fieldvision
