// Copyright 2026 The pejkit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Configuration files in JSON or a flat TOML subset (sections, `key =
// value`, strings, numbers, booleans, arrays of scalars). Keys mirror the
// config struct fields. Distill and power settings may live at the root or
// under [distill] / [power] sections; scenarios at the root or [scenario].

#ifndef PEJKIT_CONFIG_IO_HPP
#define PEJKIT_CONFIG_IO_HPP

#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "pejkit/distiller.hpp"
#include "pejkit/error.hpp"
#include "pejkit/gaitsynth.hpp"
#include "pejkit/metrics.hpp"
#include "pejkit/textio.hpp"

namespace pejkit {

namespace detail {

inline nlohmann::json toml_scalar(std::string_view raw, const std::string& origin, std::size_t line_no) {
  const std::string_view v = trim(raw);
  if (v.empty()) {
    throw Error(ErrorKind::kSchema, origin + ": empty value at line " + std::to_string(line_no));
  }
  if (v.front() == '"') {
    if (v.size() < 2 || v.back() != '"') {
      throw Error(ErrorKind::kSchema, origin + ": unterminated string at line " + std::to_string(line_no));
    }
    return std::string(v.substr(1, v.size() - 2));
  }
  if (v == "true") return true;
  if (v == "false") return false;
  std::uint64_t u = 0;
  if (parse_u64(v, u)) return u;
  double d = 0.0;
  if (parse_double(v, d)) return d;
  throw Error(ErrorKind::kSchema,
              origin + ": cannot parse value '" + std::string(v) + "' at line " + std::to_string(line_no));
}

inline nlohmann::json parse_toml_lite(const std::string& text, const std::string& origin) {
  nlohmann::json root = nlohmann::json::object();
  nlohmann::json* cursor = &root;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string::npos) eol = text.size();
    std::string_view line(text.data() + pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    // Strip comments outside quotes.
    bool in_string = false;
    std::size_t cut = line.size();
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '"') in_string = !in_string;
      if (line[i] == '#' && !in_string) {
        cut = i;
        break;
      }
    }
    line = trim(line.substr(0, cut));
    if (line.empty()) {
      if (eol == text.size()) break;
      continue;
    }
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw Error(ErrorKind::kSchema, origin + ": malformed section at line " + std::to_string(line_no));
      }
      cursor = &root;
      for (const auto part : split(trim(line.substr(1, line.size() - 2)), '.')) {
        cursor = &(*cursor)[std::string(trim(part))];
        if (!cursor->is_object()) *cursor = nlohmann::json::object();
      }
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorKind::kSchema, origin + ": expected 'key = value' at line " + std::to_string(line_no));
    }
    std::string key(trim(line.substr(0, eq)));
    if (!key.empty() && key.front() == '"' && key.back() == '"') key = key.substr(1, key.size() - 2);
    if (key.empty()) {
      throw Error(ErrorKind::kSchema, origin + ": empty key at line " + std::to_string(line_no));
    }
    const std::string_view value = trim(line.substr(eq + 1));
    if (!value.empty() && value.front() == '[') {
      if (value.back() != ']') {
        throw Error(ErrorKind::kSchema, origin + ": unterminated array at line " + std::to_string(line_no));
      }
      nlohmann::json arr = nlohmann::json::array();
      const std::string_view inner = trim(value.substr(1, value.size() - 2));
      if (!inner.empty()) {
        for (const auto item : split(inner, ',')) {
          arr.push_back(toml_scalar(item, origin, line_no));
        }
      }
      (*cursor)[key] = arr;
    } else {
      (*cursor)[key] = toml_scalar(value, origin, line_no);
    }
    if (eol == text.size()) break;
  }
  return root;
}

inline void check_known_keys(const nlohmann::json& obj, const std::set<std::string>& allowed,
                             const std::string& origin) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!allowed.count(it.key())) {
      throw Error(ErrorKind::kUsage, origin + ": unknown config key '" + it.key() + "'");
    }
  }
}

inline double get_number(const nlohmann::json& obj, const std::string& key, double fallback,
                         const std::string& origin) {
  if (!obj.contains(key)) return fallback;
  if (!obj.at(key).is_number()) {
    throw Error(ErrorKind::kUsage, origin + ": '" + key + "' must be a number");
  }
  return obj.at(key).get<double>();
}

inline std::uint64_t get_u64(const nlohmann::json& obj, const std::string& key, std::uint64_t fallback,
                             const std::string& origin) {
  if (!obj.contains(key)) return fallback;
  if (!obj.at(key).is_number()) {
    throw Error(ErrorKind::kUsage, origin + ": '" + key + "' must be a number");
  }
  return obj.at(key).get<std::uint64_t>();
}

inline const std::set<std::string>& distill_keys() {
  static const std::set<std::string> keys = {
      "n_bins",    "tail_trim_fraction",   "batch_fraction",  "learning_rate", "momentum",
      "tau_cap",   "max_iters",            "rel_tol",         "online_update_period",
      "buffer_capacity", "rng_seed",
  };
  return keys;
}

inline const std::set<std::string>& power_keys() {
  static const std::set<std::string> keys = {"v_floor", "window", "included_groups"};
  return keys;
}

inline const std::set<std::string>& scenario_keys() {
  static const std::set<std::string> keys = {
      "kind",      "spring_k",   "amplitude", "omega",      "pendulum_mgl", "feedforward",
      "noise_std", "n_joints",   "duration",  "dt",         "base_speed",   "cmd_speed",
      "robot_mass", "gravity",   "rng_seed",
  };
  return keys;
}

}  // namespace detail

// Parses a .toml (flat subset) or .json file into a JSON object.
inline nlohmann::json load_structured_file(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  if (path.extension() == ".toml") {
    return detail::parse_toml_lite(text, path.string());
  }
  return detail::parse_json_text(text, path.string());
}

inline DistillConfig distill_config_from_json(const nlohmann::json& root, const std::string& origin) {
  const nlohmann::json& obj = root.contains("distill") ? root.at("distill") : root;
  if (&obj == &root) {
    // Flat files may mix distill, power and section keys.
    std::set<std::string> allowed = detail::distill_keys();
    allowed.insert(detail::power_keys().begin(), detail::power_keys().end());
    allowed.insert({"distill", "power", "scenario"});
    detail::check_known_keys(obj, allowed, origin);
  } else {
    detail::check_known_keys(obj, detail::distill_keys(), origin);
  }
  DistillConfig cfg;
  cfg.n_bins = static_cast<std::size_t>(detail::get_u64(obj, "n_bins", cfg.n_bins, origin));
  cfg.tail_trim_fraction = detail::get_number(obj, "tail_trim_fraction", cfg.tail_trim_fraction, origin);
  cfg.batch_fraction = detail::get_number(obj, "batch_fraction", cfg.batch_fraction, origin);
  cfg.learning_rate = detail::get_number(obj, "learning_rate", cfg.learning_rate, origin);
  cfg.momentum = detail::get_number(obj, "momentum", cfg.momentum, origin);
  cfg.tau_cap = detail::get_number(obj, "tau_cap", cfg.tau_cap, origin);
  cfg.max_iters = static_cast<std::size_t>(detail::get_u64(obj, "max_iters", cfg.max_iters, origin));
  cfg.rel_tol = detail::get_number(obj, "rel_tol", cfg.rel_tol, origin);
  cfg.online_update_period = static_cast<std::size_t>(
      detail::get_u64(obj, "online_update_period", cfg.online_update_period, origin));
  cfg.buffer_capacity =
      static_cast<std::size_t>(detail::get_u64(obj, "buffer_capacity", cfg.buffer_capacity, origin));
  cfg.rng_seed = detail::get_u64(obj, "rng_seed", cfg.rng_seed, origin);
  cfg.validate();
  return cfg;
}

inline PowerConfig power_config_from_json(const nlohmann::json& root, const std::string& origin) {
  const nlohmann::json& obj = root.contains("power") ? root.at("power") : root;
  if (&obj != &root) detail::check_known_keys(obj, detail::power_keys(), origin);
  PowerConfig cfg;
  cfg.v_floor = detail::get_number(obj, "v_floor", cfg.v_floor, origin);
  cfg.window = static_cast<std::size_t>(detail::get_u64(obj, "window", cfg.window, origin));
  if (obj.contains("included_groups")) {
    if (!obj.at("included_groups").is_array()) {
      throw Error(ErrorKind::kUsage, origin + ": 'included_groups' must be an array of strings");
    }
    cfg.included_groups.clear();
    for (const auto& e : obj.at("included_groups")) {
      if (!e.is_string()) {
        throw Error(ErrorKind::kUsage, origin + ": 'included_groups' must be an array of strings");
      }
      cfg.included_groups.insert(e.get<std::string>());
    }
  }
  cfg.validate();
  return cfg;
}

inline GaitScenario scenario_from_json(const nlohmann::json& root, const std::string& origin) {
  const nlohmann::json& obj = root.contains("scenario") ? root.at("scenario") : root;
  detail::check_known_keys(obj, detail::scenario_keys(), origin);
  GaitScenario s;
  if (!obj.contains("kind") || !obj.at("kind").is_string()) {
    throw Error(ErrorKind::kUsage, origin + ": scenario needs a string 'kind'");
  }
  s.kind = gait_kind_from_string(obj.at("kind").get<std::string>());
  s.spring_k = detail::get_number(obj, "spring_k", s.spring_k, origin);
  s.amplitude = detail::get_number(obj, "amplitude", s.amplitude, origin);
  s.omega = detail::get_number(obj, "omega", s.omega, origin);
  s.pendulum_mgl = detail::get_number(obj, "pendulum_mgl", s.pendulum_mgl, origin);
  s.feedforward = detail::get_number(obj, "feedforward", s.feedforward, origin);
  s.noise_std = detail::get_number(obj, "noise_std", s.noise_std, origin);
  s.n_joints = static_cast<std::size_t>(detail::get_u64(obj, "n_joints", s.n_joints, origin));
  s.duration = detail::get_number(obj, "duration", s.duration, origin);
  s.dt = detail::get_number(obj, "dt", s.dt, origin);
  s.base_speed = detail::get_number(obj, "base_speed", s.base_speed, origin);
  s.cmd_speed = detail::get_number(obj, "cmd_speed", s.cmd_speed, origin);
  s.robot_mass = detail::get_number(obj, "robot_mass", s.robot_mass, origin);
  s.gravity = detail::get_number(obj, "gravity", s.gravity, origin);
  s.rng_seed = detail::get_u64(obj, "rng_seed", s.rng_seed, origin);
  s.validate();
  return s;
}

inline nlohmann::json to_json(const DistillConfig& cfg) {
  nlohmann::json j;
  j["n_bins"] = cfg.n_bins;
  j["tail_trim_fraction"] = cfg.tail_trim_fraction;
  j["batch_fraction"] = cfg.batch_fraction;
  j["learning_rate"] = cfg.learning_rate;
  j["momentum"] = cfg.momentum;
  j["tau_cap"] = cfg.tau_cap;
  j["max_iters"] = cfg.max_iters;
  j["rel_tol"] = cfg.rel_tol;
  j["online_update_period"] = cfg.online_update_period;
  j["buffer_capacity"] = cfg.buffer_capacity;
  j["rng_seed"] = cfg.rng_seed;
  return j;
}

inline nlohmann::json to_json(const PowerConfig& cfg) {
  nlohmann::json j;
  j["v_floor"] = cfg.v_floor;
  j["window"] = cfg.window;
  j["included_groups"] = std::vector<std::string>(cfg.included_groups.begin(), cfg.included_groups.end());
  return j;
}

inline nlohmann::json to_json(const GaitScenario& s) {
  nlohmann::json j;
  j["kind"] = to_string(s.kind);
  j["spring_k"] = s.spring_k;
  j["amplitude"] = s.amplitude;
  j["omega"] = s.omega;
  j["pendulum_mgl"] = s.pendulum_mgl;
  j["feedforward"] = s.feedforward;
  j["noise_std"] = s.noise_std;
  j["n_joints"] = s.n_joints;
  j["duration"] = s.duration;
  j["dt"] = s.dt;
  j["base_speed"] = s.base_speed;
  j["cmd_speed"] = s.cmd_speed;
  j["robot_mass"] = s.robot_mass;
  j["gravity"] = s.gravity;
  j["rng_seed"] = s.rng_seed;
  return j;
}

inline std::string config_hash(const nlohmann::json& j) {
  const std::string dump = j.dump();
  std::uint64_t h = 1469598103934665603ull;
  for (const char c : dump) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  }
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace pejkit

#endif  // PEJKIT_CONFIG_IO_HPP
