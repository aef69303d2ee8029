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

// On-disk trajectory log formats.
//
// CSV layout, addressed by a path stem `<stem>`:
//   <stem>.csv           rows `t,joint,q,qdot,tau`, time-major
//   <stem>_base.csv      rows `t,vx,vy,vcmd_x,vcmd_y`
//   <stem>_manifest.json dt, robot_mass, gravity, joints, group_map,
//                        episode_boundaries
// JSON layout: a single file bundling all three parts.
//
// Numeric fields round-trip bit-identically (CSV uses 17 significant digits,
// JSON uses shortest exact decimal).

#ifndef PEJKIT_LOG_IO_HPP
#define PEJKIT_LOG_IO_HPP

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "pejkit/error.hpp"
#include "pejkit/textio.hpp"
#include "pejkit/trajlog.hpp"

namespace pejkit {

namespace detail {

inline nlohmann::json log_manifest_json(const TrajectoryLog& log) {
  nlohmann::json j;
  j["dt"] = log.dt;
  j["robot_mass"] = log.robot_mass;
  j["gravity"] = log.gravity;
  j["joints"] = log.joint_ids;
  j["group_map"] = log.group_map;
  j["episode_boundaries"] = log.episode_boundaries;
  return j;
}

inline void log_manifest_from_json(const nlohmann::json& j, const std::string& origin, TrajectoryLog& log) {
  log.dt = json_number(j, "dt", origin);
  log.robot_mass = json_number(j, "robot_mass", origin);
  log.gravity = json_number(j, "gravity", origin);
  if (!j.contains("joints") || !j.at("joints").is_array()) {
    throw Error(ErrorKind::kSchema, "missing 'joints' array in " + origin);
  }
  log.joint_ids = j.at("joints").get<std::vector<std::string>>();
  if (!j.contains("group_map") || !j.at("group_map").is_object()) {
    throw Error(ErrorKind::kSchema, "missing 'group_map' object in " + origin);
  }
  log.group_map = j.at("group_map").get<std::map<std::string, std::string>>();
  if (j.contains("episode_boundaries")) {
    log.episode_boundaries = j.at("episode_boundaries").get<std::vector<std::size_t>>();
  }
}

}  // namespace detail

inline void save_log(const TrajectoryLog& log, const std::filesystem::path& path, FileFormat format) {
  log.validate();

  if (format == FileFormat::kCsv) {
    const auto stem = detail::csv_stem(path);
    std::string joints_csv = "t,joint,q,qdot,tau\n";
    const std::size_t n = log.n_steps();
    for (std::size_t k = 0; k < n; ++k) {
      for (const auto& joint : log.joint_ids) {
        const JointSample& s = log.samples.at(joint)[k];
        joints_csv += format_double(s.t);
        joints_csv += ',';
        joints_csv += joint;
        joints_csv += ',';
        joints_csv += format_double(s.q);
        joints_csv += ',';
        joints_csv += format_double(s.qdot);
        joints_csv += ',';
        joints_csv += format_double(s.tau);
        joints_csv += '\n';
      }
    }
    write_text_file(detail::with_suffix(stem, ".csv"), joints_csv);

    std::string base_csv = "t,vx,vy,vcmd_x,vcmd_y\n";
    for (const BaseSample& b : log.base) {
      base_csv += format_double(b.t);
      base_csv += ',';
      base_csv += format_double(b.vx);
      base_csv += ',';
      base_csv += format_double(b.vy);
      base_csv += ',';
      base_csv += format_double(b.vcmd_x);
      base_csv += ',';
      base_csv += format_double(b.vcmd_y);
      base_csv += '\n';
    }
    write_text_file(detail::with_suffix(stem, "_base.csv"), base_csv);
    write_text_file(detail::with_suffix(stem, "_manifest.json"),
                    detail::log_manifest_json(log).dump(2) + "\n");
    return;
  }

  nlohmann::json j = detail::log_manifest_json(log);
  nlohmann::json cols;
  for (const auto& joint : log.joint_ids) {
    const auto& series = log.samples.at(joint);
    std::vector<double> t, q, qdot, tau;
    t.reserve(series.size());
    q.reserve(series.size());
    qdot.reserve(series.size());
    tau.reserve(series.size());
    for (const JointSample& s : series) {
      t.push_back(s.t);
      q.push_back(s.q);
      qdot.push_back(s.qdot);
      tau.push_back(s.tau);
    }
    cols[joint] = {{"t", t}, {"q", q}, {"qdot", qdot}, {"tau", tau}};
  }
  j["samples"] = cols;
  std::vector<double> bt, bvx, bvy, bcx, bcy;
  for (const BaseSample& b : log.base) {
    bt.push_back(b.t);
    bvx.push_back(b.vx);
    bvy.push_back(b.vy);
    bcx.push_back(b.vcmd_x);
    bcy.push_back(b.vcmd_y);
  }
  j["base"] = {{"t", bt}, {"vx", bvx}, {"vy", bvy}, {"vcmd_x", bcx}, {"vcmd_y", bcy}};
  write_text_file(path, j.dump() + "\n");
}

inline TrajectoryLog load_log(const std::filesystem::path& path, FileFormat format) {
  TrajectoryLog log;

  if (format == FileFormat::kCsv) {
    const auto stem = detail::csv_stem(path);
    const auto joints_path = detail::with_suffix(stem, ".csv");
    const auto base_path = detail::with_suffix(stem, "_base.csv");
    const auto manifest_path = detail::with_suffix(stem, "_manifest.json");

    const std::string manifest_text = read_text_file(manifest_path);
    detail::log_manifest_from_json(detail::parse_json_text(manifest_text, manifest_path.string()),
                                   manifest_path.string(), log);

    const std::string joints_text = read_text_file(joints_path);
    if (trim(joints_text).empty()) throw Error(ErrorKind::kSchema, "no samples");
    std::size_t line_no = 0;
    std::size_t pos = 0;
    bool saw_header = false;
    std::size_t rows = 0;
    while (pos < joints_text.size()) {
      std::size_t eol = joints_text.find('\n', pos);
      if (eol == std::string::npos) eol = joints_text.size();
      const std::string_view line = trim(std::string_view(joints_text).substr(pos, eol - pos));
      pos = eol + 1;
      ++line_no;
      if (line.empty()) continue;
      if (!saw_header) {
        if (line != "t,joint,q,qdot,tau") {
          throw Error(ErrorKind::kSchema,
                      joints_path.string() + ": bad header at line " + std::to_string(line_no));
        }
        saw_header = true;
        continue;
      }
      const auto fields = split(line, ',');
      if (fields.size() != 5) {
        throw Error(ErrorKind::kSchema,
                    joints_path.string() + ": expected 5 columns at line " + std::to_string(line_no));
      }
      JointSample s;
      const std::string joint(trim(fields[1]));
      if (!parse_double(trim(fields[0]), s.t) || !parse_double(trim(fields[2]), s.q) ||
          !parse_double(trim(fields[3]), s.qdot) || !parse_double(trim(fields[4]), s.tau)) {
        throw Error(ErrorKind::kSchema,
                    joints_path.string() + ": malformed number at line " + std::to_string(line_no));
      }
      if (log.group_map.find(joint) == log.group_map.end()) {
        throw Error(ErrorKind::kSchema,
                    joints_path.string() + ": unknown joint '" + joint + "' at line " + std::to_string(line_no));
      }
      log.samples[joint].push_back(s);
      ++rows;
    }
    if (rows == 0) throw Error(ErrorKind::kSchema, "no samples");

    const std::string base_text = read_text_file(base_path);
    line_no = 0;
    pos = 0;
    saw_header = false;
    while (pos < base_text.size()) {
      std::size_t eol = base_text.find('\n', pos);
      if (eol == std::string::npos) eol = base_text.size();
      const std::string_view line = trim(std::string_view(base_text).substr(pos, eol - pos));
      pos = eol + 1;
      ++line_no;
      if (line.empty()) continue;
      if (!saw_header) {
        if (line != "t,vx,vy,vcmd_x,vcmd_y") {
          throw Error(ErrorKind::kSchema,
                      base_path.string() + ": bad header at line " + std::to_string(line_no));
        }
        saw_header = true;
        continue;
      }
      const auto fields = split(line, ',');
      if (fields.size() != 5) {
        throw Error(ErrorKind::kSchema,
                    base_path.string() + ": expected 5 columns at line " + std::to_string(line_no));
      }
      BaseSample b;
      if (!parse_double(trim(fields[0]), b.t) || !parse_double(trim(fields[1]), b.vx) ||
          !parse_double(trim(fields[2]), b.vy) || !parse_double(trim(fields[3]), b.vcmd_x) ||
          !parse_double(trim(fields[4]), b.vcmd_y)) {
        throw Error(ErrorKind::kSchema,
                    base_path.string() + ": malformed number at line " + std::to_string(line_no));
      }
      log.base.push_back(b);
    }
    log.validate();
    return log;
  }

  const std::string text = read_text_file(path);
  if (trim(text).empty()) throw Error(ErrorKind::kSchema, "no samples");
  const nlohmann::json j = detail::parse_json_text(text, path.string());
  const std::string origin = path.string();
  detail::log_manifest_from_json(j, origin, log);
  if (!j.contains("samples") || !j.at("samples").is_object()) {
    throw Error(ErrorKind::kSchema, "missing 'samples' object in " + origin);
  }
  for (const auto& joint : log.joint_ids) {
    if (!j.at("samples").contains(joint)) {
      throw Error(ErrorKind::kSchema, "missing samples for joint '" + joint + "' in " + origin);
    }
    const auto& sj = j.at("samples").at(joint);
    const auto t = detail::json_column(sj, "t", origin);
    const auto q = detail::json_column(sj, "q", origin);
    const auto qdot = detail::json_column(sj, "qdot", origin);
    const auto tau = detail::json_column(sj, "tau", origin);
    if (q.size() != t.size() || qdot.size() != t.size() || tau.size() != t.size()) {
      throw Error(ErrorKind::kSchema, "ragged columns for joint '" + joint + "' in " + origin);
    }
    auto& series = log.samples[joint];
    series.resize(t.size());
    for (std::size_t k = 0; k < t.size(); ++k) series[k] = JointSample{t[k], q[k], qdot[k], tau[k]};
  }
  if (!j.contains("base") || !j.at("base").is_object()) {
    throw Error(ErrorKind::kSchema, "missing 'base' object in " + origin);
  }
  {
    const auto& bj = j.at("base");
    const auto t = detail::json_column(bj, "t", origin);
    const auto vx = detail::json_column(bj, "vx", origin);
    const auto vy = detail::json_column(bj, "vy", origin);
    const auto cx = detail::json_column(bj, "vcmd_x", origin);
    const auto cy = detail::json_column(bj, "vcmd_y", origin);
    if (vx.size() != t.size() || vy.size() != t.size() || cx.size() != t.size() || cy.size() != t.size()) {
      throw Error(ErrorKind::kSchema, "ragged base columns in " + origin);
    }
    log.base.resize(t.size());
    for (std::size_t k = 0; k < t.size(); ++k) log.base[k] = BaseSample{t[k], vx[k], vy[k], cx[k], cy[k]};
  }
  log.validate();
  return log;
}

}  // namespace pejkit

#endif  // PEJKIT_LOG_IO_HPP
