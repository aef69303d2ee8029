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

// Trajectory data model: per-joint torque-angle time series plus base
// velocities, recorded at a fixed control period. Logs are immutable after
// validation and safe for concurrent reads.

#ifndef PEJKIT_TRAJLOG_HPP
#define PEJKIT_TRAJLOG_HPP

#include <cmath>
#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "pejkit/error.hpp"

namespace pejkit {

// One timestep of one joint.
struct JointSample {
  double t = 0.0;     // s
  double q = 0.0;     // rad
  double qdot = 0.0;  // rad/s
  double tau = 0.0;   // N·m, total applied torque
};

// One timestep of the floating base.
struct BaseSample {
  double t = 0.0;       // s
  double vx = 0.0;      // m/s, actual planar velocity
  double vy = 0.0;      // m/s
  double vcmd_x = 0.0;  // m/s, commanded planar velocity
  double vcmd_y = 0.0;  // m/s
};

// Joints mapped to this label are skipped by distillation and excluded from
// the default power accounting.
inline constexpr const char* kExcludedGroup = "excluded";

struct TrajectoryLog {
  double dt = 0.05;          // s, control period
  double robot_mass = 15.0;  // kg
  double gravity = 9.81;     // m/s^2
  std::vector<std::string> joint_ids;
  std::map<std::string, std::string> group_map;  // joint name -> group label
  std::map<std::string, std::vector<JointSample>> samples;
  std::vector<BaseSample> base;
  std::vector<std::size_t> episode_boundaries;  // sample indices starting a new episode

  std::size_t n_steps() const { return base.size(); }

  // Group labels present in the log, sorted, "excluded" included.
  std::set<std::string> groups() const {
    std::set<std::string> out;
    for (const auto& [joint, group] : group_map) {
      (void)joint;
      out.insert(group);
    }
    return out;
  }

  std::vector<std::string> joints_in_group(const std::string& group) const {
    std::vector<std::string> out;
    for (const auto& joint : joint_ids) {
      auto it = group_map.find(joint);
      if (it != group_map.end() && it->second == group) out.push_back(joint);
    }
    return out;
  }

  void validate() const;
};

namespace detail {

inline void check_finite(double v, const std::string& what, std::size_t index) {
  if (!std::isfinite(v)) {
    throw Error(ErrorKind::kData,
                "non-finite " + what + " at sample " + std::to_string(index));
  }
}

}  // namespace detail

inline void TrajectoryLog::validate() const {
  if (joint_ids.empty()) throw Error(ErrorKind::kSchema, "log has no joints");
  if (!std::isfinite(dt) || dt <= 0.0) throw Error(ErrorKind::kSchema, "invalid control period dt");
  if (!std::isfinite(robot_mass) || robot_mass <= 0.0) throw Error(ErrorKind::kSchema, "invalid robot mass");
  if (!std::isfinite(gravity) || gravity <= 0.0) throw Error(ErrorKind::kSchema, "invalid gravity");

  const std::size_t n = base.size();
  if (n == 0) throw Error(ErrorKind::kSchema, "no samples");

  for (const auto& joint : joint_ids) {
    auto it = samples.find(joint);
    if (it == samples.end()) {
      throw Error(ErrorKind::kSchema, "joint '" + joint + "' has no sample series");
    }
    if (it->second.size() != n) {
      throw Error(ErrorKind::kSchema,
                  "joint '" + joint + "' series length " + std::to_string(it->second.size()) +
                      " does not match base series length " + std::to_string(n));
    }
    if (group_map.find(joint) == group_map.end()) {
      throw Error(ErrorKind::kSchema, "joint '" + joint + "' missing from group map");
    }
  }
  if (samples.size() != joint_ids.size()) {
    throw Error(ErrorKind::kSchema, "sample series present for a joint not listed in joint_ids");
  }

  for (std::size_t k = 0; k < n; ++k) {
    detail::check_finite(base[k].t, "base time", k);
    detail::check_finite(base[k].vx, "base vx", k);
    detail::check_finite(base[k].vy, "base vy", k);
    detail::check_finite(base[k].vcmd_x, "base vcmd_x", k);
    detail::check_finite(base[k].vcmd_y, "base vcmd_y", k);
  }
  for (const auto& joint : joint_ids) {
    const auto& series = samples.at(joint);
    for (std::size_t k = 0; k < n; ++k) {
      const JointSample& s = series[k];
      detail::check_finite(s.t, "time for joint '" + joint + "'", k);
      if (s.t < 0.0) {
        throw Error(ErrorKind::kData, "negative time for joint '" + joint + "' at sample " + std::to_string(k));
      }
      detail::check_finite(s.q, "q for joint '" + joint + "'", k);
      detail::check_finite(s.qdot, "qdot for joint '" + joint + "'", k);
      detail::check_finite(s.tau, "tau for joint '" + joint + "'", k);
    }
  }

  // Timestamp alignment: t_k = t_0 + k*dt within 1e-9 s, identical across series.
  const double t0 = base[0].t;
  for (std::size_t k = 0; k < n; ++k) {
    const double expected = t0 + static_cast<double>(k) * dt;
    if (std::abs(base[k].t - expected) > 1e-9) {
      throw Error(ErrorKind::kSchema, "misaligned base timestamp at sample " + std::to_string(k));
    }
    for (const auto& joint : joint_ids) {
      if (std::abs(samples.at(joint)[k].t - expected) > 1e-9) {
        throw Error(ErrorKind::kSchema,
                    "misaligned timestamp for joint '" + joint + "' at sample " + std::to_string(k));
      }
    }
  }

  std::size_t prev = 0;
  bool first = true;
  for (const std::size_t b : episode_boundaries) {
    if (!first && b <= prev) {
      throw Error(ErrorKind::kSchema, "episode boundaries not strictly increasing");
    }
    if (b >= n) throw Error(ErrorKind::kSchema, "episode boundary out of range");
    prev = b;
    first = false;
  }
}

// Concatenation of all samples of all joints in `group`, joint order first,
// then time. The shared curve of a symmetric pair is fitted on this pool.
inline std::vector<JointSample> pool_group(const TrajectoryLog& log, const std::string& group) {
  const auto joints = log.joints_in_group(group);
  if (joints.empty()) {
    throw Error(ErrorKind::kUsage, "unknown group '" + group + "'");
  }
  std::vector<JointSample> pooled;
  std::size_t total = 0;
  for (const auto& joint : joints) total += log.samples.at(joint).size();
  pooled.reserve(total);
  for (const auto& joint : joints) {
    const auto& series = log.samples.at(joint);
    pooled.insert(pooled.end(), series.begin(), series.end());
  }
  return pooled;
}

}  // namespace pejkit

#endif  // PEJKIT_TRAJLOG_HPP
