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

// Energy and tracking metrics over trajectory logs.
//
// Power uses a zero-regeneration model: only positive mechanical work
// counts, negative-work intervals contribute nothing. Electrical losses are
// not modelled. Cost of transport divides the summed positive power of the
// accounted joints by weight times a floored, window-averaged projection of
// the base velocity onto the commanded direction.

#ifndef PEJKIT_METRICS_HPP
#define PEJKIT_METRICS_HPP

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "pejkit/error.hpp"
#include "pejkit/pejcurve.hpp"
#include "pejkit/textio.hpp"
#include "pejkit/trajlog.hpp"

namespace pejkit {

struct PowerConfig {
  double v_floor = 0.1;     // m/s, lower bound on the windowed velocity
  std::size_t window = 10;  // timesteps in the trailing velocity average
  // Group labels whose joints enter the power sums. An empty set means
  // every group except "excluded".
  std::set<std::string> included_groups = {"front-thigh", "rear-thigh", "front-calf", "rear-calf"};

  void validate() const {
    if (!(v_floor > 0.0) || !std::isfinite(v_floor)) {
      throw Error(ErrorKind::kUsage, "v_floor must be > 0");
    }
    if (window < 1) throw Error(ErrorKind::kUsage, "window must be >= 1");
  }
};

struct MetricsReport {
  double mean_positive_power_no_pej = 0.0;    // W
  double mean_positive_power_with_pej = 0.0;  // W
  double mean_cot = 0.0;
  double offload_ratio = 0.0;       // %
  double tracking_error_rms = 0.0;  // m/s
  std::map<std::string, double> per_joint_power;  // W, mean positive power as evaluated
  // Carried for cross-run comparisons.
  double robot_mass = 0.0;
  double gravity = 0.0;
  bool with_pej = false;
};

inline double positive_power(double tau, double qdot) {
  return std::max(0.0, tau * qdot);
}

// Actual base velocity projected onto the commanded direction, clamped at
// zero so backward motion earns no credit.
inline double scalar_velocity(const BaseSample& base) {
  const double norm = std::hypot(base.vcmd_x, base.vcmd_y);
  if (norm == 0.0) {
    throw Error(ErrorKind::kNumeric, "undefined command direction (zero commanded velocity)");
  }
  const double proj = (base.vx * base.vcmd_x + base.vy * base.vcmd_y) / norm;
  return std::max(0.0, proj);
}

// Trailing mean of the projected velocity over min(window, steps since
// episode start), floored at v_floor. The window never crosses an episode
// boundary.
inline std::vector<double> windowed_velocity(std::span<const BaseSample> series,
                                             const PowerConfig& cfg,
                                             std::span<const std::size_t> episode_boundaries) {
  cfg.validate();
  std::vector<double> out(series.size());
  std::size_t episode_start = 0;
  std::size_t next_boundary = 0;
  double acc = 0.0;
  std::vector<double> scalar(series.size());
  for (std::size_t k = 0; k < series.size(); ++k) scalar[k] = scalar_velocity(series[k]);
  for (std::size_t k = 0; k < series.size(); ++k) {
    while (next_boundary < episode_boundaries.size() && episode_boundaries[next_boundary] <= k) {
      episode_start = episode_boundaries[next_boundary];
      ++next_boundary;
    }
    const std::size_t window_start = std::max(episode_start, k + 1 >= cfg.window ? k + 1 - cfg.window : 0);
    acc = 0.0;
    for (std::size_t i = window_start; i <= k; ++i) acc += scalar[i];
    out[k] = std::max(cfg.v_floor, acc / static_cast<double>(k - window_start + 1));
  }
  return out;
}

namespace detail {

inline std::vector<std::string> accounted_joints(const TrajectoryLog& log, const PowerConfig& cfg) {
  std::vector<std::string> joints;
  for (const auto& joint : log.joint_ids) {
    const std::string& group = log.group_map.at(joint);
    if (group == kExcludedGroup) continue;
    if (cfg.included_groups.empty() || cfg.included_groups.count(group)) joints.push_back(joint);
  }
  return joints;
}

inline const PejCurve* curve_for_joint(const std::map<std::string, PejCurve>* curves,
                                       const TrajectoryLog& log, const std::string& joint) {
  if (curves == nullptr) return nullptr;
  const std::string& group = log.group_map.at(joint);
  const auto it = curves->find(group);
  if (it == curves->end()) {
    throw Error(ErrorKind::kSchema, "no curve for group '" + group + "'");
  }
  return &it->second;
}

}  // namespace detail

// Per-timestep cost of transport. With curves, the motor torque after the
// spring's contribution enters the power sum; each joint of a group is
// evaluated against the shared curve at its own angle.
inline std::vector<double> cot_series(const TrajectoryLog& log,
                                      const std::map<std::string, PejCurve>* curves,
                                      const PowerConfig& cfg) {
  log.validate();
  const auto joints = detail::accounted_joints(log, cfg);
  const auto vw = windowed_velocity(log.base, cfg, log.episode_boundaries);
  std::vector<double> out(log.n_steps());
  const double mg = log.robot_mass * log.gravity;
  for (std::size_t k = 0; k < log.n_steps(); ++k) {
    double p = 0.0;
    for (const auto& joint : joints) {
      const JointSample& s = log.samples.at(joint)[k];
      const PejCurve* curve = detail::curve_for_joint(curves, log, joint);
      const double tau = curve ? motor_torque(*curve, s) : s.tau;
      p += positive_power(tau, s.qdot);
    }
    out[k] = p / (mg * vw[k]);
  }
  return out;
}

// Share of the positive power absorbed by the curves, in percent, from the
// two power means of the same run with and without assistance.
inline double offload_ratio_from_means(double mean_without, double mean_with) {
  if (mean_without == 0.0) {
    throw Error(ErrorKind::kNumeric, "offload ratio undefined: zero positive power without assistance");
  }
  return 100.0 * (mean_without - mean_with) / mean_without;
}

// Net saving of an assisted run relative to an unassisted baseline run.
inline double power_saving_from_means(double mean_baseline, double mean_with_pej) {
  if (mean_baseline == 0.0) {
    throw Error(ErrorKind::kNumeric, "power saving undefined: zero baseline positive power");
  }
  return 100.0 * (mean_baseline - mean_with_pej) / mean_baseline;
}

namespace detail {

// Time-mean of the summed positive power of the accounted joints.
inline double mean_positive_power(const TrajectoryLog& log,
                                  const std::map<std::string, PejCurve>* curves,
                                  const PowerConfig& cfg) {
  const auto joints = accounted_joints(log, cfg);
  double acc = 0.0;
  for (std::size_t k = 0; k < log.n_steps(); ++k) {
    for (const auto& joint : joints) {
      const JointSample& s = log.samples.at(joint)[k];
      const PejCurve* curve = curve_for_joint(curves, log, joint);
      const double tau = curve ? motor_torque(*curve, s) : s.tau;
      acc += positive_power(tau, s.qdot);
    }
  }
  return acc / static_cast<double>(log.n_steps());
}

}  // namespace detail

inline double offload_ratio(const TrajectoryLog& log, const std::map<std::string, PejCurve>& curves,
                            const PowerConfig& cfg) {
  log.validate();
  cfg.validate();
  const double without = detail::mean_positive_power(log, nullptr, cfg);
  const double with = detail::mean_positive_power(log, &curves, cfg);
  return offload_ratio_from_means(without, with);
}

inline double power_saving(const TrajectoryLog& log_baseline, const TrajectoryLog& log_codesign,
                           const std::map<std::string, PejCurve>& curves, const PowerConfig& cfg) {
  log_baseline.validate();
  log_codesign.validate();
  cfg.validate();
  if (log_baseline.robot_mass != log_codesign.robot_mass ||
      log_baseline.gravity != log_codesign.gravity) {
    throw Error(ErrorKind::kData, "robot parameters differ between the two logs");
  }
  const double baseline = detail::mean_positive_power(log_baseline, nullptr, cfg);
  const double with = detail::mean_positive_power(log_codesign, &curves, cfg);
  return power_saving_from_means(baseline, with);
}

// RMS of commanded speed minus projected actual speed over the log.
inline double tracking_error(const TrajectoryLog& log, const PowerConfig& cfg) {
  log.validate();
  cfg.validate();
  double acc = 0.0;
  for (const BaseSample& b : log.base) {
    const double cmd = std::hypot(b.vcmd_x, b.vcmd_y);
    const double err = cmd - scalar_velocity(b);
    acc += err * err;
  }
  return std::sqrt(acc / static_cast<double>(log.base.size()));
}

// Per-timestep series kept around for plotting.
struct EvalSeries {
  std::vector<double> power_no_pej;
  std::vector<double> power_with_pej;
  std::vector<double> cot;
  std::vector<double> velocity;
};

// Full evaluation of one log, with or without curve assistance
// (curves == nullptr means no assistance).
inline MetricsReport evaluate(const TrajectoryLog& log,
                              const std::map<std::string, PejCurve>* curves,
                              const PowerConfig& cfg, EvalSeries* series = nullptr) {
  log.validate();
  cfg.validate();
  const auto joints = detail::accounted_joints(log, cfg);
  const auto vw = windowed_velocity(log.base, cfg, log.episode_boundaries);
  const std::size_t n = log.n_steps();
  const double mg = log.robot_mass * log.gravity;

  MetricsReport report;
  report.robot_mass = log.robot_mass;
  report.gravity = log.gravity;
  report.with_pej = curves != nullptr;
  std::map<std::string, double> joint_acc;
  for (const auto& joint : joints) joint_acc[joint] = 0.0;

  if (series) {
    series->power_no_pej.resize(n);
    series->power_with_pej.resize(n);
    series->cot.resize(n);
    series->velocity = vw;
  }

  double acc_without = 0.0, acc_with = 0.0, acc_cot = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    double p_without = 0.0, p_with = 0.0;
    for (const auto& joint : joints) {
      const JointSample& s = log.samples.at(joint)[k];
      const double p0 = positive_power(s.tau, s.qdot);
      p_without += p0;
      const PejCurve* curve = detail::curve_for_joint(curves, log, joint);
      const double pm = curve ? positive_power(motor_torque(*curve, s), s.qdot) : p0;
      p_with += pm;
      joint_acc[joint] += pm;
    }
    acc_without += p_without;
    acc_with += p_with;
    const double cot = p_with / (mg * vw[k]);
    acc_cot += cot;
    if (series) {
      series->power_no_pej[k] = p_without;
      series->power_with_pej[k] = p_with;
      series->cot[k] = cot;
    }
  }

  report.mean_positive_power_no_pej = acc_without / static_cast<double>(n);
  report.mean_positive_power_with_pej = acc_with / static_cast<double>(n);
  report.mean_cot = acc_cot / static_cast<double>(n);
  report.offload_ratio =
      curves ? offload_ratio_from_means(report.mean_positive_power_no_pej,
                                        report.mean_positive_power_with_pej)
             : 0.0;
  report.tracking_error_rms = tracking_error(log, cfg);
  for (auto& [joint, acc] : joint_acc) {
    report.per_joint_power[joint] = acc / static_cast<double>(n);
  }
  return report;
}

inline nlohmann::json report_to_json(const MetricsReport& r) {
  nlohmann::json j;
  j["mean_positive_power_no_pej"] = r.mean_positive_power_no_pej;
  j["mean_positive_power_with_pej"] = r.mean_positive_power_with_pej;
  j["mean_cot"] = r.mean_cot;
  j["offload_ratio"] = r.offload_ratio;
  j["tracking_error_rms"] = r.tracking_error_rms;
  j["per_joint_power"] = r.per_joint_power;
  j["robot_mass"] = r.robot_mass;
  j["gravity"] = r.gravity;
  j["with_pej"] = r.with_pej;
  return j;
}

inline MetricsReport report_from_json(const nlohmann::json& j, const std::string& origin) {
  MetricsReport r;
  r.mean_positive_power_no_pej = detail::json_number(j, "mean_positive_power_no_pej", origin);
  r.mean_positive_power_with_pej = detail::json_number(j, "mean_positive_power_with_pej", origin);
  r.mean_cot = detail::json_number(j, "mean_cot", origin);
  r.offload_ratio = detail::json_number(j, "offload_ratio", origin);
  r.tracking_error_rms = detail::json_number(j, "tracking_error_rms", origin);
  if (j.contains("per_joint_power")) {
    r.per_joint_power = j.at("per_joint_power").get<std::map<std::string, double>>();
  }
  r.robot_mass = detail::json_number(j, "robot_mass", origin);
  r.gravity = detail::json_number(j, "gravity", origin);
  r.with_pej = j.value("with_pej", false);
  return r;
}

inline void save_report(const MetricsReport& r, const std::filesystem::path& path) {
  write_text_file(path, report_to_json(r).dump(2) + "\n");
}

inline MetricsReport load_report(const std::filesystem::path& path) {
  return report_from_json(detail::parse_json_text(read_text_file(path), path.string()), path.string());
}

}  // namespace pejkit

#endif  // PEJKIT_METRICS_HPP
