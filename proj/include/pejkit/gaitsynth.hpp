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

// Synthetic multi-joint gait logs with analytically known optimal elastic
// curves, used as ground truth for the distiller and the metrics. Joint
// angles follow sinusoids with trot-like phase pairing (diagonal joints in
// phase); torque laws depend on the scenario kind. No rigid-body dynamics.

#ifndef PEJKIT_GAITSYNTH_HPP
#define PEJKIT_GAITSYNTH_HPP

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "pejkit/distiller.hpp"
#include "pejkit/error.hpp"
#include "pejkit/rng.hpp"
#include "pejkit/trajlog.hpp"

namespace pejkit {

enum class GaitKind {
  kPureSpring,            // tau = k*q; the exact optimum is the line k*q
  kGravityPendulum,       // tau = mgl*sin(q); optimum is mgl*sin at bin centers
  kSpringPlusFeedforward, // tau = k*q + c*sign(qdot); per-bin optimum stays enumerable
  kNoisyPeriodic,         // spring torque plus zero-mean Gaussian noise
  kAperiodicReactive,     // spring torque plus a stationary drifting component
};

inline std::string to_string(GaitKind kind) {
  switch (kind) {
    case GaitKind::kPureSpring: return "pure_spring";
    case GaitKind::kGravityPendulum: return "gravity_pendulum";
    case GaitKind::kSpringPlusFeedforward: return "spring_plus_feedforward";
    case GaitKind::kNoisyPeriodic: return "noisy_periodic";
    case GaitKind::kAperiodicReactive: return "aperiodic_reactive";
  }
  return "unknown";
}

inline GaitKind gait_kind_from_string(const std::string& s) {
  if (s == "pure_spring") return GaitKind::kPureSpring;
  if (s == "gravity_pendulum") return GaitKind::kGravityPendulum;
  if (s == "spring_plus_feedforward") return GaitKind::kSpringPlusFeedforward;
  if (s == "noisy_periodic") return GaitKind::kNoisyPeriodic;
  if (s == "aperiodic_reactive") return GaitKind::kAperiodicReactive;
  throw Error(ErrorKind::kUsage, "unknown gait kind '" + s + "'");
}

struct GaitScenario {
  GaitKind kind = GaitKind::kPureSpring;
  double spring_k = 8.0;       // N·m/rad
  double amplitude = 1.0;      // rad
  double omega = 2.0 * 3.14159265358979323846;  // rad/s
  double pendulum_mgl = 10.0;  // N·m
  double feedforward = 1.0;    // N·m
  double noise_std = 0.0;      // N·m
  std::size_t n_joints = 8;
  double duration = 60.0;  // s
  double dt = 0.05;        // s
  double base_speed = 1.0; // m/s
  double cmd_speed = 1.0;  // m/s
  double robot_mass = 15.0;
  double gravity = 9.81;
  std::uint64_t rng_seed = 1;

  void validate() const {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw Error(ErrorKind::kUsage, "dt must be > 0");
    if (!(duration > 0.0) || !std::isfinite(duration)) throw Error(ErrorKind::kUsage, "duration must be > 0");
    if (duration / dt < 100.0) {
      throw Error(ErrorKind::kUsage, "scenario must yield at least 100 samples");
    }
    if (noise_std < 0.0 || !std::isfinite(noise_std)) throw Error(ErrorKind::kUsage, "noise_std must be >= 0");
    if (n_joints < 1) throw Error(ErrorKind::kUsage, "n_joints must be >= 1");
    if (!std::isfinite(amplitude)) throw Error(ErrorKind::kUsage, "amplitude must be finite");
    if (!(omega > 0.0) || !std::isfinite(omega)) throw Error(ErrorKind::kUsage, "omega must be > 0");
    if (!std::isfinite(spring_k) || !std::isfinite(pendulum_mgl) || !std::isfinite(feedforward)) {
      throw Error(ErrorKind::kUsage, "scenario parameters must be finite");
    }
    if (!(robot_mass > 0.0) || !(gravity > 0.0)) {
      throw Error(ErrorKind::kUsage, "robot_mass and gravity must be > 0");
    }
  }
};

namespace detail {

inline constexpr const char* kSynthGroups[4] = {"front-thigh", "rear-thigh", "front-calf",
                                                "rear-calf"};

inline std::string synth_joint_name(std::size_t i) {
  const std::size_t gi = (i / 2) % 4;
  std::string name(kSynthGroups[gi]);
  for (auto& c : name) {
    if (c == '-') c = '_';
  }
  name += (i % 2 == 0) ? "_L" : "_R";
  if (i >= 8) name += "_" + std::to_string(i / 8);
  return name;
}

// Diagonal legs move in phase: front-left with rear-right, front-right with
// rear-left. Calves follow their leg.
inline double synth_phase(std::size_t i) {
  const std::size_t gi = (i / 2) % 4;
  const bool rear = (gi == 1 || gi == 3);
  const bool right = (i % 2 == 1);
  return (rear != right) ? 3.14159265358979323846 : 0.0;
}

}  // namespace detail

inline TrajectoryLog synth(const GaitScenario& scenario) {
  scenario.validate();
  const std::size_t n = static_cast<std::size_t>(std::llround(scenario.duration / scenario.dt));

  TrajectoryLog log;
  log.dt = scenario.dt;
  log.robot_mass = scenario.robot_mass;
  log.gravity = scenario.gravity;
  log.episode_boundaries = {0};

  for (std::size_t i = 0; i < scenario.n_joints; ++i) {
    const std::string name = detail::synth_joint_name(i);
    log.joint_ids.push_back(name);
    log.group_map[name] = detail::kSynthGroups[(i / 2) % 4];
  }

  for (std::size_t i = 0; i < scenario.n_joints; ++i) {
    const std::string& name = log.joint_ids[i];
    const double phase = detail::synth_phase(i);
    Rng rng(derive_seed(scenario.rng_seed, name));
    double drift = 0.0;
    auto& series = log.samples[name];
    series.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
      const double t = static_cast<double>(k) * scenario.dt;
      const double q = scenario.amplitude * std::sin(scenario.omega * t + phase);
      const double qdot =
          scenario.amplitude * scenario.omega * std::cos(scenario.omega * t + phase);
      double tau = 0.0;
      switch (scenario.kind) {
        case GaitKind::kPureSpring:
          tau = scenario.spring_k * q;
          break;
        case GaitKind::kGravityPendulum:
          tau = scenario.pendulum_mgl * std::sin(q);
          break;
        case GaitKind::kSpringPlusFeedforward:
          tau = scenario.spring_k * q +
                scenario.feedforward * (qdot > 0.0 ? 1.0 : (qdot < 0.0 ? -1.0 : 0.0));
          break;
        case GaitKind::kNoisyPeriodic:
          tau = scenario.spring_k * q + scenario.noise_std * rng.normal();
          break;
        case GaitKind::kAperiodicReactive: {
          // Stationary first-order drift with standard deviation noise_std.
          const double rho = 0.95;
          drift = rho * drift + scenario.noise_std * std::sqrt(1.0 - rho * rho) * rng.normal();
          tau = scenario.spring_k * q + drift;
          break;
        }
      }
      series[k] = JointSample{t, q, qdot, tau};
    }
  }

  log.base.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double t = static_cast<double>(k) * scenario.dt;
    // Small ripple on the actual speed keeps the velocity paths non-trivial.
    const double vx = scenario.base_speed + 0.05 * std::sin(2.0 * 3.14159265358979323846 * t / 5.0);
    log.base[k] = BaseSample{t, vx, 0.0, scenario.cmd_speed, 0.0};
  }

  log.validate();
  return log;
}

// The analytic per-bin optimum sampled at the bin centers the distiller will
// use on this scenario's log. Only torque laws that depend on angle alone
// have one.
inline std::map<std::string, PejCurve> expected_curve(const GaitScenario& scenario,
                                                      const DistillConfig& cfg = {}) {
  if (scenario.kind != GaitKind::kPureSpring && scenario.kind != GaitKind::kGravityPendulum) {
    throw Error(ErrorKind::kUsage,
                "no analytic optimum for kind '" + to_string(scenario.kind) + "'");
  }
  cfg.validate();
  const TrajectoryLog log = synth(scenario);
  std::map<std::string, PejCurve> out;
  for (const std::string& group : log.groups()) {
    if (group == kExcludedGroup) continue;
    const auto pooled = pool_group(log, group);
    BinLayout layout;
    try {
      layout = make_bin_layout(pooled, cfg);
    } catch (const Error& e) {
      throw Error(e.kind(), "group '" + group + "': " + e.what());
    }
    PejCurve curve;
    curve.tau_cap = cfg.tau_cap;
    curve.breakpoints.resize(cfg.n_bins);
    for (std::size_t b = 0; b < cfg.n_bins; ++b) {
      const double q = layout.center(b);
      const double tau = scenario.kind == GaitKind::kPureSpring
                             ? scenario.spring_k * q
                             : scenario.pendulum_mgl * std::sin(q);
      curve.breakpoints[b] = Breakpoint{q, std::clamp(tau, -cfg.tau_cap, cfg.tau_cap)};
    }
    curve.validate();
    out[group] = curve;
  }
  return out;
}

}  // namespace pejkit

#endif  // PEJKIT_GAITSYNTH_HPP
