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

// Training-configuration presets of the policies these logs come from.
// Stored as provenance metadata only; nothing in this toolkit consumes them
// as an optimisation signal.

#ifndef PEJKIT_PRESETS_HPP
#define PEJKIT_PRESETS_HPP

#include <cstddef>

namespace pejkit {

struct RewardWeights {
  double track_lin_vel_xy_exp;
  double track_ang_vel_z_exp;
  double lin_vel_z_l2;
  double ang_vel_xy_l2;
  double action_rate_l2;
};

inline constexpr RewardWeights kPretrainedRewardWeights{1.0, 0.5, -2.0, -0.05, -0.01};
inline constexpr RewardWeights kBaselineRewardWeights{2.5, 0.5, -2.0, -0.05, -0.01};
inline constexpr RewardWeights kCodesignRewardWeights{2.5, 0.5, -2.0, -0.05, -0.01};

// Energy-penalty weight per terrain difficulty level, for the baseline
// (energy-trained, no elastic joints) and co-design training branches.
struct CotWeightRow {
  int terrain_level;
  double baseline;
  double codesign;
};

inline constexpr CotWeightRow kCotWeights[] = {
    {0, 0.4, 2.0}, {2, 0.4, 1.0}, {3, 0.4, 1.0}, {4, 0.3, 0.5}, {6, 0.3, 0.2},
};

inline constexpr std::size_t kCotWeightCount = sizeof(kCotWeights) / sizeof(kCotWeights[0]);

struct RobotPreset {
  double mass;     // kg
  double gravity;  // m/s^2
  double dt;       // s, control period
  double tau_cap;  // N·m, motor torque limit
};

inline constexpr RobotPreset kDefaultRobot{15.0, 9.81, 0.05, 23.5};

}  // namespace pejkit

#endif  // PEJKIT_PRESETS_HPP
