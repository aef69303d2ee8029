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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "pejkit/gaitsynth.hpp"
#include "pejkit/metrics.hpp"
#include "pejkit/presets.hpp"
#include "test_util.hpp"

using namespace pejkit;
using testutil::TempDir;
using testutil::make_log;

namespace {

BaseSample base(double vx, double vy, double cx, double cy) {
  BaseSample b;
  b.vx = vx;
  b.vy = vy;
  b.vcmd_x = cx;
  b.vcmd_y = cy;
  return b;
}

// One joint, constant torque/velocity, unit commanded speed.
TrajectoryLog constant_power_log(double tau, double qdot, std::size_t n = 200) {
  TrajectoryLog log = make_log(n, {"j"}, {"front-thigh"}, [=](std::size_t, std::size_t) {
    JointSample s;
    s.q = 0.1;
    s.qdot = qdot;
    s.tau = tau;
    return s;
  });
  return log;
}

}  // namespace

TEST_CASE("positive power clips negative work to zero") {
  CHECK(positive_power(2.0, 3.0) == 6.0);
  CHECK(positive_power(2.0, -3.0) == 0.0);
  CHECK(positive_power(0.0, 5.0) == 0.0);
}

TEST_CASE("scalar velocity projects onto the commanded direction") {
  CHECK(scalar_velocity(base(1.0, 0.0, 2.0, 0.0)) == 1.0);
  CHECK(scalar_velocity(base(-1.0, 0.0, 1.0, 0.0)) == 0.0);
  CHECK(scalar_velocity(base(1.0, 1.0, 1.0, 0.0)) == 1.0);
  CHECK_THROWS_AS(scalar_velocity(base(1.0, 0.0, 0.0, 0.0)), Error);
}

TEST_CASE("windowed velocity") {
  PowerConfig cfg;
  const std::vector<std::size_t> no_boundaries;

  SUBCASE("constant series passes through") {
    std::vector<BaseSample> series(25, base(1.5, 0.0, 1.0, 0.0));
    for (const double v : windowed_velocity(series, cfg, no_boundaries)) CHECK(v == 1.5);
  }

  SUBCASE("zero velocity floors at v_floor") {
    std::vector<BaseSample> series(25, base(0.0, 0.0, 1.0, 0.0));
    for (const double v : windowed_velocity(series, cfg, no_boundaries)) CHECK(v == 0.1);
  }

  SUBCASE("alternating series settles on the window mean") {
    std::vector<BaseSample> series;
    for (int k = 0; k < 30; ++k) series.push_back(base(k % 2 == 0 ? 0.5 : 1.5, 0.0, 1.0, 0.0));
    const auto v = windowed_velocity(series, cfg, no_boundaries);
    for (std::size_t k = 10; k < v.size(); ++k) CHECK(v[k] == doctest::Approx(1.0).epsilon(1e-12));
  }

  SUBCASE("the window resets at episode boundaries") {
    std::vector<BaseSample> series(20, base(2.0, 0.0, 1.0, 0.0));
    for (std::size_t k = 10; k < 20; ++k) series[k] = base(0.4, 0.0, 1.0, 0.0);
    const std::vector<std::size_t> boundaries = {0, 10};
    const auto v = windowed_velocity(series, cfg, boundaries);
    // Right after the boundary only the new episode's sample is visible.
    CHECK(v[10] == 0.4);
    // Without the reset the trailing window would still blend the 2.0s in.
    const auto blended = windowed_velocity(series, cfg, std::vector<std::size_t>{0});
    CHECK(blended[10] > 0.4);
  }
}

TEST_CASE("cost of transport arithmetic") {
  PowerConfig cfg;

  SUBCASE("29.43 W at 15 kg, 9.81 m/s^2, 1 m/s gives 0.2") {
    const TrajectoryLog log = constant_power_log(29.43, 1.0);
    const auto cot = cot_series(log, nullptr, cfg);
    for (const double c : cot) CHECK(c == doctest::Approx(0.2).epsilon(1e-12));
  }

  SUBCASE("zero torque gives zero CoT") {
    const TrajectoryLog log = constant_power_log(0.0, 1.0);
    for (const double c : cot_series(log, nullptr, cfg)) CHECK(c == 0.0);
  }

  SUBCASE("doubling the base velocity halves the CoT") {
    TrajectoryLog log = constant_power_log(10.0, 1.0);
    const double c1 = cot_series(log, nullptr, cfg)[50];
    for (auto& b : log.base) {
      b.vx *= 2.0;
      b.vcmd_x *= 2.0;
    }
    const double c2 = cot_series(log, nullptr, cfg)[50];
    CHECK(c1 / c2 == doctest::Approx(2.0).epsilon(1e-12));
  }
}

TEST_CASE("offload ratio") {
  CHECK(offload_ratio_from_means(24.0, 3.0) == doctest::Approx(87.5).epsilon(1e-12));
  CHECK_THROWS_AS(offload_ratio_from_means(0.0, 0.0), Error);

  SUBCASE("the zero curve offloads exactly nothing") {
    const TrajectoryLog log = constant_power_log(5.0, 2.0);
    std::map<std::string, PejCurve> zero;
    zero["front-thigh"].breakpoints = {{-1.0, 0.0}, {1.0, 0.0}};
    CHECK(offload_ratio(log, zero, PowerConfig{}) == 0.0);
  }

  SUBCASE("never above 100") {
    const TrajectoryLog log = constant_power_log(5.0, 2.0);
    std::map<std::string, PejCurve> over;
    over["front-thigh"].breakpoints = {{-1.0, 20.0}, {1.0, 20.0}};  // overshoots the demand
    CHECK(offload_ratio(log, over, PowerConfig{}) <= 100.0);
  }
}

TEST_CASE("power saving") {
  CHECK(power_saving_from_means(21.6, 3.0) == doctest::Approx(100.0 * 18.6 / 21.6).epsilon(1e-12));
  CHECK(power_saving_from_means(10.0, 10.0) == 0.0);
  // An assisted gait that costs more than the baseline once its springs are
  // removed shows up as a negative saving.
  CHECK(power_saving_from_means(10.0, 12.0) < 0.0);
  CHECK_THROWS_AS(power_saving_from_means(0.0, 1.0), Error);

  SUBCASE("identical logs with a zero curve save nothing") {
    const TrajectoryLog log = constant_power_log(5.0, 2.0);
    std::map<std::string, PejCurve> zero;
    zero["front-thigh"].breakpoints = {{-1.0, 0.0}, {1.0, 0.0}};
    CHECK(power_saving(log, log, zero, PowerConfig{}) == 0.0);
  }

  SUBCASE("mismatched robot parameters are rejected") {
    const TrajectoryLog a = constant_power_log(5.0, 2.0);
    TrajectoryLog b = a;
    b.robot_mass = 12.0;
    std::map<std::string, PejCurve> zero;
    zero["front-thigh"].breakpoints = {{-1.0, 0.0}, {1.0, 0.0}};
    CHECK_THROWS_AS(power_saving(a, b, zero, PowerConfig{}), Error);
  }
}

TEST_CASE("tracking error") {
  PowerConfig cfg;

  SUBCASE("perfect tracking is zero") {
    const TrajectoryLog log = constant_power_log(1.0, 1.0);
    CHECK(tracking_error(log, cfg) == 0.0);
  }

  SUBCASE("a constant offset is returned as-is") {
    TrajectoryLog log = constant_power_log(1.0, 1.0);
    for (auto& b : log.base) {
      b.vx = 0.8;
      b.vcmd_x = 1.0;
    }
    CHECK(tracking_error(log, cfg) == doctest::Approx(0.2).epsilon(1e-12));
  }

  SUBCASE("a sinusoidal error of amplitude A has RMS A/sqrt(2)") {
    const double amp = 0.3;
    const std::size_t n = 400;  // whole periods of a 40-step sine
    TrajectoryLog log = constant_power_log(1.0, 1.0, n);
    for (std::size_t k = 0; k < n; ++k) {
      const double err = amp * std::sin(2.0 * 3.14159265358979323846 * static_cast<double>(k) / 40.0);
      log.base[k].vx = 1.0 - err;
      log.base[k].vcmd_x = 1.0;
    }
    CHECK(tracking_error(log, cfg) == doctest::Approx(amp / std::sqrt(2.0)).epsilon(1e-9));
  }
}

TEST_CASE("evaluate fills a consistent report") {
  GaitScenario scenario;
  scenario.duration = 60.0;
  scenario.dt = 0.0501;
  const TrajectoryLog log = synth(scenario);
  PowerConfig cfg;
  std::map<std::string, PejCurve> line;
  for (const auto& group : log.groups()) {
    line[group].breakpoints = {{-2.0, -16.0}, {2.0, 16.0}};
  }
  const MetricsReport with = evaluate(log, &line, cfg);
  const MetricsReport without = evaluate(log, nullptr, cfg);

  CHECK(with.mean_positive_power_no_pej ==
        doctest::Approx(without.mean_positive_power_no_pej).epsilon(1e-12));
  CHECK(without.offload_ratio == 0.0);
  CHECK(without.with_pej == false);
  CHECK(with.offload_ratio > 99.0);
  CHECK(with.mean_positive_power_with_pej >= 0.0);
  CHECK(with.mean_cot >= 0.0);
  CHECK(with.offload_ratio <= 100.0);
  CHECK(with.per_joint_power.size() == log.joint_ids.size());
  // A curve matching the torque law leaves almost no transport cost.
  CHECK(with.mean_cot <= 0.01 * without.mean_cot);

  SUBCASE("missing group curve is a schema error naming the group") {
    std::map<std::string, PejCurve> partial = line;
    partial.erase("front-calf");
    try {
      evaluate(log, &partial, cfg);
      FAIL("expected a schema error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::kSchema);
      CHECK(std::string(e.what()).find("front-calf") != std::string::npos);
    }
  }

  SUBCASE("reports round trip through json") {
    TempDir dir;
    save_report(with, dir / "report.json");
    const MetricsReport back = load_report(dir / "report.json");
    CHECK(back.mean_positive_power_no_pej == with.mean_positive_power_no_pej);
    CHECK(back.mean_positive_power_with_pej == with.mean_positive_power_with_pej);
    CHECK(back.mean_cot == with.mean_cot);
    CHECK(back.offload_ratio == with.offload_ratio);
    CHECK(back.tracking_error_rms == with.tracking_error_rms);
    CHECK(back.per_joint_power == with.per_joint_power);
    CHECK(back.robot_mass == with.robot_mass);
    CHECK(back.with_pej == with.with_pej);
  }
}

TEST_CASE("training presets stay consistent with the toolkit defaults") {
  CHECK(kDefaultRobot.mass == 15.0);
  CHECK(kDefaultRobot.gravity == 9.81);
  CHECK(kDefaultRobot.dt == 0.05);
  CHECK(kDefaultRobot.tau_cap == kDefaultTauCap);
  TrajectoryLog log;
  CHECK(log.robot_mass == kDefaultRobot.mass);
  CHECK(log.gravity == kDefaultRobot.gravity);
  CHECK(log.dt == kDefaultRobot.dt);

  // Velocity-tracking weight rises from pre-training to the energy branches;
  // the penalty terms are shared.
  CHECK(kPretrainedRewardWeights.track_lin_vel_xy_exp == 1.0);
  CHECK(kBaselineRewardWeights.track_lin_vel_xy_exp == 2.5);
  CHECK(kCodesignRewardWeights.track_lin_vel_xy_exp == 2.5);
  CHECK(kBaselineRewardWeights.action_rate_l2 == kPretrainedRewardWeights.action_rate_l2);

  // Energy weights fall off with terrain difficulty in the assisted branch.
  REQUIRE(kCotWeightCount == 5);
  CHECK(kCotWeights[0].codesign == 2.0);
  CHECK(kCotWeights[kCotWeightCount - 1].codesign == 0.2);
  for (std::size_t i = 1; i < kCotWeightCount; ++i) {
    CHECK(kCotWeights[i].terrain_level > kCotWeights[i - 1].terrain_level);
    CHECK(kCotWeights[i].codesign <= kCotWeights[i - 1].codesign);
    CHECK(kCotWeights[i].baseline <= kCotWeights[i - 1].baseline);
  }
}

TEST_CASE("excluded joints never enter the power sums") {
  TrajectoryLog log = make_log(150, {"a", "h"}, {"front-thigh", "excluded"},
                               [](std::size_t j, std::size_t) {
                                 JointSample s;
                                 s.q = 0.1;
                                 s.qdot = 1.0;
                                 s.tau = j == 0 ? 2.0 : 100.0;
                                 return s;
                               });
  const MetricsReport r = evaluate(log, nullptr, PowerConfig{});
  CHECK(r.mean_positive_power_no_pej == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(r.per_joint_power.count("h") == 0);
}
