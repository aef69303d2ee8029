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
#include "test_util.hpp"

using namespace pejkit;

namespace {

GaitScenario dense(GaitKind kind, double duration = 120.0) {
  GaitScenario s;
  s.kind = kind;
  s.duration = duration;
  s.dt = 0.0501;  // incommensurate with the cycle so angles cover the range densely
  s.rng_seed = 77;
  return s;
}

}  // namespace

TEST_CASE("every scenario kind produces a valid log") {
  for (const GaitKind kind :
       {GaitKind::kPureSpring, GaitKind::kGravityPendulum, GaitKind::kSpringPlusFeedforward,
        GaitKind::kNoisyPeriodic, GaitKind::kAperiodicReactive}) {
    GaitScenario s = dense(kind, 30.0);
    s.noise_std = 2.0;
    const TrajectoryLog log = synth(s);
    CHECK_NOTHROW(log.validate());
    CHECK(log.n_steps() >= 100);
    CHECK(log.joint_ids.size() == 8);
    CHECK(log.groups().size() == 4);
  }
}

TEST_CASE("synthesis is deterministic under a fixed seed") {
  GaitScenario s = dense(GaitKind::kNoisyPeriodic, 30.0);
  s.noise_std = 3.0;
  const TrajectoryLog a = synth(s);
  const TrajectoryLog b = synth(s);
  for (const auto& joint : a.joint_ids) {
    const auto& sa = a.samples.at(joint);
    const auto& sb = b.samples.at(joint);
    for (std::size_t k = 0; k < sa.size(); ++k) {
      CHECK(sa[k].tau == sb[k].tau);
      CHECK(sa[k].q == sb[k].q);
    }
  }
}

TEST_CASE("scenario validation rejects bad parameters") {
  GaitScenario s;
  s.duration = 1.0;  // fewer than 100 samples
  CHECK_THROWS_AS(synth(s), Error);
  s = GaitScenario{};
  s.noise_std = -1.0;
  CHECK_THROWS_AS(synth(s), Error);
  s = GaitScenario{};
  s.dt = 0.0;
  CHECK_THROWS_AS(synth(s), Error);
}

TEST_CASE("expected curves sample the analytic law at the distiller's bin centers") {
  DistillConfig cfg;

  SUBCASE("pure spring breakpoints sit on the line") {
    const auto curves = expected_curve(dense(GaitKind::kPureSpring), cfg);
    REQUIRE(curves.size() == 4);
    for (const auto& [group, curve] : curves) {
      for (const Breakpoint& b : curve.breakpoints) {
        CHECK(std::abs(b.tau - 8.0 * b.q) < 1e-12);
      }
    }
  }

  SUBCASE("pendulum breakpoints sit on mgl*sin(q)") {
    GaitScenario s = dense(GaitKind::kGravityPendulum);
    s.pendulum_mgl = 10.0;
    const auto curves = expected_curve(s, cfg);
    for (const auto& [group, curve] : curves) {
      for (const Breakpoint& b : curve.breakpoints) {
        CHECK(std::abs(b.tau - 10.0 * std::sin(b.q)) < 1e-12);
      }
    }
  }

  SUBCASE("noisy kinds have no analytic optimum") {
    try {
      expected_curve(dense(GaitKind::kNoisyPeriodic), cfg);
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(std::string(e.what()).find("analytic") != std::string::npos);
    }
  }
}

TEST_CASE("zero amplitude degenerates downstream") {
  GaitScenario s = dense(GaitKind::kPureSpring, 30.0);
  s.amplitude = 0.0;
  const TrajectoryLog log = synth(s);
  DistillConfig cfg;
  CHECK_THROWS_AS(distill_full(log, cfg), Error);
}

TEST_CASE("distilled curves track the analytic optimum within the bin-resolution bound") {
  DistillConfig cfg;
  cfg.rng_seed = 5;
  const double fit_tolerance = 0.15;  // N·m, empirical scale of one update step

  SUBCASE("pure spring") {
    GaitScenario s = dense(GaitKind::kPureSpring, 200.0);
    const TrajectoryLog log = synth(s);
    const auto fitted = distill(log, cfg);
    const auto expected = expected_curve(s, cfg);
    for (const auto& [group, curve] : fitted) {
      const auto& exp_bp = expected.at(group).breakpoints;
      const double bound =
          (curve.breakpoints[1].q - curve.breakpoints[0].q) * 8.0 / 2.0 + 3.0 * fit_tolerance;
      for (std::size_t b = 0; b < curve.breakpoints.size(); ++b) {
        CHECK(std::abs(curve.breakpoints[b].tau - exp_bp[b].tau) <= bound);
      }
    }
  }

  SUBCASE("gravity pendulum") {
    GaitScenario s = dense(GaitKind::kGravityPendulum, 200.0);
    const TrajectoryLog log = synth(s);
    const auto fitted = distill(log, cfg);
    const auto expected = expected_curve(s, cfg);
    for (const auto& [group, curve] : fitted) {
      const auto& exp_bp = expected.at(group).breakpoints;
      const double bound = (curve.breakpoints[1].q - curve.breakpoints[0].q) * s.pendulum_mgl / 2.0 +
                           3.0 * fit_tolerance;
      for (std::size_t b = 0; b < curve.breakpoints.size(); ++b) {
        CHECK(std::abs(curve.breakpoints[b].tau - exp_bp[b].tau) <= bound);
      }
    }
  }
}

TEST_CASE("feedforward torque keeps the per-bin optimum enumerable") {
  GaitScenario s = dense(GaitKind::kSpringPlusFeedforward, 150.0);
  s.feedforward = 1.5;
  s.n_joints = 2;
  const TrajectoryLog log = synth(s);
  DistillConfig cfg;
  cfg.rng_seed = 19;
  const auto fit = distill_group(log, "front-thigh", cfg);
  const auto pooled = pool_group(log, "front-thigh");
  std::vector<std::vector<JointSample>> bins(cfg.n_bins);
  for (const JointSample& smp : pooled) {
    const int b = fit.layout.bin_index(smp.q);
    if (b >= 0) bins[static_cast<std::size_t>(b)].push_back(smp);
  }
  for (std::size_t b = 0; b < cfg.n_bins; ++b) {
    if (bins[b].empty()) continue;
    const double jbf = bin_objective(brute_force_bin(bins[b], cfg.tau_cap), bins[b]);
    const double jfit = bin_objective(fit.bins[b].tau, bins[b]);
    if (jbf > 0.0) {
      CHECK((jfit - jbf) / jbf <= 0.01);
    } else {
      CHECK(jfit <= 1e-9);
    }
  }
}

TEST_CASE("torque noise degrades the achievable offload") {
  DistillConfig cfg;
  cfg.rng_seed = 23;
  PowerConfig pcfg;
  double previous = 1e300;
  for (const double noise : {0.0, 5.0}) {
    GaitScenario s = dense(GaitKind::kNoisyPeriodic, 80.0);
    s.noise_std = noise;
    const TrajectoryLog log = synth(s);
    const auto curves = distill(log, cfg);
    const double ratio = offload_ratio(log, curves, pcfg);
    CHECK(ratio < previous);
    previous = ratio;
  }
}
