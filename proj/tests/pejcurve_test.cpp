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

#include "pejkit/distiller.hpp"
#include "pejkit/gaitsynth.hpp"
#include "pejkit/pejcurve.hpp"
#include "pejkit/rng.hpp"
#include "test_util.hpp"

using namespace pejkit;
using testutil::TempDir;

namespace {

PejCurve two_point_curve() {
  PejCurve c;
  c.breakpoints = {{0.0, 0.0}, {1.0, 10.0}};
  return c;
}

PejCurve random_curve(Rng& rng, std::size_t n_bp) {
  PejCurve c;
  double q = rng.uniform(-2.0, -1.0);
  for (std::size_t i = 0; i < n_bp; ++i) {
    c.breakpoints.push_back({q, rng.uniform(-23.0, 23.0)});
    q += rng.uniform(0.05, 0.4);
  }
  return c;
}

}  // namespace

TEST_CASE("eval interpolates linearly and clamps beyond the range") {
  const PejCurve c = two_point_curve();
  CHECK(eval_curve(c, 0.5) == 5.0);
  CHECK(eval_curve(c, 2.0) == 10.0);
  CHECK(eval_curve(c, -1.0) == 0.0);
}

TEST_CASE("eval returns exactly tau_k at every breakpoint") {
  Rng rng(42);
  for (int trial = 0; trial < 20; ++trial) {
    const PejCurve c = random_curve(rng, 2 + rng.index(20));
    for (const Breakpoint& b : c.breakpoints) CHECK(eval_curve(c, b.q) == b.tau);
  }
}

TEST_CASE("eval is continuous with slope bounded by the steepest segment") {
  Rng rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const PejCurve c = random_curve(rng, 2 + rng.index(15));
    double max_slope = 0.0;
    for (std::size_t i = 1; i < c.breakpoints.size(); ++i) {
      max_slope = std::max(max_slope, std::abs((c.breakpoints[i].tau - c.breakpoints[i - 1].tau) /
                                               (c.breakpoints[i].q - c.breakpoints[i - 1].q)));
    }
    for (int k = 0; k < 100; ++k) {
      const double q1 = rng.uniform(-3.0, 5.0);
      const double eps = 1e-5;
      const double q2 = q1 + eps;
      CHECK(std::abs(eval_curve(c, q1) - eval_curve(c, q2)) <= max_slope * eps * (1.0 + 1e-9) + 1e-12);
    }
  }
}

TEST_CASE("motor torque is the residual after the spring contribution") {
  const PejCurve c = two_point_curve();
  JointSample s;
  s.q = 1.0;
  s.tau = 12.0;
  CHECK(motor_torque(c, s) == 2.0);

  SUBCASE("zero curve leaves the total torque to the motor") {
    PejCurve zero;
    zero.breakpoints = {{-1.0, 0.0}, {1.0, 0.0}};
    s.q = 0.37;
    s.tau = -4.5;
    CHECK(motor_torque(zero, s) == s.tau);
  }

  SUBCASE("decomposition identity holds to floating-point associativity") {
    Rng rng(3);
    const PejCurve c2 = random_curve(rng, 12);
    for (int k = 0; k < 200; ++k) {
      JointSample smp;
      smp.q = rng.uniform(-3.0, 3.0);
      smp.tau = rng.uniform(-30.0, 30.0);
      const double recomposed = motor_torque(c2, smp) + eval_curve(c2, smp.q);
      CHECK(std::abs(recomposed - smp.tau) <= 1e-12 * std::max(1.0, std::abs(smp.tau)));
    }
  }
}

TEST_CASE("motor power is torque times angular velocity, signed") {
  const PejCurve c = two_point_curve();
  JointSample s;
  s.q = 1.0;
  s.tau = 12.0;  // residual 2
  s.qdot = 3.0;
  CHECK(motor_power(c, s) == 6.0);
  s.qdot = 0.0;
  CHECK(motor_power(c, s) == 0.0);
}

TEST_CASE("a curve matching the torque law absorbs the whole gait") {
  GaitScenario scenario;
  scenario.duration = 60.0;
  scenario.dt = 0.0501;
  const TrajectoryLog log = synth(scenario);
  // Spans every visited angle, so no clamp region is exercised.
  PejCurve line;
  line.breakpoints = {{-2.0, -16.0}, {2.0, 16.0}};
  for (const auto& joint : log.joint_ids) {
    for (const JointSample& s : log.samples.at(joint)) {
      CHECK(std::abs(motor_power(line, s)) < 1e-6);
    }
  }
}

TEST_CASE("a distilled spring curve evaluates close to the analytic line") {
  GaitScenario scenario;
  scenario.duration = 150.0;
  scenario.dt = 0.0501;
  scenario.n_joints = 2;
  const TrajectoryLog log = synth(scenario);
  DistillConfig cfg;
  cfg.rng_seed = 9;
  const auto curves = distill(log, cfg);
  const PejCurve& c = curves.at("front-thigh");
  const double bin_resolution = 8.0 * (c.breakpoints[1].q - c.breakpoints[0].q) / 2.0;
  CHECK(std::abs(eval_curve(c, 0.3) - 2.4) <= bin_resolution);
}

TEST_CASE("curve files round trip at full precision") {
  TempDir dir;
  Rng rng(11);
  const PejCurve c = random_curve(rng, 20);

  SUBCASE("csv with sidecar") {
    export_curve(c, dir / "curve", FileFormat::kCsv);
    const PejCurve back = import_curve(dir / "curve.csv");
    REQUIRE(back.breakpoints.size() == c.breakpoints.size());
    for (std::size_t i = 0; i < c.breakpoints.size(); ++i) {
      CHECK(back.breakpoints[i].q == c.breakpoints[i].q);
      CHECK(back.breakpoints[i].tau == c.breakpoints[i].tau);
    }
    CHECK(back.tau_cap == c.tau_cap);
  }

  SUBCASE("bundled json") {
    export_curve(c, dir / "curve.json", FileFormat::kJson);
    const PejCurve back = import_curve(dir / "curve.json");
    REQUIRE(back.breakpoints.size() == c.breakpoints.size());
    for (std::size_t i = 0; i < c.breakpoints.size(); ++i) {
      CHECK(back.breakpoints[i].q == c.breakpoints[i].q);
      CHECK(back.breakpoints[i].tau == c.breakpoints[i].tau);
    }
  }
}

TEST_CASE("curve files with broken invariants are schema errors") {
  TempDir dir;

  SUBCASE("non-monotone angles") {
    write_text_file(dir / "bad.csv", "q,tau\n0,0\n0.5,2\n0.4,3\n");
    write_text_file(dir / "bad_meta.json", "{\"tau_cap\": 23.5, \"extrapolation\": \"clamp_end_value\"}\n");
    try {
      import_curve(dir / "bad.csv");
      FAIL("expected a schema error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::kSchema);
      CHECK(std::string(e.what()).find("increasing") != std::string::npos);
    }
  }

  SUBCASE("torque above the cap names the breakpoint") {
    write_text_file(dir / "bad.csv", "q,tau\n0,0\n0.5,24.2\n1.0,3\n");
    write_text_file(dir / "bad_meta.json", "{\"tau_cap\": 23.5, \"extrapolation\": \"clamp_end_value\"}\n");
    try {
      import_curve(dir / "bad.csv");
      FAIL("expected a schema error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::kSchema);
      CHECK(std::string(e.what()).find("breakpoint 1") != std::string::npos);
    }
  }

  SUBCASE("fewer than two breakpoints") {
    PejCurve c;
    c.breakpoints = {{0.0, 1.0}};
    CHECK_THROWS_AS(c.validate(), Error);
  }
}
