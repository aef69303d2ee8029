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

#ifndef PEJKIT_TESTS_TEST_UTIL_HPP
#define PEJKIT_TESTS_TEST_UTIL_HPP

#include <cstdlib>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "pejkit/pejcurve.hpp"
#include "pejkit/trajlog.hpp"

namespace pejkit::testutil {

struct TempDir {
  std::filesystem::path path;

  TempDir() {
    std::string tmpl = (std::filesystem::temp_directory_path() / "pejkit-test-XXXXXX").string();
    char* made = mkdtemp(tmpl.data());
    if (made == nullptr) std::abort();
    path = made;
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::filesystem::path operator/(const std::string& name) const { return path / name; }
};

// Small hand-built log: every joint shares the time base, values come from
// the per-joint generator (joint index, step) -> sample fields.
inline TrajectoryLog make_log(std::size_t n_steps, const std::vector<std::string>& joints,
                              const std::vector<std::string>& groups,
                              const std::function<JointSample(std::size_t, std::size_t)>& gen,
                              double dt = 0.05) {
  TrajectoryLog log;
  log.dt = dt;
  log.joint_ids = joints;
  for (std::size_t j = 0; j < joints.size(); ++j) log.group_map[joints[j]] = groups[j];
  for (std::size_t j = 0; j < joints.size(); ++j) {
    auto& series = log.samples[joints[j]];
    series.resize(n_steps);
    for (std::size_t k = 0; k < n_steps; ++k) {
      JointSample s = gen(j, k);
      s.t = static_cast<double>(k) * dt;
      series[k] = s;
    }
  }
  log.base.resize(n_steps);
  for (std::size_t k = 0; k < n_steps; ++k) {
    log.base[k] = BaseSample{static_cast<double>(k) * dt, 1.0, 0.0, 1.0, 0.0};
  }
  log.episode_boundaries = {0};
  return log;
}

// Least-squares slope through curve breakpoints (optionally interior only).
inline double breakpoint_slope(const PejCurve& curve, bool interior_only = true) {
  const auto& bp = curve.breakpoints;
  const std::size_t lo = interior_only ? 1 : 0;
  const std::size_t hi = interior_only ? bp.size() - 1 : bp.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t b = lo; b < hi; ++b) {
    mx += bp[b].q;
    my += bp[b].tau;
  }
  const double n = static_cast<double>(hi - lo);
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t b = lo; b < hi; ++b) {
    sxx += (bp[b].q - mx) * (bp[b].q - mx);
    sxy += (bp[b].q - mx) * (bp[b].tau - my);
  }
  return sxy / sxx;
}

}  // namespace pejkit::testutil

#endif  // PEJKIT_TESTS_TEST_UTIL_HPP
