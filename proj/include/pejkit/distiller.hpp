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

// Curve distillation. Per joint group: trim the tails of the angle
// distribution, discretise the range into equal-width bins, and fit each
// bin's elastic torque by minimising the summed positive motor power of the
// bin's samples. The objective
//
//   J(tau) = sum_t max(0, (tau_t - tau) * qdot_t)
//
// is convex piecewise-linear with kinks only at the sample torques, which
// gives an exact enumeration oracle (brute_force_bin) next to the momentum
// subgradient solver (fit_bin). Fitted bin values at the bin centers are
// connected into a piecewise-linear curve.

#ifndef PEJKIT_DISTILLER_HPP
#define PEJKIT_DISTILLER_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pejkit/error.hpp"
#include "pejkit/pejcurve.hpp"
#include "pejkit/rng.hpp"
#include "pejkit/trajlog.hpp"

namespace pejkit {

struct DistillConfig {
  std::size_t n_bins = 20;
  double tail_trim_fraction = 0.05;  // per-tail quantile discarded
  double batch_fraction = 0.20;      // of the bin / buffer, per update
  double learning_rate = 0.15;       // N·m per unit mean subgradient
  double momentum = 0.8;
  double tau_cap = kDefaultTauCap;
  std::size_t max_iters = 300;
  double rel_tol = 1e-4;                  // objective change over a 10-iteration window
  std::size_t online_update_period = 50;  // environment steps between online updates
  std::size_t buffer_capacity = 200000;   // samples per group, sliding FIFO
  std::uint64_t rng_seed = 0;

  void validate() const {
    if (n_bins < 1) throw Error(ErrorKind::kUsage, "n_bins must be >= 1");
    if (!(tail_trim_fraction >= 0.0 && tail_trim_fraction < 0.5)) {
      throw Error(ErrorKind::kUsage, "tail_trim_fraction must be in [0, 0.5)");
    }
    if (!(batch_fraction > 0.0 && batch_fraction <= 1.0)) {
      throw Error(ErrorKind::kUsage, "batch_fraction must be in (0, 1]");
    }
    if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
      throw Error(ErrorKind::kUsage, "learning_rate must be > 0");
    }
    if (!(momentum >= 0.0 && momentum < 1.0)) {
      throw Error(ErrorKind::kUsage, "momentum must be in [0, 1)");
    }
    if (!(tau_cap > 0.0) || !std::isfinite(tau_cap)) {
      throw Error(ErrorKind::kUsage, "tau_cap must be > 0");
    }
    if (max_iters == 0) throw Error(ErrorKind::kUsage, "max_iters must be >= 1");
    if (!(rel_tol >= 0.0)) throw Error(ErrorKind::kUsage, "rel_tol must be >= 0");
    if (online_update_period == 0) throw Error(ErrorKind::kUsage, "online_update_period must be >= 1");
    if (buffer_capacity < 10) throw Error(ErrorKind::kUsage, "buffer_capacity must be >= 10");
  }
};

struct BinState {
  double tau = 0.0;       // N·m, current elastic torque estimate
  double velocity = 0.0;  // N·m, momentum accumulator
  std::size_t sample_count = 0;
};

namespace detail {

// Linear-interpolated empirical quantile; reorders `work`.
inline double quantile_inplace(std::vector<double>& work, double p) {
  const std::size_t n = work.size();
  const double h = p * static_cast<double>(n - 1);
  std::size_t lo = static_cast<std::size_t>(h);
  if (lo >= n - 1) return *std::max_element(work.begin(), work.end());
  const double frac = h - static_cast<double>(lo);
  std::nth_element(work.begin(), work.begin() + static_cast<std::ptrdiff_t>(lo), work.end());
  const double a = work[lo];
  if (frac == 0.0) return a;
  const double b = *std::min_element(work.begin() + static_cast<std::ptrdiff_t>(lo) + 1, work.end());
  return a + frac * (b - a);
}

inline BinLayout layout_from_angles(std::vector<double>& angles, const DistillConfig& cfg) {
  if (angles.size() < 10) {
    throw Error(ErrorKind::kData,
                "insufficient data: need at least 10 samples, got " + std::to_string(angles.size()));
  }
  const double q_min = quantile_inplace(angles, cfg.tail_trim_fraction);
  const double q_max = quantile_inplace(angles, 1.0 - cfg.tail_trim_fraction);
  if (!(q_max > q_min)) {
    throw Error(ErrorKind::kData, "degenerate angle range (constant joint angle)");
  }
  BinLayout layout;
  layout.q_min = q_min;
  layout.q_max = q_max;
  layout.n_bins = cfg.n_bins;
  layout.edges.resize(cfg.n_bins + 1);
  for (std::size_t i = 0; i <= cfg.n_bins; ++i) {
    layout.edges[i] = q_min + (q_max - q_min) * (static_cast<double>(i) / static_cast<double>(cfg.n_bins));
  }
  layout.edges.front() = q_min;
  layout.edges.back() = q_max;
  return layout;
}

}  // namespace detail

// Trims tail_trim_fraction of the empirical angle distribution at each end
// and spans the remainder with n_bins equal-width bins.
inline BinLayout make_bin_layout(std::span<const JointSample> samples, const DistillConfig& cfg) {
  std::vector<double> angles;
  angles.reserve(samples.size());
  for (const JointSample& s : samples) angles.push_back(s.q);
  return detail::layout_from_angles(angles, cfg);
}

// Summed positive motor power of the bin at elastic torque tau_pej.
// Convex piecewise-linear in tau_pej.
inline double bin_objective(double tau_pej, std::span<const JointSample> bin_samples) {
  if (bin_samples.empty()) throw Error(ErrorKind::kData, "empty bin");
  double acc = 0.0;
  for (const JointSample& s : bin_samples) {
    acc += std::max(0.0, (s.tau - tau_pej) * s.qdot);
  }
  return acc;
}

// Subgradient of bin_objective: -sum of qdot over samples whose power term
// is strictly positive; 0 is taken at each kink.
inline double bin_subgradient(double tau_pej, std::span<const JointSample> bin_samples) {
  if (bin_samples.empty()) throw Error(ErrorKind::kData, "empty bin");
  double g = 0.0;
  for (const JointSample& s : bin_samples) {
    if ((s.tau - tau_pej) * s.qdot > 0.0) g -= s.qdot;
  }
  return g;
}

// Exact minimiser by enumeration: a convex piecewise-linear function attains
// its minimum at a kink (a sample torque) or at the cap. Candidates are
// visited in order of increasing |tau| so exact ties resolve toward the
// smallest spring preload.
inline double brute_force_bin(std::span<const JointSample> bin_samples, double tau_cap) {
  if (bin_samples.empty()) throw Error(ErrorKind::kData, "empty bin");
  std::vector<double> candidates;
  candidates.reserve(bin_samples.size() + 2);
  for (const JointSample& s : bin_samples) {
    candidates.push_back(std::clamp(s.tau, -tau_cap, tau_cap));
  }
  candidates.push_back(-tau_cap);
  candidates.push_back(tau_cap);
  std::sort(candidates.begin(), candidates.end(), [](double a, double b) {
    return std::abs(a) != std::abs(b) ? std::abs(a) < std::abs(b) : a < b;
  });
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  double best_tau = candidates.front();
  double best_obj = bin_objective(best_tau, bin_samples);
  for (std::size_t i = 1; i < candidates.size(); ++i) {
    const double obj = bin_objective(candidates[i], bin_samples);
    if (obj < best_obj) {
      best_obj = obj;
      best_tau = candidates[i];
    }
  }
  return best_tau;
}

namespace detail {

// A convex piecewise-linear objective is flat only at its minimum, so when
// the iterate reaches an exact zero-power plateau (every term inactive past
// some torque) the minimiser is a whole interval. Resolve that tie toward
// the smallest spring preload: bisect for the point closest to zero on
// [0, tau] that still zeroes the objective. Plateaus with nonzero objective
// are not float-detectable and are left where the iterate parked.
inline double shrink_preload(std::span<const JointSample> bin_samples, double tau, double obj) {
  if (obj != 0.0 || tau == 0.0) return tau;
  if (bin_objective(0.0, bin_samples) == 0.0) return 0.0;
  double lo = 0.0;  // scale factors on tau; J(hi * tau) == 0 holds throughout
  double hi = 1.0;
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (bin_objective(mid * tau, bin_samples) == 0.0) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi * tau;
}

inline BinState fit_bin_impl(std::span<const JointSample> bin_samples, const DistillConfig& cfg,
                             double init, Rng& rng) {
  if (bin_samples.empty()) throw Error(ErrorKind::kData, "empty bin");
  const std::size_t n = bin_samples.size();
  const std::size_t batch =
      std::min(n, std::max<std::size_t>(1, static_cast<std::size_t>(
                                               std::ceil(cfg.batch_fraction * static_cast<double>(n)))));

  double tau = std::clamp(init, -cfg.tau_cap, cfg.tau_cap);
  double vel = 0.0;
  double best_tau = tau;
  double best_obj = bin_objective(tau, bin_samples);
  std::vector<double> obj_history;
  obj_history.reserve(cfg.max_iters + 1);
  obj_history.push_back(best_obj);
  std::vector<std::uint32_t> idx;

  for (std::size_t iter = 0; iter < cfg.max_iters; ++iter) {
    sample_without_replacement(rng, n, batch, idx);
    double g_sum = 0.0;
    for (std::size_t i = 0; i < batch; ++i) {
      const JointSample& s = bin_samples[idx[i]];
      if ((s.tau - tau) * s.qdot > 0.0) g_sum -= s.qdot;
    }
    const double g = g_sum / static_cast<double>(batch);

    vel = cfg.momentum * vel - cfg.learning_rate * g;
    tau = std::clamp(tau + vel, -cfg.tau_cap, cfg.tau_cap);

    // Subgradient steps are not monotone; keep the best iterate seen.
    const double obj = bin_objective(tau, bin_samples);
    if (obj < best_obj) {
      best_obj = obj;
      best_tau = tau;
    }
    obj_history.push_back(obj);
    if (obj_history.size() > 10) {
      const double ref = obj_history[obj_history.size() - 11];
      if (std::abs(obj - ref) <= cfg.rel_tol * std::max(std::abs(ref), 1e-12)) break;
    }
  }

  BinState state;
  state.tau = shrink_preload(bin_samples, best_tau, best_obj);
  state.velocity = vel;
  state.sample_count = n;
  return state;
}

// Fills bins that received no samples by linear interpolation between the
// nearest fitted neighbours; leading/trailing gaps copy the nearest value.
inline void interpolate_empty_bins(const BinLayout& layout, const std::vector<bool>& fitted,
                                   std::vector<double>& tau) {
  const std::size_t n = tau.size();
  std::size_t first = n, last = n;
  for (std::size_t b = 0; b < n; ++b) {
    if (fitted[b]) {
      if (first == n) first = b;
      last = b;
    }
  }
  if (first == n) throw Error(ErrorKind::kData, "all bins empty");
  for (std::size_t b = 0; b < first; ++b) tau[b] = tau[first];
  for (std::size_t b = last + 1; b < n; ++b) tau[b] = tau[last];
  std::size_t left = first;
  for (std::size_t b = first + 1; b <= last; ++b) {
    if (!fitted[b]) continue;
    for (std::size_t e = left + 1; e < b; ++e) {
      const double w = (layout.center(e) - layout.center(left)) / (layout.center(b) - layout.center(left));
      tau[e] = tau[left] + w * (tau[b] - tau[left]);
    }
    left = b;
  }
}

}  // namespace detail

// Momentum subgradient descent on fresh seeded batches:
//   v <- momentum*v - learning_rate*g,  tau <- clip(tau + v, +/-tau_cap),
// with g the batch-mean subgradient. Stops when the full-bin objective moves
// less than rel_tol (relative) over a 10-iteration window, or at max_iters.
inline BinState fit_bin(std::span<const JointSample> bin_samples, const DistillConfig& cfg,
                        double init, Rng& rng) {
  return detail::fit_bin_impl(bin_samples, cfg, init, rng);
}

inline BinState fit_bin(std::span<const JointSample> bin_samples, const DistillConfig& cfg,
                        double init = 0.0) {
  Rng rng(derive_seed(cfg.rng_seed, "fit_bin"));
  return detail::fit_bin_impl(bin_samples, cfg, init, rng);
}

struct GroupDistillation {
  PejCurve curve;
  BinLayout layout;
  std::vector<BinState> bins;              // per bin; tau of empty bins is interpolated
  std::vector<bool> bin_fitted;            // false where the bin had no samples
  std::vector<double> final_objective;     // full-bin objective at the final tau; NaN for empty bins
  std::size_t pooled_samples = 0;
};

// Distils one joint group. Bin fits chain: each bin starts from the previous
// bin's result (first bin from 0).
inline GroupDistillation distill_group(const TrajectoryLog& log, const std::string& group,
                                       const DistillConfig& cfg) {
  GroupDistillation out;
  const std::vector<JointSample> pooled = pool_group(log, group);
  out.pooled_samples = pooled.size();
  try {
    out.layout = make_bin_layout(pooled, cfg);
  } catch (const Error& e) {
    throw Error(e.kind(), "group '" + group + "': " + e.what());
  }

  std::vector<std::vector<JointSample>> bins(cfg.n_bins);
  for (const JointSample& s : pooled) {
    const int b = out.layout.bin_index(s.q);
    if (b >= 0) bins[static_cast<std::size_t>(b)].push_back(s);
  }

  out.bins.resize(cfg.n_bins);
  out.bin_fitted.assign(cfg.n_bins, false);
  out.final_objective.assign(cfg.n_bins, std::numeric_limits<double>::quiet_NaN());
  double prev_tau = 0.0;
  for (std::size_t b = 0; b < cfg.n_bins; ++b) {
    if (bins[b].empty()) continue;
    Rng rng(derive_seed(cfg.rng_seed, group, b));
    out.bins[b] = detail::fit_bin_impl(bins[b], cfg, prev_tau, rng);
    out.bin_fitted[b] = true;
    out.final_objective[b] = bin_objective(out.bins[b].tau, bins[b]);
    prev_tau = out.bins[b].tau;
  }

  std::vector<double> tau(cfg.n_bins, 0.0);
  for (std::size_t b = 0; b < cfg.n_bins; ++b) tau[b] = out.bins[b].tau;
  detail::interpolate_empty_bins(out.layout, out.bin_fitted, tau);
  for (std::size_t b = 0; b < cfg.n_bins; ++b) out.bins[b].tau = tau[b];

  out.curve.tau_cap = cfg.tau_cap;
  out.curve.extrapolation = Extrapolation::kClampEndValue;
  out.curve.breakpoints.resize(cfg.n_bins);
  for (std::size_t b = 0; b < cfg.n_bins; ++b) {
    out.curve.breakpoints[b] = Breakpoint{out.layout.center(b), tau[b]};
  }
  if (cfg.n_bins == 1) {
    // A single bin cannot form a segment; widen it to its edges.
    out.curve.breakpoints = {{out.layout.edges[0], tau[0]}, {out.layout.edges[1], tau[0]}};
  }
  out.curve.validate();
  return out;
}

struct DistillResult {
  std::map<std::string, GroupDistillation> groups;

  std::map<std::string, PejCurve> curves() const {
    std::map<std::string, PejCurve> out;
    for (const auto& [name, g] : groups) out[name] = g.curve;
    return out;
  }
};

// Every non-excluded group of the log, deterministically under cfg.rng_seed.
inline DistillResult distill_full(const TrajectoryLog& log, const DistillConfig& cfg) {
  log.validate();
  cfg.validate();
  DistillResult result;
  for (const std::string& group : log.groups()) {
    if (group == kExcludedGroup) continue;
    result.groups[group] = distill_group(log, group, cfg);
  }
  return result;
}

inline std::map<std::string, PejCurve> distill(const TrajectoryLog& log, const DistillConfig& cfg) {
  return distill_full(log, cfg).curves();
}

struct CurveSnapshot {
  std::size_t step = 0;  // environment steps consumed when the update fired
  std::map<std::string, PejCurve> curves;
};

// Online variant: a sliding FIFO buffer per group; every
// online_update_period steps one momentum update per bin runs on a fresh
// batch drawn from the buffer, with the bin layout recomputed from the live
// buffer. Momentum accumulators persist across updates.
class OnlineDistiller {
 public:
  OnlineDistiller(const DistillConfig& cfg, std::map<std::string, std::string> group_map)
      : cfg_(cfg), group_map_(std::move(group_map)) {
    cfg_.validate();
  }

  // One aligned environment step: a sample per joint. Returns a snapshot
  // when this step triggers an update.
  std::optional<CurveSnapshot> push_step(std::span<const std::pair<std::string, JointSample>> step) {
    for (const auto& [joint, sample] : step) {
      const auto it = group_map_.find(joint);
      if (it == group_map_.end()) {
        throw Error(ErrorKind::kSchema, "joint '" + joint + "' missing from group map");
      }
      if (it->second == kExcludedGroup) continue;
      push_sample(groups_[it->second], sample);
    }
    ++step_count_;
    if (step_count_ % cfg_.online_update_period != 0) return std::nullopt;

    ++tick_count_;
    CurveSnapshot snap;
    snap.step = step_count_;
    for (auto& [name, state] : groups_) {
      update_group(name, state);
      snap.curves[name] = state.curve;
    }
    return snap;
  }

  std::size_t steps() const { return step_count_; }

 private:
  struct GroupState {
    std::vector<JointSample> ring;
    std::size_t next = 0;  // overwrite position once the ring is full
    std::vector<double> tau, vel;
    bool initialised = false;
    PejCurve curve;
  };

  void push_sample(GroupState& g, const JointSample& s) {
    if (g.ring.size() < cfg_.buffer_capacity) {
      g.ring.push_back(s);
    } else {
      g.ring[g.next] = s;
      g.next = (g.next + 1) % cfg_.buffer_capacity;
    }
  }

  void update_group(const std::string& name, GroupState& g) {
    const std::size_t count = g.ring.size();
    angles_scratch_.resize(count);
    for (std::size_t i = 0; i < count; ++i) angles_scratch_[i] = g.ring[i].q;
    BinLayout layout;
    try {
      layout = detail::layout_from_angles(angles_scratch_, cfg_);
    } catch (const Error& e) {
      throw Error(e.kind(), "group '" + name + "': " + e.what());
    }

    const std::size_t nb = cfg_.n_bins;
    if (!g.initialised) {
      g.tau.assign(nb, 0.0);
      g.vel.assign(nb, 0.0);
      g.initialised = true;
    } else {
      // Transport the running estimates to the refreshed bin centers.
      for (std::size_t b = 0; b < nb; ++b) g.tau[b] = eval_curve(g.curve, layout.center(b));
    }

    const std::size_t batch = std::min(
        count, std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(
                                            cfg_.batch_fraction * static_cast<double>(count)))));
    Rng rng(derive_seed(cfg_.rng_seed, "online:" + name, tick_count_));
    sample_without_replacement(rng, count, batch, idx_scratch_);

    gsum_scratch_.assign(nb, 0.0);
    cnt_scratch_.assign(nb, 0);
    for (std::size_t i = 0; i < batch; ++i) {
      const JointSample& s = g.ring[idx_scratch_[i]];
      const int b = layout.bin_index(s.q);
      if (b < 0) continue;
      const auto bi = static_cast<std::size_t>(b);
      if ((s.tau - g.tau[bi]) * s.qdot > 0.0) gsum_scratch_[bi] -= s.qdot;
      ++cnt_scratch_[bi];
    }
    for (std::size_t b = 0; b < nb; ++b) {
      if (cnt_scratch_[b] == 0) continue;  // no gradient information this round
      const double gmean = gsum_scratch_[b] / static_cast<double>(cnt_scratch_[b]);
      g.vel[b] = cfg_.momentum * g.vel[b] - cfg_.learning_rate * gmean;
      g.tau[b] = std::clamp(g.tau[b] + g.vel[b], -cfg_.tau_cap, cfg_.tau_cap);
    }

    // Bins with no buffer occupancy at all take interpolated values.
    occupancy_scratch_.assign(nb, false);
    for (const JointSample& s : g.ring) {
      const int b = layout.bin_index(s.q);
      if (b >= 0) occupancy_scratch_[static_cast<std::size_t>(b)] = true;
    }
    detail::interpolate_empty_bins(layout, occupancy_scratch_, g.tau);

    g.curve.tau_cap = cfg_.tau_cap;
    g.curve.extrapolation = Extrapolation::kClampEndValue;
    g.curve.breakpoints.resize(nb);
    for (std::size_t b = 0; b < nb; ++b) g.curve.breakpoints[b] = Breakpoint{layout.center(b), g.tau[b]};
    if (nb == 1) {
      g.curve.breakpoints = {{layout.edges[0], g.tau[0]}, {layout.edges[1], g.tau[0]}};
    }
  }

  DistillConfig cfg_;
  std::map<std::string, std::string> group_map_;
  std::map<std::string, GroupState> groups_;
  std::size_t step_count_ = 0;
  std::uint64_t tick_count_ = 0;
  std::vector<double> angles_scratch_;
  std::vector<std::uint32_t> idx_scratch_;
  std::vector<double> gsum_scratch_;
  std::vector<std::size_t> cnt_scratch_;
  std::vector<bool> occupancy_scratch_;
};

// Replays a recorded log as the online stream, one environment step at a
// time. A stream shorter than one update period yields no snapshots.
inline std::vector<CurveSnapshot> distill_online(const TrajectoryLog& log, const DistillConfig& cfg) {
  log.validate();
  OnlineDistiller od(cfg, log.group_map);
  std::vector<CurveSnapshot> snapshots;
  std::vector<std::pair<std::string, JointSample>> step;
  for (std::size_t k = 0; k < log.n_steps(); ++k) {
    step.clear();
    for (const auto& joint : log.joint_ids) {
      step.emplace_back(joint, log.samples.at(joint)[k]);
    }
    if (auto snap = od.push_step(step)) snapshots.push_back(std::move(*snap));
  }
  return snapshots;
}

}  // namespace pejkit

#endif  // PEJKIT_DISTILLER_HPP
