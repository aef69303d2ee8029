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

// Subcommand implementations behind the command-line front end. Kept in the
// library so tests can drive them directly.

#ifndef PEJKIT_COMMANDS_HPP
#define PEJKIT_COMMANDS_HPP

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pejkit/config_io.hpp"
#include "pejkit/distiller.hpp"
#include "pejkit/error.hpp"
#include "pejkit/gaitsynth.hpp"
#include "pejkit/log_io.hpp"
#include "pejkit/manifest.hpp"
#include "pejkit/metrics.hpp"
#include "pejkit/svgplot.hpp"
#include "pejkit/trajlog.hpp"

namespace pejkit {

struct CommandOptions {
  std::string config_path;  // optional TOML/JSON config
  std::string out_dir;
  std::optional<std::uint64_t> seed;  // overrides the config seed
  std::string format = "csv";         // log/curve file format
};

namespace detail {

inline void require_input(const std::string& path, const std::string& what) {
  if (path.empty() || !std::filesystem::exists(path)) {
    throw Error(ErrorKind::kUsage, "missing " + what + " '" + path + "'");
  }
}

inline std::filesystem::path prepare_out_dir(const std::string& out_dir) {
  if (out_dir.empty()) throw Error(ErrorKind::kUsage, "missing --out directory");
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorKind::kIo, "cannot create output directory '" + out_dir + "'");
  return out_dir;
}

inline nlohmann::json load_config_root(const CommandOptions& opts) {
  if (opts.config_path.empty()) return nlohmann::json::object();
  require_input(opts.config_path, "config file");
  return load_structured_file(opts.config_path);
}

inline FileFormat detect_log_format(const std::filesystem::path& path) {
  return path.extension() == ".json" ? FileFormat::kJson : FileFormat::kCsv;
}

inline std::string curve_file_name(const std::string& group, FileFormat format) {
  return "curve_" + group + (format == FileFormat::kJson ? ".json" : ".csv");
}

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

inline std::vector<svg::Point> decimate(const std::vector<double>& x, const std::vector<double>& y,
                                        std::size_t max_points) {
  std::vector<svg::Point> pts;
  const std::size_t stride = std::max<std::size_t>(1, x.size() / max_points);
  for (std::size_t i = 0; i < x.size(); i += stride) pts.push_back({x[i], y[i]});
  return pts;
}

inline void write_power_decomposition_svg(const TrajectoryLog& log, const EvalSeries& series,
                                          const std::filesystem::path& path) {
  std::vector<double> t(log.n_steps());
  for (std::size_t k = 0; k < t.size(); ++k) t[k] = log.base[k].t;
  const std::size_t stride = std::max<std::size_t>(1, t.size() / 1500);
  std::vector<double> tx, motor, total, zero;
  for (std::size_t k = 0; k < t.size(); k += stride) {
    tx.push_back(t[k]);
    motor.push_back(series.power_with_pej[k]);
    total.push_back(series.power_no_pej[k]);
    zero.push_back(0.0);
  }
  svg::Plot plot("Positive power decomposition", "time [s]", "power [W]");
  plot.add_band(tx, zero, motor, "#d62728", 0.55);
  plot.add_band(tx, motor, total, "#1f77b4", 0.45);
  std::vector<svg::Point> line;
  for (std::size_t i = 0; i < tx.size(); ++i) line.push_back({tx[i], total[i]});
  plot.add_polyline(line, "#333333", 1.0);
  plot.add_legend_entry("motor (residual)", "#d62728");
  plot.add_legend_entry("elastic joint", "#1f77b4");
  plot.write(path);
}

inline void write_scatter_svg(const TrajectoryLog& log, const std::string& group,
                              const std::map<std::string, PejCurve>* curves,
                              const std::filesystem::path& path) {
  const auto pooled = pool_group(log, group);
  std::vector<svg::Point> pts;
  const std::size_t stride = std::max<std::size_t>(1, pooled.size() / 3000);
  double q_lo = pooled.front().q, q_hi = pooled.front().q;
  for (std::size_t i = 0; i < pooled.size(); ++i) {
    q_lo = std::min(q_lo, pooled[i].q);
    q_hi = std::max(q_hi, pooled[i].q);
    if (i % stride == 0) pts.push_back({pooled[i].q, pooled[i].tau});
  }
  svg::Plot plot("Torque-angle samples: " + group, "angle [rad]", "torque [N·m]");
  plot.add_scatter(std::move(pts), "#888888");
  if (curves != nullptr && curves->count(group)) {
    const PejCurve& curve = curves->at(group);
    std::vector<svg::Point> line;
    line.push_back({q_lo, eval_curve(curve, q_lo)});
    for (const Breakpoint& b : curve.breakpoints) {
      if (b.q > q_lo && b.q < q_hi) line.push_back({b.q, b.tau});
    }
    line.push_back({q_hi, eval_curve(curve, q_hi)});
    plot.add_polyline(std::move(line), "#d62728", 2.0, "6,4");
    plot.add_legend_entry("fitted curve", "#d62728");
  }
  plot.write(path);
}

inline void write_power_bars_svg(const MetricsReport& report, const std::filesystem::path& path) {
  svg::Plot plot("Mean positive power", "", "power [W]");
  plot.set_y_range(0.0, 1.15 * std::max({report.mean_positive_power_no_pej,
                                         report.mean_positive_power_with_pej, 1e-9}));
  plot.add_bar("without assist", report.mean_positive_power_no_pej, "#1f77b4");
  plot.add_bar("with assist", report.mean_positive_power_with_pej, "#d62728");
  plot.write(path);
}

}  // namespace detail

// synth: generate a trajectory log from a scenario file.
inline int cmd_synth(const std::string& scenario_path, const CommandOptions& opts) {
  detail::Stopwatch watch;
  detail::require_input(scenario_path, "scenario file");
  const auto out = detail::prepare_out_dir(opts.out_dir);
  const FileFormat format = file_format_from_string(opts.format);

  GaitScenario scenario = scenario_from_json(load_structured_file(scenario_path), scenario_path);
  if (opts.seed) scenario.rng_seed = *opts.seed;
  const TrajectoryLog log = synth(scenario);

  const std::string log_name = format == FileFormat::kJson ? "log.json" : "log.csv";
  save_log(log, out / log_name, format);

  RunManifest manifest;
  manifest.command = "synth";
  manifest.config_hash = config_hash(to_json(scenario));
  manifest.inputs = {scenario_path};
  manifest.outputs = {log_name};
  if (format == FileFormat::kCsv) manifest.outputs = {"log.csv", "log_base.csv", "log_manifest.json"};
  manifest.rng_seed = scenario.rng_seed;
  manifest.extra = {{"kind", to_string(scenario.kind)}, {"steps", log.n_steps()},
                    {"joints", log.joint_ids.size()}};
  manifest.duration_s = watch.seconds();
  manifest.write(out);

  std::cout << "synth: wrote " << log.n_steps() << " steps x " << log.joint_ids.size()
            << " joints to " << out.string() << "\n";
  return 0;
}

// distill: fit one curve per joint group; --online replays the log as a
// stream and writes numbered snapshots instead.
inline int cmd_distill(const std::string& log_path, bool online, const CommandOptions& opts) {
  detail::Stopwatch watch;
  detail::require_input(log_path, "log file");
  const auto out = detail::prepare_out_dir(opts.out_dir);
  const FileFormat curve_format = file_format_from_string(opts.format);

  const nlohmann::json config_root = detail::load_config_root(opts);
  DistillConfig cfg = opts.config_path.empty()
                          ? DistillConfig{}
                          : distill_config_from_json(config_root, opts.config_path);
  if (opts.seed) cfg.rng_seed = *opts.seed;
  cfg.validate();

  const TrajectoryLog log = load_log(log_path, detail::detect_log_format(log_path));

  RunManifest manifest;
  manifest.command = online ? "distill --online" : "distill";
  manifest.config_hash = config_hash(to_json(cfg));
  manifest.inputs = {log_path};
  if (!opts.config_path.empty()) manifest.inputs.push_back(opts.config_path);
  manifest.rng_seed = cfg.rng_seed;

  if (online) {
    const auto snapshots = distill_online(log, cfg);
    if (snapshots.empty()) {
      std::cerr << "warning: log shorter than one update period ("
                << cfg.online_update_period << " steps); no snapshots emitted\n";
    }
    for (const CurveSnapshot& snap : snapshots) {
      char step_tag[32];
      std::snprintf(step_tag, sizeof step_tag, "%06zu", snap.step);
      for (const auto& [group, curve] : snap.curves) {
        const std::string name = "snapshot_" + std::string(step_tag) + "_" +
                                 detail::curve_file_name(group, curve_format);
        export_curve(curve, out / name, curve_format);
        manifest.outputs.push_back(name);
      }
    }
    if (!snapshots.empty()) {
      for (const auto& [group, curve] : snapshots.back().curves) {
        const std::string name = detail::curve_file_name(group, curve_format);
        export_curve(curve, out / name, curve_format);
        manifest.outputs.push_back(name);
      }
    }
    manifest.extra = {{"snapshots", snapshots.size()},
                      {"final_step", snapshots.empty() ? 0 : snapshots.back().step}};
    manifest.duration_s = watch.seconds();
    manifest.write(out);
    std::cout << "distill --online: " << snapshots.size() << " snapshots to " << out.string()
              << "\n";
    return 0;
  }

  std::size_t produced = 0;
  std::optional<Error> first_error;
  nlohmann::json objectives = nlohmann::json::object();
  for (const std::string& group : log.groups()) {
    if (group == kExcludedGroup) continue;
    try {
      const GroupDistillation fit = distill_group(log, group, cfg);
      const std::string name = detail::curve_file_name(group, curve_format);
      export_curve(fit.curve, out / name, curve_format);
      manifest.outputs.push_back(name);
      nlohmann::json per_bin = nlohmann::json::array();
      for (const double obj : fit.final_objective) {
        if (std::isnan(obj)) {
          per_bin.push_back(nullptr);
        } else {
          per_bin.push_back(obj);
        }
      }
      objectives[group] = per_bin;
      ++produced;
      std::cout << "distill: group '" << group << "' (" << fit.pooled_samples << " samples) -> "
                << name << "\n";
    } catch (const Error& e) {
      std::cerr << "warning: skipping group '" << group << "': " << e.what() << "\n";
      if (!first_error) first_error = e;
    }
  }
  if (produced == 0) {
    if (first_error) throw *first_error;
    throw Error(ErrorKind::kData, "log has no distillable joint groups");
  }
  manifest.extra = {{"final_objective", objectives}};
  manifest.duration_s = watch.seconds();
  manifest.write(out);
  return 0;
}

// eval: metrics report plus diagnostic plots for one log, with curves from
// a directory or with --no-pej. with_series additionally dumps the
// per-timestep power/CoT/velocity columns as CSV.
inline int cmd_eval(const std::string& log_path, const std::string& curves_dir, bool no_pej,
                    const CommandOptions& opts, bool with_series = false) {
  detail::Stopwatch watch;
  detail::require_input(log_path, "log file");
  const auto out = detail::prepare_out_dir(opts.out_dir);

  const nlohmann::json config_root = detail::load_config_root(opts);
  const PowerConfig pcfg = opts.config_path.empty()
                               ? PowerConfig{}
                               : power_config_from_json(config_root, opts.config_path);

  const TrajectoryLog log = load_log(log_path, detail::detect_log_format(log_path));

  std::map<std::string, PejCurve> curves;
  if (!no_pej) {
    if (curves_dir.empty() || !std::filesystem::is_directory(curves_dir)) {
      throw Error(ErrorKind::kUsage, "missing curves directory '" + curves_dir + "'");
    }
    for (const std::string& group : log.groups()) {
      if (group == kExcludedGroup) continue;
      if (!pcfg.included_groups.empty() && !pcfg.included_groups.count(group)) continue;
      const auto json_path = std::filesystem::path(curves_dir) / ("curve_" + group + ".json");
      const auto csv_path = std::filesystem::path(curves_dir) / ("curve_" + group + ".csv");
      if (std::filesystem::exists(json_path)) {
        curves[group] = import_curve(json_path);
      } else if (std::filesystem::exists(csv_path)) {
        curves[group] = import_curve(csv_path);
      } else {
        throw Error(ErrorKind::kSchema,
                    "no curve for group '" + group + "' in '" + curves_dir + "'");
      }
    }
  }

  EvalSeries series;
  const MetricsReport report = evaluate(log, no_pej ? nullptr : &curves, pcfg, &series);
  save_report(report, out / "report.json");

  if (with_series) {
    std::string csv = "t,power_no_pej,power_with_pej,cot,v_windowed\n";
    for (std::size_t k = 0; k < log.n_steps(); ++k) {
      csv += format_double(log.base[k].t);
      csv += ',';
      csv += format_double(series.power_no_pej[k]);
      csv += ',';
      csv += format_double(series.power_with_pej[k]);
      csv += ',';
      csv += format_double(series.cot[k]);
      csv += ',';
      csv += format_double(series.velocity[k]);
      csv += '\n';
    }
    write_text_file(out / "series.csv", csv);
  }

  detail::write_power_decomposition_svg(log, series, out / "power_decomposition.svg");
  detail::write_power_bars_svg(report, out / "power_bars.svg");
  RunManifest manifest;
  manifest.command = "eval";
  manifest.config_hash = config_hash(to_json(pcfg));
  manifest.inputs = {log_path};
  if (!no_pej) manifest.inputs.push_back(curves_dir);
  if (!opts.config_path.empty()) manifest.inputs.push_back(opts.config_path);
  manifest.outputs = {"report.json", "power_decomposition.svg", "power_bars.svg"};
  if (with_series) manifest.outputs.push_back("series.csv");
  for (const std::string& group : log.groups()) {
    if (group == kExcludedGroup) continue;
    const std::string name = "scatter_" + group + ".svg";
    detail::write_scatter_svg(log, group, no_pej ? nullptr : &curves, out / name);
    manifest.outputs.push_back(name);
  }
  manifest.duration_s = watch.seconds();
  manifest.write(out);

  std::printf("eval: mean positive power %.6g W (no assist) / %.6g W (as evaluated)\n",
              report.mean_positive_power_no_pej, report.mean_positive_power_with_pej);
  std::printf("eval: mean CoT %.6g, offload ratio %.4g %%, tracking RMS %.6g m/s\n",
              report.mean_cot, report.offload_ratio, report.tracking_error_rms);
  return 0;
}

// compare: power saving and metric deltas of an assisted run against a
// baseline run.
inline int cmd_compare(const std::string& report_a_path, const std::string& report_b_path,
                       const CommandOptions& opts) {
  detail::Stopwatch watch;
  detail::require_input(report_a_path, "baseline report");
  detail::require_input(report_b_path, "comparison report");
  const MetricsReport a = load_report(report_a_path);
  const MetricsReport b = load_report(report_b_path);
  if (a.robot_mass != b.robot_mass || a.gravity != b.gravity) {
    throw Error(ErrorKind::kData, "cannot compare: robot parameters differ between reports");
  }

  const double saving =
      power_saving_from_means(a.mean_positive_power_with_pej, b.mean_positive_power_with_pej);
  const double offload_delta = b.offload_ratio - a.offload_ratio;
  const double tracking_delta = b.tracking_error_rms - a.tracking_error_rms;
  const double cot_delta = b.mean_cot - a.mean_cot;

  std::printf("%-28s %14s %14s %14s\n", "metric", "baseline", "candidate", "delta");
  std::printf("%-28s %14.6g %14.6g %14.6g\n", "mean positive power [W]",
              a.mean_positive_power_with_pej, b.mean_positive_power_with_pej,
              b.mean_positive_power_with_pej - a.mean_positive_power_with_pej);
  std::printf("%-28s %14.6g %14.6g %14.6g\n", "mean CoT", a.mean_cot, b.mean_cot, cot_delta);
  std::printf("%-28s %14.6g %14.6g %14.6g\n", "offload ratio [%]", a.offload_ratio,
              b.offload_ratio, offload_delta);
  std::printf("%-28s %14.6g %14.6g %14.6g\n", "tracking RMS [m/s]", a.tracking_error_rms,
              b.tracking_error_rms, tracking_delta);
  std::printf("power saving: %.4g %%\n", saving);

  if (!opts.out_dir.empty()) {
    const auto out = detail::prepare_out_dir(opts.out_dir);
    nlohmann::json j;
    j["power_saving"] = saving;
    j["offload_ratio_delta"] = offload_delta;
    j["tracking_error_delta"] = tracking_delta;
    j["mean_cot_delta"] = cot_delta;
    j["baseline"] = report_to_json(a);
    j["candidate"] = report_to_json(b);
    write_text_file(out / "comparison.json", j.dump(2) + "\n");

    RunManifest manifest;
    manifest.command = "compare";
    manifest.config_hash = config_hash(nlohmann::json::object());
    manifest.inputs = {report_a_path, report_b_path};
    manifest.outputs = {"comparison.json"};
    manifest.duration_s = watch.seconds();
    manifest.write(out);
  }
  return 0;
}

}  // namespace pejkit

#endif  // PEJKIT_COMMANDS_HPP
