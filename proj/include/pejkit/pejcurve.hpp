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

// Piecewise-linear parallel-elastic torque-angle curve and the torque
// decomposition tau_total = tau_motor + tau_pej(q). Curves are immutable
// value types; evaluation is pure.

#ifndef PEJKIT_PEJCURVE_HPP
#define PEJKIT_PEJCURVE_HPP

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "pejkit/error.hpp"
#include "pejkit/textio.hpp"
#include "pejkit/trajlog.hpp"

namespace pejkit {

inline constexpr double kDefaultTauCap = 23.5;  // N·m, motor torque limit

enum class Extrapolation { kClampEndValue };

inline std::string to_string(Extrapolation e) {
  (void)e;
  return "clamp_end_value";
}

inline Extrapolation extrapolation_from_string(const std::string& s) {
  if (s == "clamp_end_value") return Extrapolation::kClampEndValue;
  throw Error(ErrorKind::kSchema, "unknown extrapolation mode '" + s + "'");
}

struct Breakpoint {
  double q = 0.0;    // rad
  double tau = 0.0;  // N·m
};

struct PejCurve {
  std::vector<Breakpoint> breakpoints;  // strictly increasing q
  double tau_cap = kDefaultTauCap;
  Extrapolation extrapolation = Extrapolation::kClampEndValue;

  void validate() const {
    if (breakpoints.size() < 2) {
      throw Error(ErrorKind::kSchema, "curve needs at least 2 breakpoints");
    }
    if (!std::isfinite(tau_cap) || tau_cap <= 0.0) {
      throw Error(ErrorKind::kSchema, "invalid torque cap");
    }
    for (std::size_t i = 0; i < breakpoints.size(); ++i) {
      const Breakpoint& b = breakpoints[i];
      if (!std::isfinite(b.q) || !std::isfinite(b.tau)) {
        throw Error(ErrorKind::kSchema, "non-finite breakpoint " + std::to_string(i));
      }
      if (i > 0 && !(b.q > breakpoints[i - 1].q)) {
        throw Error(ErrorKind::kSchema,
                    "breakpoint angles not strictly increasing at index " + std::to_string(i));
      }
      if (std::abs(b.tau) > tau_cap) {
        throw Error(ErrorKind::kSchema,
                    "breakpoint " + std::to_string(i) + " exceeds torque cap (" +
                        format_double(b.tau) + " vs " + format_double(tau_cap) + ")");
      }
    }
  }
};

// Linear interpolation between bracketing breakpoints; outside the fitted
// range the nearest endpoint torque is held (the spring stops deflecting).
// Total over all finite q; |result| <= tau_cap.
inline double eval_curve(const PejCurve& curve, double q) {
  const auto& bp = curve.breakpoints;
  if (q <= bp.front().q) return bp.front().tau;
  if (q >= bp.back().q) return bp.back().tau;
  const auto it = std::upper_bound(bp.begin(), bp.end(), q,
                                   [](double v, const Breakpoint& b) { return v < b.q; });
  const Breakpoint& hi = *it;
  const Breakpoint& lo = *(it - 1);
  const double w = (q - lo.q) / (hi.q - lo.q);
  return lo.tau + w * (hi.tau - lo.tau);
}

// Residual torque the motor must supply once the spring contributes.
inline double motor_torque(const PejCurve& curve, const JointSample& sample) {
  return sample.tau - eval_curve(curve, sample.q);
}

// Signed instantaneous motor power; positivity clipping is a metrics concern.
inline double motor_power(const PejCurve& curve, const JointSample& sample) {
  return motor_torque(curve, sample) * sample.qdot;
}

// Equal-width discretisation of a trimmed angle range.
struct BinLayout {
  double q_min = 0.0;
  double q_max = 0.0;
  std::size_t n_bins = 20;
  std::vector<double> edges;  // n_bins + 1, equally spaced, strictly increasing

  double width() const { return (q_max - q_min) / static_cast<double>(n_bins); }

  double center(std::size_t b) const { return 0.5 * (edges[b] + edges[b + 1]); }

  // -1 when q falls outside [q_min, q_max]; such samples take no part in
  // fitting.
  int bin_index(double q) const {
    if (q < q_min || q > q_max) return -1;
    const double f = (q - q_min) / (q_max - q_min) * static_cast<double>(n_bins);
    int b = static_cast<int>(f);
    if (b >= static_cast<int>(n_bins)) b = static_cast<int>(n_bins) - 1;
    return b;
  }
};

// Curve files: CSV (`q,tau` rows) with a `<stem>_meta.json` sidecar holding
// the cap and extrapolation mode, or a single JSON file with both.

inline void export_curve(const PejCurve& curve, const std::filesystem::path& path, FileFormat format) {
  curve.validate();
  if (format == FileFormat::kCsv) {
    const auto stem = detail::csv_stem(path);
    std::string csv = "q,tau\n";
    for (const Breakpoint& b : curve.breakpoints) {
      csv += format_double(b.q);
      csv += ',';
      csv += format_double(b.tau);
      csv += '\n';
    }
    write_text_file(detail::with_suffix(stem, ".csv"), csv);
    nlohmann::json meta;
    meta["tau_cap"] = curve.tau_cap;
    meta["extrapolation"] = to_string(curve.extrapolation);
    write_text_file(detail::with_suffix(stem, "_meta.json"), meta.dump(2) + "\n");
    return;
  }
  nlohmann::json j;
  std::vector<double> q, tau;
  for (const Breakpoint& b : curve.breakpoints) {
    q.push_back(b.q);
    tau.push_back(b.tau);
  }
  j["q"] = q;
  j["tau"] = tau;
  j["tau_cap"] = curve.tau_cap;
  j["extrapolation"] = to_string(curve.extrapolation);
  write_text_file(path, j.dump() + "\n");
}

// Format inferred from the extension: .json is a bundled file, anything else
// is treated as the CSV stem.
inline PejCurve import_curve(const std::filesystem::path& path) {
  PejCurve curve;
  if (path.extension() == ".json") {
    const nlohmann::json j = detail::parse_json_text(read_text_file(path), path.string());
    const auto q = detail::json_column(j, "q", path.string());
    const auto tau = detail::json_column(j, "tau", path.string());
    if (q.size() != tau.size()) throw Error(ErrorKind::kSchema, "ragged curve columns in " + path.string());
    curve.tau_cap = detail::json_number(j, "tau_cap", path.string());
    if (!j.contains("extrapolation") || !j.at("extrapolation").is_string()) {
      throw Error(ErrorKind::kSchema, "missing 'extrapolation' in " + path.string());
    }
    curve.extrapolation = extrapolation_from_string(j.at("extrapolation").get<std::string>());
    curve.breakpoints.resize(q.size());
    for (std::size_t i = 0; i < q.size(); ++i) curve.breakpoints[i] = Breakpoint{q[i], tau[i]};
    curve.validate();
    return curve;
  }

  const auto stem = detail::csv_stem(path);
  const auto csv_path = detail::with_suffix(stem, ".csv");
  const auto meta_path = detail::with_suffix(stem, "_meta.json");
  const nlohmann::json meta = detail::parse_json_text(read_text_file(meta_path), meta_path.string());
  curve.tau_cap = detail::json_number(meta, "tau_cap", meta_path.string());
  if (!meta.contains("extrapolation") || !meta.at("extrapolation").is_string()) {
    throw Error(ErrorKind::kSchema, "missing 'extrapolation' in " + meta_path.string());
  }
  curve.extrapolation = extrapolation_from_string(meta.at("extrapolation").get<std::string>());

  const std::string text = read_text_file(csv_path);
  std::size_t pos = 0;
  std::size_t line_no = 0;
  bool saw_header = false;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string::npos) eol = text.size();
    const std::string_view line = trim(std::string_view(text).substr(pos, eol - pos));
    pos = eol + 1;
    ++line_no;
    if (line.empty()) continue;
    if (!saw_header) {
      if (line != "q,tau") {
        throw Error(ErrorKind::kSchema, csv_path.string() + ": bad header at line " + std::to_string(line_no));
      }
      saw_header = true;
      continue;
    }
    const auto fields = split(line, ',');
    Breakpoint b;
    if (fields.size() != 2 || !parse_double(trim(fields[0]), b.q) || !parse_double(trim(fields[1]), b.tau)) {
      throw Error(ErrorKind::kSchema, csv_path.string() + ": malformed row at line " + std::to_string(line_no));
    }
    curve.breakpoints.push_back(b);
  }
  curve.validate();
  return curve;
}

}  // namespace pejkit

#endif  // PEJKIT_PEJCURVE_HPP
