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

// Minimal static SVG plotting: axes, polylines, scatter, filled bands and
// bars. Diagnostic output, deterministic byte-for-byte under fixed inputs.

#ifndef PEJKIT_SVGPLOT_HPP
#define PEJKIT_SVGPLOT_HPP

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "pejkit/error.hpp"
#include "pejkit/textio.hpp"

namespace pejkit::svg {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

class Plot {
 public:
  Plot(std::string title, std::string x_label, std::string y_label, int width = 760, int height = 480)
      : title_(std::move(title)), x_label_(std::move(x_label)), y_label_(std::move(y_label)),
        width_(width), height_(height) {}

  void set_x_range(double lo, double hi) { x_lo_ = lo; x_hi_ = hi; has_x_range_ = true; }
  void set_y_range(double lo, double hi) { y_lo_ = lo; y_hi_ = hi; has_y_range_ = true; }

  void add_polyline(std::vector<Point> pts, std::string color, double stroke_width = 1.5,
                    std::string dash = "") {
    for (const Point& p : pts) extend(p.x, p.y);
    polylines_.push_back({std::move(pts), std::move(color), stroke_width, std::move(dash)});
  }

  void add_scatter(std::vector<Point> pts, std::string color, double radius = 1.6,
                   double opacity = 0.45) {
    for (const Point& p : pts) extend(p.x, p.y);
    scatters_.push_back({std::move(pts), std::move(color), radius, opacity});
  }

  // Filled region between lo(x) and hi(x).
  void add_band(std::vector<double> x, std::vector<double> lo, std::vector<double> hi,
                std::string color, double opacity = 0.5) {
    for (std::size_t i = 0; i < x.size(); ++i) {
      extend(x[i], lo[i]);
      extend(x[i], hi[i]);
    }
    bands_.push_back({std::move(x), std::move(lo), std::move(hi), std::move(color), opacity});
  }

  void add_bar(std::string label, double value, std::string color) {
    extend(static_cast<double>(bars_.size()), value);
    extend(static_cast<double>(bars_.size()), 0.0);
    bars_.push_back({std::move(label), value, std::move(color)});
  }

  void add_legend_entry(std::string label, std::string color) {
    legend_.push_back({std::move(label), std::move(color)});
  }

  std::string render() const;

  void write(const std::filesystem::path& path) const { write_text_file(path, render()); }

 private:
  struct Polyline {
    std::vector<Point> pts;
    std::string color;
    double stroke_width;
    std::string dash;
  };
  struct Scatter {
    std::vector<Point> pts;
    std::string color;
    double radius;
    double opacity;
  };
  struct Band {
    std::vector<double> x, lo, hi;
    std::string color;
    double opacity;
  };
  struct Bar {
    std::string label;
    double value;
    std::string color;
  };

  void extend(double x, double y) {
    if (!std::isfinite(x) || !std::isfinite(y)) return;
    data_x_lo_ = std::min(data_x_lo_, x);
    data_x_hi_ = std::max(data_x_hi_, x);
    data_y_lo_ = std::min(data_y_lo_, y);
    data_y_hi_ = std::max(data_y_hi_, y);
    has_data_ = true;
  }

  static std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
  }

  static std::vector<double> nice_ticks(double lo, double hi, int target = 5) {
    std::vector<double> ticks;
    const double span = hi - lo;
    if (!(span > 0.0)) return ticks;
    const double raw = span / target;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (const double m : {1.0, 2.0, 5.0, 10.0}) {
      if (m * mag >= raw) {
        step = m * mag;
        break;
      }
    }
    for (double t = std::ceil(lo / step) * step; t <= hi + 1e-12 * span; t += step) {
      ticks.push_back(std::abs(t) < 1e-12 * span ? 0.0 : t);
    }
    return ticks;
  }

  std::string title_, x_label_, y_label_;
  int width_, height_;
  bool has_x_range_ = false, has_y_range_ = false, has_data_ = false;
  double x_lo_ = 0.0, x_hi_ = 1.0, y_lo_ = 0.0, y_hi_ = 1.0;
  double data_x_lo_ = 1e300, data_x_hi_ = -1e300;
  double data_y_lo_ = 1e300, data_y_hi_ = -1e300;
  std::vector<Polyline> polylines_;
  std::vector<Scatter> scatters_;
  std::vector<Band> bands_;
  std::vector<Bar> bars_;
  std::vector<std::pair<std::string, std::string>> legend_;
};

inline std::string Plot::render() const {
  const double ml = 62.0, mr = 18.0, mt = 34.0, mb = 48.0;
  const double pw = width_ - ml - mr;
  const double ph = height_ - mt - mb;

  double xlo = has_x_range_ ? x_lo_ : (has_data_ ? data_x_lo_ : 0.0);
  double xhi = has_x_range_ ? x_hi_ : (has_data_ ? data_x_hi_ : 1.0);
  double ylo = has_y_range_ ? y_lo_ : (has_data_ ? data_y_lo_ : 0.0);
  double yhi = has_y_range_ ? y_hi_ : (has_data_ ? data_y_hi_ : 1.0);
  if (!bars_.empty() && !has_x_range_) {
    xlo = -0.6;
    xhi = static_cast<double>(bars_.size()) - 0.4;
  }
  if (xhi <= xlo) xhi = xlo + 1.0;
  if (yhi <= ylo) yhi = ylo + 1.0;
  const double xpad = 0.04 * (xhi - xlo);
  const double ypad = 0.06 * (yhi - ylo);
  if (!has_x_range_ && bars_.empty()) {
    xlo -= xpad;
    xhi += xpad;
  }
  if (!has_y_range_) {
    ylo -= ypad;
    yhi += ypad;
  }

  const auto px = [&](double x) { return ml + (x - xlo) / (xhi - xlo) * pw; };
  const auto py = [&](double y) { return mt + ph - (y - ylo) / (yhi - ylo) * ph; };

  std::string s;
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(width_) +
       "\" height=\"" + std::to_string(height_) + "\" viewBox=\"0 0 " + std::to_string(width_) +
       " " + std::to_string(height_) + "\">\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  // Grid + ticks.
  if (bars_.empty()) {
    for (const double t : nice_ticks(xlo, xhi)) {
      s += "<line x1=\"" + num(px(t)) + "\" y1=\"" + num(mt) + "\" x2=\"" + num(px(t)) +
           "\" y2=\"" + num(mt + ph) + "\" stroke=\"#eeeeee\"/>\n";
      s += "<text x=\"" + num(px(t)) + "\" y=\"" + num(mt + ph + 16) +
           "\" font-size=\"11\" text-anchor=\"middle\" font-family=\"sans-serif\">" + num(t) +
           "</text>\n";
    }
  } else {
    for (std::size_t i = 0; i < bars_.size(); ++i) {
      s += "<text x=\"" + num(px(static_cast<double>(i))) + "\" y=\"" + num(mt + ph + 16) +
           "\" font-size=\"11\" text-anchor=\"middle\" font-family=\"sans-serif\">" +
           bars_[i].label + "</text>\n";
    }
  }
  for (const double t : nice_ticks(ylo, yhi)) {
    s += "<line x1=\"" + num(ml) + "\" y1=\"" + num(py(t)) + "\" x2=\"" + num(ml + pw) +
         "\" y2=\"" + num(py(t)) + "\" stroke=\"#eeeeee\"/>\n";
    s += "<text x=\"" + num(ml - 6) + "\" y=\"" + num(py(t) + 4) +
         "\" font-size=\"11\" text-anchor=\"end\" font-family=\"sans-serif\">" + num(t) +
         "</text>\n";
  }

  for (const Band& b : bands_) {
    std::string d;
    for (std::size_t i = 0; i < b.x.size(); ++i) {
      d += (i == 0 ? "M" : "L") + num(px(b.x[i])) + " " + num(py(b.hi[i])) + " ";
    }
    for (std::size_t i = b.x.size(); i-- > 0;) {
      d += "L" + num(px(b.x[i])) + " " + num(py(b.lo[i])) + " ";
    }
    d += "Z";
    s += "<path d=\"" + d + "\" fill=\"" + b.color + "\" fill-opacity=\"" + num(b.opacity) +
         "\" stroke=\"none\"/>\n";
  }

  for (std::size_t i = 0; i < bars_.size(); ++i) {
    const double x0 = px(static_cast<double>(i) - 0.3);
    const double x1 = px(static_cast<double>(i) + 0.3);
    const double y0 = py(std::max(0.0, ylo));
    const double y1 = py(bars_[i].value);
    s += "<rect x=\"" + num(x0) + "\" y=\"" + num(std::min(y0, y1)) + "\" width=\"" + num(x1 - x0) +
         "\" height=\"" + num(std::abs(y0 - y1)) + "\" fill=\"" + bars_[i].color + "\"/>\n";
    s += "<text x=\"" + num(0.5 * (x0 + x1)) + "\" y=\"" + num(std::min(y0, y1) - 5) +
         "\" font-size=\"11\" text-anchor=\"middle\" font-family=\"sans-serif\">" +
         num(bars_[i].value) + "</text>\n";
  }

  for (const Scatter& sc : scatters_) {
    for (const Point& p : sc.pts) {
      s += "<circle cx=\"" + num(px(p.x)) + "\" cy=\"" + num(py(p.y)) + "\" r=\"" + num(sc.radius) +
           "\" fill=\"" + sc.color + "\" fill-opacity=\"" + num(sc.opacity) + "\"/>\n";
    }
  }

  for (const Polyline& pl : polylines_) {
    std::string d;
    for (std::size_t i = 0; i < pl.pts.size(); ++i) {
      d += (i == 0 ? "M" : "L") + num(px(pl.pts[i].x)) + " " + num(py(pl.pts[i].y)) + " ";
    }
    s += "<path d=\"" + d + "\" fill=\"none\" stroke=\"" + pl.color + "\" stroke-width=\"" +
         num(pl.stroke_width) + "\"";
    if (!pl.dash.empty()) s += " stroke-dasharray=\"" + pl.dash + "\"";
    s += "/>\n";
  }

  // Frame, labels, legend.
  s += "<rect x=\"" + num(ml) + "\" y=\"" + num(mt) + "\" width=\"" + num(pw) + "\" height=\"" +
       num(ph) + "\" fill=\"none\" stroke=\"#333333\"/>\n";
  s += "<text x=\"" + num(ml + pw / 2) + "\" y=\"20\" font-size=\"14\" text-anchor=\"middle\" "
       "font-family=\"sans-serif\">" + title_ + "</text>\n";
  s += "<text x=\"" + num(ml + pw / 2) + "\" y=\"" + num(mt + ph + 36) +
       "\" font-size=\"12\" text-anchor=\"middle\" font-family=\"sans-serif\">" + x_label_ +
       "</text>\n";
  s += "<text x=\"16\" y=\"" + num(mt + ph / 2) +
       "\" font-size=\"12\" text-anchor=\"middle\" font-family=\"sans-serif\" transform=\"rotate(-90 16 " +
       num(mt + ph / 2) + ")\">" + y_label_ + "</text>\n";
  double ly = mt + 14;
  for (const auto& [label, color] : legend_) {
    s += "<rect x=\"" + num(ml + 10) + "\" y=\"" + num(ly - 9) +
         "\" width=\"12\" height=\"12\" fill=\"" + color + "\"/>\n";
    s += "<text x=\"" + num(ml + 27) + "\" y=\"" + num(ly + 1) +
         "\" font-size=\"11\" font-family=\"sans-serif\">" + label + "</text>\n";
    ly += 16;
  }
  s += "</svg>\n";
  return s;
}

}  // namespace pejkit::svg

#endif  // PEJKIT_SVGPLOT_HPP
