/*
Copyright 2026 The spartomo Authors
Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

                http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#include "spartomo/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace spartomo {

namespace {

const char* const kColors[] = {"#1f5fbf", "#c0392b", "#27ae60", "#8e44ad", "#d68910", "#17a589", "#555555"};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Axes {
  double lx0, lx1, ly0, ly1;  // log10 ranges
  double left, right, top, bottom;
  double px(double x) const { return left + (std::log10(x) - lx0) / (lx1 - lx0) * (right - left); }
  double py(double y) const { return bottom - (std::log10(y) - ly0) / (ly1 - ly0) * (bottom - top); }
};

std::string polyline(const Axes& ax, const std::vector<double>& x, const std::vector<double>& y) {
  std::string pts;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0 && y[i] > 0.0)) continue;
    if (!pts.empty()) pts += ' ';
    pts += fmt("%.2f", ax.px(x[i])) + "," + fmt("%.2f", ax.py(y[i]));
  }
  return pts;
}

}  // namespace

std::string render_loglog_svg(const std::vector<PlotSeries>& series, const PlotOptions& opts) {
  double xmin = HUGE_VAL, xmax = -HUGE_VAL, ymin = HUGE_VAL, ymax = -HUGE_VAL;
  for (const auto& s : series) {
    if (s.x.size() != s.mean.size() || (!s.stddev.empty() && s.stddev.size() != s.x.size()))
      throw std::invalid_argument("render_loglog_svg: series sizes differ");
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!(s.x[i] > 0.0 && s.mean[i] > 0.0)) continue;
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      const double sd = s.stddev.empty() ? 0.0 : s.stddev[i];
      ymin = std::min(ymin, s.mean[i] - sd > 0.0 ? s.mean[i] - sd : s.mean[i]);
      ymax = std::max(ymax, s.mean[i] + sd);
    }
  }
  if (!(xmin <= xmax)) xmin = 1.0, xmax = 10.0, ymin = 1.0, ymax = 10.0;
  Axes ax{std::floor(std::log10(xmin) * 10.0) / 10.0, std::ceil(std::log10(xmax) * 10.0) / 10.0,
          std::floor(std::log10(ymin) * 10.0) / 10.0, std::ceil(std::log10(ymax) * 10.0) / 10.0,
          80.0, opts.width - 20.0, 40.0, opts.height - 60.0};
  if (ax.lx1 - ax.lx0 < 0.1) ax.lx0 -= 0.05, ax.lx1 += 0.05;
  if (ax.ly1 - ax.ly0 < 0.1) ax.ly0 -= 0.05, ax.ly1 += 0.05;

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(opts.width) + "\" height=\"" +
         std::to_string(opts.height) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += "<text x=\"" + fmt("%.1f", opts.width / 2.0) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" +
         escape(opts.title) + "</text>\n";
  svg += "<rect x=\"" + fmt("%.2f", ax.left) + "\" y=\"" + fmt("%.2f", ax.top) + "\" width=\"" +
         fmt("%.2f", ax.right - ax.left) + "\" height=\"" + fmt("%.2f", ax.bottom - ax.top) +
         "\" fill=\"none\" stroke=\"black\"/>\n";

  // Ticks at 1, 2, 5 times powers of ten inside the range.
  auto ticks = [](double l0, double l1) {
    std::vector<double> t;
    for (int e = int(std::floor(l0)); e <= int(std::ceil(l1)); ++e)
      for (double m : {1.0, 2.0, 5.0}) {
        const double v = m * std::pow(10.0, e);
        if (std::log10(v) >= l0 - 1e-12 && std::log10(v) <= l1 + 1e-12) t.push_back(v);
      }
    return t;
  };
  for (double t : ticks(ax.lx0, ax.lx1)) {
    const double x = ax.px(t);
    svg += "<line x1=\"" + fmt("%.2f", x) + "\" y1=\"" + fmt("%.2f", ax.bottom) + "\" x2=\"" + fmt("%.2f", x) +
           "\" y2=\"" + fmt("%.2f", ax.bottom + 5) + "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + fmt("%.2f", x) + "\" y=\"" + fmt("%.2f", ax.bottom + 18) + "\" text-anchor=\"middle\">" +
           fmt("%g", t) + "</text>\n";
  }
  for (double t : ticks(ax.ly0, ax.ly1)) {
    const double y = ax.py(t);
    svg += "<line x1=\"" + fmt("%.2f", ax.left - 5) + "\" y1=\"" + fmt("%.2f", y) + "\" x2=\"" +
           fmt("%.2f", ax.left) + "\" y2=\"" + fmt("%.2f", y) + "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + fmt("%.2f", ax.left - 8) + "\" y=\"" + fmt("%.2f", y + 4) + "\" text-anchor=\"end\">" +
           fmt("%.3g", t) + "</text>\n";
  }
  svg += "<text x=\"" + fmt("%.2f", (ax.left + ax.right) / 2) + "\" y=\"" + fmt("%.2f", opts.height - 20.0) +
         "\" text-anchor=\"middle\">" + escape(opts.x_label) + "</text>\n";
  svg += "<text x=\"16\" y=\"" + fmt("%.2f", (ax.top + ax.bottom) / 2) +
         "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " + fmt("%.2f", (ax.top + ax.bottom) / 2) + ")\">" +
         escape(opts.y_label) + "</text>\n";

  svg += "<defs><clipPath id=\"area\"><rect x=\"" + fmt("%.2f", ax.left) + "\" y=\"" + fmt("%.2f", ax.top) +
         "\" width=\"" + fmt("%.2f", ax.right - ax.left) + "\" height=\"" + fmt("%.2f", ax.bottom - ax.top) +
         "\"/></clipPath></defs>\n<g clip-path=\"url(#area)\">\n";
  for (std::size_t si = 0; si < series.size(); ++si) {
    const auto& s = series[si];
    const char* color = kColors[si % std::size(kColors)];
    if (!s.stddev.empty()) {
      std::vector<double> bx, by;
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        bx.push_back(s.x[i]);
        by.push_back(s.mean[i] + s.stddev[i]);
      }
      for (std::size_t i = s.x.size(); i-- > 0;) {
        bx.push_back(s.x[i]);
        by.push_back(std::max(s.mean[i] - s.stddev[i], s.mean[i] * 1e-3));
      }
      svg += "<polygon points=\"" + polyline(ax, bx, by) + "\" fill=\"" + color +
             "\" fill-opacity=\"0.18\" stroke=\"none\"/>\n";
    }
    svg += "<polyline points=\"" + polyline(ax, s.x, s.mean) + "\" fill=\"none\" stroke=\"" + color +
           "\" stroke-width=\"2\"/>\n";
    svg += "<text x=\"" + fmt("%.2f", ax.right - 8) + "\" y=\"" + fmt("%.2f", ax.top + 16 + 15.0 * si) +
           "\" text-anchor=\"end\" fill=\"" + color + "\">" + escape(s.label) + "</text>\n";
  }

  if (!series.empty() && !series[0].x.empty()) {
    const auto& s = series[0];
    const std::vector<double> ends{std::pow(10.0, ax.lx0), std::pow(10.0, ax.lx1)};
    if (opts.fit) {
      std::vector<double> y;
      for (double x : ends) y.push_back(opts.fit->c * std::pow(x, opts.fit->beta_exp));
      svg += "<polyline points=\"" + polyline(ax, ends, y) +
             "\" fill=\"none\" stroke=\"black\" stroke-dasharray=\"8 5\"/>\n";
      svg += "<text x=\"" + fmt("%.2f", ax.left + 8) + "\" y=\"" + fmt("%.2f", ax.bottom - 24) + "\">fit: N^" +
             fmt("%.4f", opts.fit->beta_exp) + "</text>\n";
    }
    if (opts.theory_exponent) {
      double lx = 0.0, ly = 0.0;
      int n = 0;
      for (std::size_t i = 0; i < s.x.size(); ++i)
        if (s.x[i] > 0.0 && s.mean[i] > 0.0) lx += std::log10(s.x[i]), ly += std::log10(s.mean[i]), ++n;
      if (n > 0) {
        lx /= n;
        ly /= n;
        std::vector<double> y;
        for (double x : ends) y.push_back(std::pow(10.0, ly + *opts.theory_exponent * (std::log10(x) - lx)));
        svg += "<polyline points=\"" + polyline(ax, ends, y) +
               "\" fill=\"none\" stroke=\"black\" stroke-dasharray=\"2 4\"/>\n";
        svg += "<text x=\"" + fmt("%.2f", ax.left + 8) + "\" y=\"" + fmt("%.2f", ax.bottom - 8) + "\">theory: N^" +
               fmt("%.4f", *opts.theory_exponent) + "</text>\n";
      }
    }
  }
  svg += "</g>\n</svg>\n";
  return svg;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << text;
}

}  // namespace spartomo
