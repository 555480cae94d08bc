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

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "spartomo/rate_fit.hpp"

namespace spartomo {

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> mean;
  std::vector<double> stddev;  // empty: no band
};

struct PlotOptions {
  std::string title;
  std::string x_label = "N";
  std::string y_label;
  // Drawn for the first series: dashed c x^beta and a dotted line of the
  // theoretical slope through the first series' geometric center.
  std::optional<RateFit> fit;
  std::optional<double> theory_exponent;
  int width = 640;
  int height = 440;
};

// Self-contained log-log SVG. Output depends only on the inputs; numbers are
// printed with fixed precision. Nonpositive values are dropped from the axes.
std::string render_loglog_svg(const std::vector<PlotSeries>& series, const PlotOptions& opts);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace spartomo
