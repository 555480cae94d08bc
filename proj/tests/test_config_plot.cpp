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

#include <gtest/gtest.h>

#include "spartomo/common.hpp"
#include "spartomo/config.hpp"
#include "spartomo/plot.hpp"

using namespace spartomo;

namespace {

std::string error_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(Config, SectionsCommentsAndTypes) {
  const ConfigFile cf = ConfigFile::parse(
      "top = 1\n"
      "# comment\n"
      "[regularizer]\n"
      "p = 1.5   # trailing\n"
      "transform = shearlet\n"
      "nonneg = false\n"
      "[approx_sc]\n"
      "N_values = 16, 21,28\n"
      "p_list = 1.5,1.1\n",
      "t.cfg");
  EXPECT_EQ(cf.get_int("", "top"), 1);
  EXPECT_DOUBLE_EQ(cf.get_double("regularizer", "p"), 1.5);
  EXPECT_EQ(cf.get_string("regularizer", "transform"), "shearlet");
  EXPECT_FALSE(cf.get_bool("regularizer", "nonneg", true));
  EXPECT_EQ(cf.get_ints("approx_sc", "N_values", {}), (std::vector<int>{16, 21, 28}));
  EXPECT_EQ(cf.get_doubles("approx_sc", "p_list", {}), (std::vector<double>{1.5, 1.1}));
  EXPECT_EQ(cf.get_int("solver", "max_outer", 7), 7);
  EXPECT_FALSE(cf.get_optional_double("experiment", "c_alpha").has_value());
  EXPECT_NO_THROW(cf.require_all_used());
}

TEST(Config, ErrorsNameLineAndField) {
  EXPECT_NE(error_of([] { ConfigFile::parse("[a]\nno equals\n", "x.cfg"); }).find("x.cfg:2"), std::string::npos);
  EXPECT_NE(error_of([] { ConfigFile::parse("[a\n", "x.cfg"); }).find("x.cfg:1"), std::string::npos);
  EXPECT_NE(error_of([] { ConfigFile::parse("a = 1\na = 2\n", "x.cfg"); }).find("duplicate"), std::string::npos);
  const ConfigFile cf = ConfigFile::parse("[regularizer]\np = abc\nq = 3\n[solver]\nmax_outer = 2.5\n", "x.cfg");
  const std::string bad = error_of([&] { cf.get_double("regularizer", "p"); });
  EXPECT_NE(bad.find("x.cfg:2"), std::string::npos);
  EXPECT_NE(bad.find("[regularizer] p"), std::string::npos);
  EXPECT_NE(error_of([&] { cf.get_int("solver", "max_outer"); }).find("integer"), std::string::npos);
  EXPECT_NE(error_of([&] { cf.get_double("experiment", "c_alpha"); }).find("missing required field [experiment] c_alpha"),
            std::string::npos);
  EXPECT_NE(error_of([&] { cf.require_all_used(); }).find("unknown field"), std::string::npos);
}

TEST(Config, DumpRoundTripsAndOverridesWin) {
  ConfigFile cf = ConfigFile::parse("[b]\nz = 1\na = 2\n[a]\nk = v\n");
  cf.set("b", "z", "5");
  const ConfigFile back = ConfigFile::parse(cf.dump());
  EXPECT_EQ(back.dump(), cf.dump());
  EXPECT_EQ(back.get_int("b", "z"), 5);
  EXPECT_EQ(cf.dump(), "[a]\nk = v\n[b]\na = 2\nz = 5\n");
}

TEST(Plot, DeterministicWithAllElements) {
  PlotSeries s{"mean", {16, 32, 64}, {4.0, 2.0, 1.0}, {0.5, 0.2, 0.1}};
  PlotOptions o;
  o.title = "decay <test>";
  o.fit = RateFit{64.0, -1.0, 1.0};
  o.theory_exponent = -1.0 / 3.0;
  const std::string a = render_loglog_svg({s}, o);
  EXPECT_EQ(a, render_loglog_svg({s}, o));
  EXPECT_EQ(a.rfind("<svg", 0), 0u);
  EXPECT_NE(a.find("<polygon"), std::string::npos);           // std band
  EXPECT_NE(a.find("stroke-dasharray=\"8 5\""), std::string::npos);  // fit
  EXPECT_NE(a.find("stroke-dasharray=\"2 4\""), std::string::npos);  // theory
  EXPECT_NE(a.find("decay &lt;test&gt;"), std::string::npos);
  EXPECT_NE(a.find("</svg>"), std::string::npos);
}

TEST(Plot, RejectsMismatchedSeries) {
  PlotSeries s{"bad", {1, 2}, {1.0}, {}};
  EXPECT_THROW(render_loglog_svg({s}, PlotOptions{}), std::invalid_argument);
}
