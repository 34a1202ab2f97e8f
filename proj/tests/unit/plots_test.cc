/*
 * Copyright 2026 The covidgbm Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "covidgbm/plots.h"

#include <filesystem>
#include <fstream>
#include <random>
#include <regex>
#include <set>
#include <string>

#include "covidgbm/schema.h"
#include "gtest/gtest.h"
#include "testing/expect_error.h"

namespace covidgbm {
namespace {

namespace fs = std::filesystem;

std::size_t count_of(const std::string& text, const std::string& needle) {
  std::size_t count = 0;
  for (auto pos = text.find(needle); pos != std::string::npos;
       pos = text.find(needle, pos + 1)) {
    ++count;
  }
  return count;
}

std::vector<ShapRow> shap_rows(std::size_t records, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> value(0.0, 0.7);
  std::vector<ShapRow> rows;
  for (std::size_t r = 0; r < records; ++r) {
    for (int f = 0; f < kNumFeatures; ++f) {
      rows.push_back({r, f, (gen() & 1u) != 0, value(gen) * (f + 1), -2.0});
    }
  }
  return rows;
}

fs::path write_temp(const std::string& name, const std::string& content) {
  const fs::path path = fs::temp_directory_path() / ("covidgbm_plots_" + name);
  std::ofstream(path) << content;
  return path;
}

TEST(FormatCoordTest, TwoDecimalsWithoutNegativeZero) {
  EXPECT_EQ(format_coord(80.0), "80.00");
  EXPECT_EQ(format_coord(12.345), "12.35");
  EXPECT_EQ(format_coord(-0.001), "0.00");
}

TEST(CurveSvgTest, PerfectSeparationPolyline) {
  const std::vector<XY> points = {{0.0, 0.0}, {0.0, 1.0}, {1.0, 1.0}};
  const std::string svg = render_curve_svg(CurveKind::kRoc, points, std::nullopt, "ROC");
  const PlotFrame frame;
  EXPECT_EQ(frame.map_x(0.0), 80.0);
  EXPECT_EQ(frame.map_y(0.0), 450.0);
  EXPECT_NE(svg.find("points=\"80.00,450.00 80.00,50.00 610.00,50.00\""),
            std::string::npos);
  EXPECT_EQ(svg.rfind("<?xml", 0), 0u);
  EXPECT_NE(svg.find("version=\"1.1\""), std::string::npos);
  EXPECT_EQ(svg.substr(svg.size() - 7), "</svg>\n");
  EXPECT_EQ(count_of(svg, "<polygon"), 0u);
}

TEST(CurveSvgTest, BandDrawnWhenGiven) {
  const std::vector<XY> points = {{0.0, 0.0}, {0.5, 0.8}, {1.0, 1.0}};
  const CurveBand band{{0.0, 0.5, 1.0}, {0.0, 0.7, 1.0}, {0.1, 0.9, 1.0}};
  const std::string svg = render_curve_svg(CurveKind::kRoc, points, band, "ROC");
  EXPECT_EQ(count_of(svg, "<polygon class=\"band\""), 1u);
  EXPECT_EQ(count_of(svg, "<polyline class=\"curve\""), 1u);
}

TEST(CurveSvgTest, TitleIsEscaped) {
  const std::vector<XY> points = {{0.0, 1.0}, {1.0, 0.5}};
  const std::string svg =
      render_curve_svg(CurveKind::kPr, points, std::nullopt, "a < b & c");
  EXPECT_NE(svg.find("a &lt; b &amp; c"), std::string::npos);
}

TEST(BeeswarmSvgTest, OneCirclePerRow) {
  const auto rows = shap_rows(3, 1);
  ASSERT_EQ(rows.size(), 24u);
  EXPECT_EQ(count_of(render_beeswarm_svg(rows, 5), "<circle"), 24u);
}

TEST(BeeswarmSvgTest, DeterministicPerSeed) {
  const auto rows = shap_rows(200, 2);
  EXPECT_EQ(render_beeswarm_svg(rows, 9), render_beeswarm_svg(rows, 9));
}

TEST(BeeswarmSvgTest, NoCoincidentPoints) {
  const auto rows = shap_rows(60, 3);
  const std::string svg = render_beeswarm_svg(rows, 4);
  const std::regex circle("<circle cx=\"([0-9.]+)\" cy=\"([0-9.]+)\"");
  std::set<std::pair<std::string, std::string>> centres;
  std::size_t n = 0;
  for (auto it = std::sregex_iterator(svg.begin(), svg.end(), circle);
       it != std::sregex_iterator(); ++it) {
    centres.insert({(*it)[1], (*it)[2]});
    ++n;
  }
  EXPECT_EQ(n, rows.size());
  EXPECT_EQ(centres.size(), n);
}

TEST(ReadersTest, CurveAndShapFiles) {
  const auto roc = read_roc_csv(write_temp(
      "roc.csv", "threshold,fpr,tpr\ninf,0,0\n0.5,0.25,0.75\n0.1,1,1\n"));
  ASSERT_EQ(roc.size(), 3u);
  EXPECT_EQ(roc[1].x, 0.25);
  EXPECT_EQ(roc[1].y, 0.75);
  const auto shap = read_shap_csv(write_temp(
      "shap.csv",
      "record_index,feature,feature_value,shap_value,base_value\n"
      "0,cough,1,0.5,-2\n0,fever,0,-0.25,-2\n"));
  ASSERT_EQ(shap.size(), 2u);
  EXPECT_EQ(shap[1].feature, 3);
  EXPECT_FALSE(shap[1].feature_value);
}

TEST(ReadersTest, Errors) {
  EXPECT_COVIDGBM_ERROR(read_roc_csv(write_temp("bad1.csv", "fpr\n0\n")),
                        ErrorKind::kParse, "lacks column");
  EXPECT_COVIDGBM_ERROR(read_roc_csv(write_temp("bad2.csv", "fpr,tpr\n0,abc\n")),
                        ErrorKind::kParse, "bad number");
  EXPECT_COVIDGBM_ERROR(
      read_shap_csv(write_temp("bad3.csv",
                               "record_index,feature,feature_value,shap_value,base_value\n"
                               "0,nose,1,0.5,-2\n")),
      ErrorKind::kParse, "unknown feature");
  EXPECT_COVIDGBM_ERROR(read_roc_csv("/nonexistent/covidgbm.csv"),
                        ErrorKind::kIo, "cannot open");
}

}  // namespace
}  // namespace covidgbm
