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

#ifndef COVIDGBM_PLOTS_H_
#define COVIDGBM_PLOTS_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace covidgbm {

// Pixel geometry shared by the curve plots. Data coordinates are in [0, 1]
// on both axes; SVG's y axis points down.
struct PlotFrame {
  double width = 640.0;
  double height = 520.0;
  double left = 80.0;
  double right = 30.0;
  double top = 50.0;
  double bottom = 70.0;

  double plot_width() const { return width - left - right; }
  double plot_height() const { return height - top - bottom; }
  double map_x(double x) const { return left + x * plot_width(); }
  double map_y(double y) const { return top + (1.0 - y) * plot_height(); }
};

// Coordinates are written with two decimals.
std::string format_coord(double pixels);

struct XY {
  double x;
  double y;
};

struct CurveBand {
  std::vector<double> x;
  std::vector<double> lo;
  std::vector<double> hi;
};

enum class CurveKind { kRoc, kPr };

// Polyline chart with axes, ticks and labels. The band, when present, is
// drawn as a shaded polygon under the curve.
std::string render_curve_svg(CurveKind kind, std::span<const XY> points,
                             const std::optional<CurveBand>& band,
                             const std::string& title,
                             const PlotFrame& frame = {});

// One row of the per-record SHAP CSV.
struct ShapRow {
  std::size_t record_index = 0;
  int feature = 0;
  bool feature_value = false;
  double shap_value = 0.0;
  double base_value = 0.0;
};

// Horizontal strip per feature, ordered by mean |SHAP| (ties in schema
// order), one <circle> per row, filled by feature value. Vertical offsets
// come from a seeded hash and stack points that share an x bin so they do
// not overlap until the strip is full.
std::string render_beeswarm_svg(std::span<const ShapRow> rows,
                                std::uint64_t seed);

// Readers for the CSV files written by the evaluate and explain commands.
// Malformed input raises a parse error.
std::vector<XY> read_roc_csv(const std::filesystem::path& path);
std::vector<XY> read_pr_csv(const std::filesystem::path& path);
CurveBand read_band_csv(const std::filesystem::path& path);
std::vector<ShapRow> read_shap_csv(const std::filesystem::path& path);

}  // namespace covidgbm

#endif  // COVIDGBM_PLOTS_H_
