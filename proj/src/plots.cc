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

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "covidgbm/error.h"
#include "covidgbm/random.h"
#include "covidgbm/schema.h"

namespace covidgbm {
namespace {

constexpr const char* kCurveColor = "#1f4e9c";
constexpr const char* kBandColor = "#7fa7e0";
constexpr const char* kZeroColor = "#1f77b4";
constexpr const char* kOneColor = "#d62728";

std::string format_tick(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.2f", value);
  return buffer;
}

std::string svg_header(double width, double height) {
  return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
         "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
         format_coord(width) + "\" height=\"" + format_coord(height) +
         "\" viewBox=\"0 0 " + format_coord(width) + " " +
         format_coord(height) + "\" font-family=\"sans-serif\">\n"
         "<rect x=\"0\" y=\"0\" width=\"" + format_coord(width) +
         "\" height=\"" + format_coord(height) + "\" fill=\"#ffffff\"/>\n";
}

std::string line(double x1, double y1, double x2, double y2,
                 const std::string& style) {
  return "<line x1=\"" + format_coord(x1) + "\" y1=\"" + format_coord(y1) +
         "\" x2=\"" + format_coord(x2) + "\" y2=\"" + format_coord(y2) +
         "\" " + style + "/>\n";
}

std::string xml_escape(const std::string& raw) {
  std::string out;
  for (const char c : raw) {
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

std::string text(double x, double y, const std::string& anchor,
                 const std::string& body, const std::string& extra = "") {
  return "<text x=\"" + format_coord(x) + "\" y=\"" + format_coord(y) +
         "\" text-anchor=\"" + anchor + "\"" + extra + ">" +
         xml_escape(body) + "</text>\n";
}

// ---------------------------------------------------------------------------
// CSV reading

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(const std::string& name,
                     const std::filesystem::path& path) const {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) {
      throw ParseError("'" + path.string() + "' lacks column '" + name + "'");
    }
    return static_cast<std::size_t>(it - header.begin());
  }
};

std::vector<std::string> split_commas(const std::string& line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    if (comma == std::string::npos) {
      cells.push_back(line.substr(start));
      return cells;
    }
    cells.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

Table read_table(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  Table table;
  std::string line;
  bool first = true;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto cells = split_commas(line);
    if (first) {
      table.header = std::move(cells);
      first = false;
      continue;
    }
    if (cells.size() != table.header.size()) {
      throw ParseError("malformed CSV '" + path.string() + "' at line " +
                       std::to_string(line_no));
    }
    table.rows.push_back(std::move(cells));
  }
  if (first) throw ParseError("'" + path.string() + "' is empty");
  if (table.rows.empty()) {
    throw ParseError("'" + path.string() + "' has no data rows");
  }
  return table;
}

double to_real(const std::string& cell, const std::filesystem::path& path) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(cell, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != cell.size()) {
    throw ParseError("bad number '" + cell + "' in '" + path.string() + "'");
  }
  return value;
}

std::vector<XY> read_xy(const std::filesystem::path& path, const char* x_name,
                        const char* y_name) {
  const Table table = read_table(path);
  const auto xc = table.column(x_name, path);
  const auto yc = table.column(y_name, path);
  std::vector<XY> points;
  for (const auto& row : table.rows) {
    points.push_back({to_real(row[xc], path), to_real(row[yc], path)});
  }
  return points;
}

// Splits [lo, hi] into four equal intervals.
std::array<double, 5> ticks(double lo, double hi) {
  std::array<double, 5> t{};
  for (int i = 0; i < 5; ++i) t[i] = lo + (hi - lo) * i / 4.0;
  return t;
}

}  // namespace

std::string format_coord(double pixels) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.2f", pixels);
  std::string s = buffer;
  if (s == "-0.00") s = "0.00";
  return s;
}

std::string render_curve_svg(CurveKind kind, std::span<const XY> points,
                             const std::optional<CurveBand>& band,
                             const std::string& title,
                             const PlotFrame& frame) {
  const bool roc = kind == CurveKind::kRoc;
  std::string svg = svg_header(frame.width, frame.height);
  svg += text(frame.width / 2, frame.top / 2 + 6, "middle", title,
              " font-size=\"16\"");

  // Axes and ticks.
  const std::string axis = "stroke=\"#000000\" stroke-width=\"1\"";
  svg += line(frame.map_x(0), frame.map_y(0), frame.map_x(1), frame.map_y(0),
              axis);
  svg += line(frame.map_x(0), frame.map_y(0), frame.map_x(0), frame.map_y(1),
              axis);
  for (const double t : ticks(0.0, 1.0)) {
    svg += line(frame.map_x(t), frame.map_y(0), frame.map_x(t),
                frame.map_y(0) + 5, axis);
    svg += text(frame.map_x(t), frame.map_y(0) + 20, "middle", format_tick(t),
                " font-size=\"12\"");
    svg += line(frame.map_x(0) - 5, frame.map_y(t), frame.map_x(0),
                frame.map_y(t), axis);
    svg += text(frame.map_x(0) - 8, frame.map_y(t) + 4, "end", format_tick(t),
                " font-size=\"12\"");
  }
  svg += text(frame.map_x(0.5), frame.height - 20, "middle",
              roc ? "False positive rate (1 - specificity)" : "Recall",
              " font-size=\"14\"");
  const double label_x = 24;
  const double label_y = frame.map_y(0.5);
  svg += text(label_x, label_y, "middle",
              roc ? "True positive rate (sensitivity)" : "Precision",
              " font-size=\"14\" transform=\"rotate(-90 " +
                  format_coord(label_x) + " " + format_coord(label_y) + ")\"");
  if (roc) {
    svg += line(frame.map_x(0), frame.map_y(0), frame.map_x(1), frame.map_y(1),
                "stroke=\"#999999\" stroke-width=\"1\" stroke-dasharray=\"4 4\"");
  }

  if (band && !band->x.empty()) {
    std::string poly;
    for (std::size_t i = 0; i < band->x.size(); ++i) {
      poly += format_coord(frame.map_x(band->x[i])) + "," +
              format_coord(frame.map_y(band->hi[i])) + " ";
    }
    for (std::size_t i = band->x.size(); i-- > 0;) {
      poly += format_coord(frame.map_x(band->x[i])) + "," +
              format_coord(frame.map_y(band->lo[i]));
      if (i > 0) poly += " ";
    }
    svg += "<polygon class=\"band\" points=\"" + poly + "\" fill=\"" +
           kBandColor + "\" fill-opacity=\"0.35\" stroke=\"none\"/>\n";
  }

  std::string pts;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (i > 0) pts += " ";
    pts += format_coord(frame.map_x(points[i].x)) + "," +
           format_coord(frame.map_y(points[i].y));
  }
  svg += "<polyline class=\"curve\" points=\"" + pts +
         "\" fill=\"none\" stroke=\"" + kCurveColor +
         "\" stroke-width=\"2\"/>\n";
  svg += "</svg>\n";
  return svg;
}

std::string render_beeswarm_svg(std::span<const ShapRow> rows,
                                std::uint64_t seed) {
  // Rank features by mean |SHAP| over their rows.
  std::array<double, kNumFeatures> sum_abs{};
  std::array<std::size_t, kNumFeatures> count{};
  double lo = 0.0;
  double hi = 0.0;
  for (const ShapRow& r : rows) {
    sum_abs[r.feature] += std::abs(r.shap_value);
    ++count[r.feature];
    lo = std::min(lo, r.shap_value);
    hi = std::max(hi, r.shap_value);
  }
  std::vector<int> order;
  for (int f = 0; f < kNumFeatures; ++f) {
    if (count[f] > 0) order.push_back(f);
  }
  auto mean = [&](int f) { return sum_abs[f] / static_cast<double>(count[f]); };
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return mean(a) > mean(b); });
  if (hi - lo <= 0.0) {
    lo = -1.0;
    hi = 1.0;
  }
  const double pad = 0.05 * (hi - lo);
  lo -= pad;
  hi += pad;

  constexpr double kLeft = 170.0;
  constexpr double kRight = 30.0;
  constexpr double kTop = 50.0;
  constexpr double kBottom = 80.0;
  constexpr double kStrip = 56.0;
  constexpr double kWidth = 760.0;
  constexpr double kRadius = 2.0;
  constexpr double kSlot = 3.6;
  const double height = kTop + kStrip * static_cast<double>(order.size()) +
                        kBottom;
  const double plot_width = kWidth - kLeft - kRight;
  auto map_x = [&](double v) { return kLeft + (v - lo) / (hi - lo) * plot_width; };
  const double half_strip = kStrip / 2.0 - kRadius - 2.0;
  const int max_slot = static_cast<int>(half_strip / kSlot);

  std::string svg = svg_header(kWidth, height);
  svg += text(kWidth / 2, kTop / 2 + 6, "middle",
              "SHAP values by feature (ordered by mean |SHAP|)",
              " font-size=\"16\"");
  const double plot_bottom = kTop + kStrip * static_cast<double>(order.size());
  svg += line(map_x(0.0), kTop, map_x(0.0), plot_bottom,
              "stroke=\"#999999\" stroke-width=\"1\"");
  svg += line(kLeft, plot_bottom, kWidth - kRight, plot_bottom,
              "stroke=\"#000000\" stroke-width=\"1\"");
  for (const double t : ticks(lo, hi)) {
    svg += line(map_x(t), plot_bottom, map_x(t), plot_bottom + 5,
                "stroke=\"#000000\" stroke-width=\"1\"");
    svg += text(map_x(t), plot_bottom + 20, "middle", format_tick(t),
                " font-size=\"12\"");
  }
  svg += text(kLeft + plot_width / 2, plot_bottom + 45, "middle",
              "SHAP value (impact on log-odds)", " font-size=\"14\"");
  // Legend uses rects so that circles map one-to-one onto points.
  const double legend_y = height - 18;
  svg += "<rect x=\"" + format_coord(kLeft) + "\" y=\"" +
         format_coord(legend_y - 9) + "\" width=\"10\" height=\"10\" fill=\"" +
         kZeroColor + "\"/>\n";
  svg += text(kLeft + 15, legend_y, "start", "feature value 0",
              " font-size=\"12\"");
  svg += "<rect x=\"" + format_coord(kLeft + 130) + "\" y=\"" +
         format_coord(legend_y - 9) + "\" width=\"10\" height=\"10\" fill=\"" +
         kOneColor + "\"/>\n";
  svg += text(kLeft + 145, legend_y, "start", "feature value 1",
              " font-size=\"12\"");

  for (std::size_t s = 0; s < order.size(); ++s) {
    const int feature = order[s];
    const double center = kTop + kStrip * (static_cast<double>(s) + 0.5);
    svg += text(kLeft - 10, center + 4, "end",
                std::string(FeatureSchema::name(feature)), " font-size=\"13\"");

    std::vector<const ShapRow*> strip;
    for (const ShapRow& r : rows) {
      if (r.feature == feature) strip.push_back(&r);
    }
    std::stable_sort(strip.begin(), strip.end(),
                     [](const ShapRow* a, const ShapRow* b) {
                       if (a->shap_value != b->shap_value) {
                         return a->shap_value < b->shap_value;
                       }
                       return a->record_index < b->record_index;
                     });
    std::map<std::int64_t, int> occupancy;
    const auto strip_key = static_cast<std::uint64_t>(feature) << 40;
    for (const ShapRow* r : strip) {
      const double x = map_x(r->shap_value);
      const auto bin = static_cast<std::int64_t>(
          std::floor((x - kLeft) / (2.0 * kRadius)));
      const int k = occupancy[bin]++;
      // Slot sequence 0, +1, -1, +2, -2, ...; the seeded hash picks which
      // side fills first in each bin.
      const int magnitude = (k + 1) / 2;
      double offset;
      if (magnitude <= max_slot) {
        const std::uint64_t h =
            derive_seed(seed, strip_key ^ static_cast<std::uint64_t>(bin));
        const int side = ((k % 2 == 1) == ((h & 1u) == 0)) ? 1 : -1;
        offset = side * magnitude * kSlot;
      } else {
        // Strip full: scatter uniformly over its height.
        const std::uint64_t h = derive_seed(
            seed ^ 0x5bd1e995ULL, strip_key ^ r->record_index);
        const double u = static_cast<double>(h >> 11) * 0x1.0p-53;
        offset = (2.0 * u - 1.0) * half_strip;
      }
      svg += "<circle cx=\"" + format_coord(x) + "\" cy=\"" +
             format_coord(center + offset) + "\" r=\"" +
             format_coord(kRadius) + "\" fill=\"" +
             (r->feature_value ? kOneColor : kZeroColor) +
             "\" fill-opacity=\"0.8\"/>\n";
    }
  }
  svg += "</svg>\n";
  return svg;
}

std::vector<XY> read_roc_csv(const std::filesystem::path& path) {
  return read_xy(path, "fpr", "tpr");
}

std::vector<XY> read_pr_csv(const std::filesystem::path& path) {
  return read_xy(path, "recall", "precision");
}

CurveBand read_band_csv(const std::filesystem::path& path) {
  const Table table = read_table(path);
  const auto xc = table.column("fpr", path);
  const auto loc = table.column("tpr_lo", path);
  const auto hic = table.column("tpr_hi", path);
  CurveBand band;
  for (const auto& row : table.rows) {
    band.x.push_back(to_real(row[xc], path));
    band.lo.push_back(to_real(row[loc], path));
    band.hi.push_back(to_real(row[hic], path));
  }
  return band;
}

std::vector<ShapRow> read_shap_csv(const std::filesystem::path& path) {
  const Table table = read_table(path);
  const auto ic = table.column("record_index", path);
  const auto fc = table.column("feature", path);
  const auto vc = table.column("feature_value", path);
  const auto sc = table.column("shap_value", path);
  const auto bc = table.column("base_value", path);
  std::vector<ShapRow> rows;
  rows.reserve(table.rows.size());
  for (const auto& row : table.rows) {
    ShapRow r;
    const double index = to_real(row[ic], path);
    if (index < 0 || index != std::floor(index)) {
      throw ParseError("bad record_index in '" + path.string() + "'");
    }
    r.record_index = static_cast<std::size_t>(index);
    const auto feature = FeatureSchema::find(row[fc]);
    if (!feature) {
      throw ParseError("unknown feature '" + row[fc] + "' in '" +
                       path.string() + "'");
    }
    r.feature = *feature;
    if (row[vc] != "0" && row[vc] != "1") {
      throw ParseError("non-binary feature_value in '" + path.string() + "'");
    }
    r.feature_value = row[vc] == "1";
    r.shap_value = to_real(row[sc], path);
    r.base_value = to_real(row[bc], path);
    rows.push_back(r);
  }
  return rows;
}

}  // namespace covidgbm
