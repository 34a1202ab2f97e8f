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

#include "covidgbm/cohort_table.h"

#include <charconv>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string_view>

#include "covidgbm/error.h"

namespace covidgbm {

// Defined in the generated cohort_table_data.cc.
extern const char kBundledCohortTableCsv[];

namespace {

constexpr std::string_view kCohortHeader =
    "feature,level,total_n,total_pct,negative_n,negative_pct,positive_n,"
    "positive_pct";
constexpr std::string_view kRatesHeader =
    "feature,rate_given_positive,rate_given_negative";

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

std::vector<std::string> read_lines(std::istream& in) {
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    lines.push_back(line);
  }
  return lines;
}

std::uint64_t parse_count(const std::string& cell) {
  std::uint64_t value = 0;
  const auto [ptr, ec] =
      std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (ec != std::errc() || ptr != cell.data() + cell.size() || cell.empty()) {
    throw ParseError("bad count '" + cell + "' in marginals file");
  }
  return value;
}

double parse_real(const std::string& cell) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(cell, &used);
  } catch (const std::exception&) {
    throw ParseError("bad number '" + cell + "' in marginals file");
  }
  if (used != cell.size()) {
    throw ParseError("bad number '" + cell + "' in marginals file");
  }
  return value;
}

int feature_index(const std::string& name) {
  const auto idx = FeatureSchema::find(name);
  if (!idx) throw ParseError("unknown feature '" + name + "' in marginals");
  return *idx;
}

CohortTable parse_cohort_lines(const std::vector<std::string>& lines) {
  CohortTable table;
  std::array<bool, kNumFeatures> have_on{};
  std::array<bool, kNumFeatures> have_off{};
  std::uint64_t female_pos = 0;
  std::uint64_t female_neg = 0;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto cells = split_row(lines[i]);
    if (cells.size() != 8) {
      throw ParseError("cohort table line " + std::to_string(i + 1) +
                       ": expected 8 cells");
    }
    CohortRow row{cells[0],
                  cells[1],
                  parse_count(cells[2]),
                  parse_real(cells[3]),
                  parse_count(cells[4]),
                  parse_real(cells[5]),
                  parse_count(cells[6]),
                  parse_real(cells[7])};
    const int f = feature_index(row.feature);
    const bool is_sex = f == index_of(Feature::kSexMale);
    const std::string_view on_level = is_sex ? "Male" : "True";
    const std::string_view off_level = is_sex ? "Female" : "False";
    if (row.level == on_level) {
      if (have_on[f]) throw ParseError("duplicate row for " + row.feature);
      have_on[f] = true;
      table.positive_with_feature[f] = row.positive_n;
      table.negative_with_feature[f] = row.negative_n;
    } else if (row.level == off_level) {
      if (have_off[f]) throw ParseError("duplicate row for " + row.feature);
      have_off[f] = true;
      if (is_sex) {
        female_pos = row.positive_n;
        female_neg = row.negative_n;
      }
    } else {
      throw ParseError("unknown level '" + row.level + "' for " +
                       row.feature);
    }
    table.rows.push_back(std::move(row));
  }
  for (int f = 0; f < kNumFeatures; ++f) {
    if (!have_on[f] || !have_off[f]) {
      throw ParseError("cohort table lacks a level of " +
                       std::string(FeatureSchema::name(f)));
    }
  }
  const int sex = index_of(Feature::kSexMale);
  table.n_positive = table.positive_with_feature[sex] + female_pos;
  table.n_negative = table.negative_with_feature[sex] + female_neg;
  for (int f = 0; f < kNumFeatures; ++f) {
    if (table.positive_with_feature[f] > table.n_positive ||
        table.negative_with_feature[f] > table.n_negative) {
      throw ContractError("cohort table count for " +
                          std::string(FeatureSchema::name(f)) +
                          " exceeds its class size");
    }
  }
  if (table.n_positive == 0 || table.n_negative == 0) {
    throw ContractError("degenerate class balance in cohort table");
  }
  return table;
}

MarginalTable parse_rates_lines(const std::vector<std::string>& lines) {
  MarginalTable m;
  std::array<bool, kNumFeatures> seen{};
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto cells = split_row(lines[i]);
    if (cells.size() != 3) {
      throw ParseError("rates line " + std::to_string(i + 1) +
                       ": expected 3 cells");
    }
    const int f = feature_index(cells[0]);
    if (seen[f]) throw ParseError("duplicate rates row for " + cells[0]);
    seen[f] = true;
    m.rates[f] = {parse_real(cells[1]), parse_real(cells[2])};
  }
  for (int f = 0; f < kNumFeatures; ++f) {
    if (!seen[f]) {
      throw ParseError("rates file lacks " +
                       std::string(FeatureSchema::name(f)));
    }
  }
  m.validate();
  return m;
}

}  // namespace

MarginalTable CohortTable::marginals() const {
  MarginalTable m;
  m.n_positive = n_positive;
  m.n_negative = n_negative;
  for (int f = 0; f < kNumFeatures; ++f) {
    m.rates[f].given_positive = static_cast<double>(positive_with_feature[f]) /
                                static_cast<double>(n_positive);
    m.rates[f].given_negative = static_cast<double>(negative_with_feature[f]) /
                                static_cast<double>(n_negative);
  }
  return m;
}

CohortTable parse_cohort_table(std::istream& in) {
  const auto lines = read_lines(in);
  if (lines.empty() || lines.front() != kCohortHeader) {
    throw ParseError("cohort table: unexpected header");
  }
  return parse_cohort_lines(lines);
}

const CohortTable& bundled_cohort_table() {
  static const CohortTable table = [] {
    std::istringstream in{std::string(kBundledCohortTableCsv)};
    return parse_cohort_table(in);
  }();
  return table;
}

MarginalTable load_marginals_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  const auto lines = read_lines(in);
  if (lines.empty()) throw ParseError("marginals file is empty");
  if (lines.front() == kCohortHeader) {
    return parse_cohort_lines(lines).marginals();
  }
  if (lines.front() == kRatesHeader) return parse_rates_lines(lines);
  throw ParseError("marginals file: unrecognized header");
}

}  // namespace covidgbm
