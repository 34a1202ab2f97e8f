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

#ifndef COVIDGBM_COHORT_TABLE_H_
#define COVIDGBM_COHORT_TABLE_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "covidgbm/dataset.h"
#include "covidgbm/schema.h"

namespace covidgbm {

// One row of the cohort characteristics table.
struct CohortRow {
  std::string feature;  // Schema name.
  std::string level;    // "Male"/"Female" for sex_male, else "True"/"False".
  std::uint64_t total_n = 0;
  double total_pct = 0.0;
  std::uint64_t negative_n = 0;
  double negative_pct = 0.0;
  std::uint64_t positive_n = 0;
  double positive_pct = 0.0;
};

// Feature counts by class, kept verbatim (including the printed
// percentages, which are not recomputed).
struct CohortTable {
  std::vector<CohortRow> rows;

  // Count of records with feature = 1 in each class, taken from the
  // "Male"/"True" row of each feature.
  std::array<std::uint64_t, kNumFeatures> positive_with_feature{};
  std::array<std::uint64_t, kNumFeatures> negative_with_feature{};

  // Class sizes, from the two sex_male rows (the levels of the other rows do
  // not always add up to the class size).
  std::uint64_t n_positive = 0;
  std::uint64_t n_negative = 0;

  MarginalTable marginals() const;
};

// Parses the cohort-table CSV. Header:
//   feature,level,total_n,total_pct,negative_n,negative_pct,positive_n,positive_pct
// Every schema feature needs both of its levels.
CohortTable parse_cohort_table(std::istream& in);

// The table shipped with the library (data/cohort_table.csv, compiled in).
const CohortTable& bundled_cohort_table();

// Loads a marginals override file: either the cohort-table format above or
// a rates file with header `feature,rate_given_positive,rate_given_negative`.
MarginalTable load_marginals_file(const std::filesystem::path& path);

}  // namespace covidgbm

#endif  // COVIDGBM_COHORT_TABLE_H_
