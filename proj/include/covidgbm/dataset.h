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

#ifndef COVIDGBM_DATASET_H_
#define COVIDGBM_DATASET_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "covidgbm/schema.h"

namespace covidgbm {

struct Record {
  FeatureVector features;
  bool label = false;  // true = positive RT-PCR result.

  friend bool operator==(const Record&, const Record&) = default;
};

// Ordered, immutable collection of records over the fixed FeatureSchema.
class Dataset {
 public:
  Dataset() = default;
  Dataset(std::vector<Record> records, std::string provenance,
          bool labeled = true)
      : records_(std::move(records)),
        provenance_(std::move(provenance)),
        labeled_(labeled) {}

  std::span<const Record> records() const { return records_; }
  const Record& operator[](std::size_t i) const { return records_[i]; }
  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }

  // Free-text origin tag, e.g. "csv:path" or "synth:seed=7".
  const std::string& provenance() const { return provenance_; }

  // False when loaded from a file without a label column. Labels then read
  // as 0 and must not be used.
  bool labeled() const { return labeled_; }

  std::size_t count_positive() const;
  std::size_t count_negative() const { return size() - count_positive(); }

 private:
  std::vector<Record> records_;
  std::string provenance_;
  bool labeled_ = true;
};

// ---------------------------------------------------------------------------
// CSV I/O
//
// Header names the 8 schema columns plus `label`, in any order. Cells are the
// single characters `0` or `1`. LF or CRLF line endings are accepted; LF is
// written.

enum class LabelColumn { kRequired, kOptional };

Dataset load_csv(std::istream& in, std::string provenance,
                 LabelColumn label_column = LabelColumn::kRequired);
Dataset load_csv_file(const std::filesystem::path& path,
                      LabelColumn label_column = LabelColumn::kRequired);

// Writes the canonical header and records in order.
void write_csv(const Dataset& ds, std::ostream& out);
void write_csv_file(const Dataset& ds, const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Class-conditional marginals

struct ClassRates {
  double given_positive = 0.0;
  double given_negative = 0.0;
};

struct MarginalTable {
  std::array<ClassRates, kNumFeatures> rates{};
  std::uint64_t n_positive = 0;
  std::uint64_t n_negative = 0;

  const ClassRates& operator[](Feature f) const {
    return rates[index_of(f)];
  }

  // Throws a contract error if any rate lies outside [0, 1] or is NaN.
  void validate() const;
};

// Per-feature rate count(feature=1 and class)/count(class). Requires both
// classes to be present.
MarginalTable marginals_from(const Dataset& ds);

// Draws n_pos positive and n_neg negative labels, shuffles their order, then
// draws every feature as an independent coin with its class-conditional rate.
// Deterministic in (m, n_pos, n_neg, seed).
Dataset synthesize(const MarginalTable& m, std::uint64_t n_pos,
                   std::uint64_t n_neg, std::uint64_t seed);

// Builds a dataset whose per-class feature counts are exactly
// round(rate * n_class) for every feature, using m.n_positive and
// m.n_negative records. No randomness is involved.
Dataset dataset_with_exact_counts(const MarginalTable& m);

// ---------------------------------------------------------------------------
// Reporting bias

// Among records reporting `feature`, the fraction with a positive label.
double reporter_positive_rate(const Dataset& ds, Feature feature);

struct BiasSimConfig {
  double drop_fraction = 0.0;
  std::uint64_t seed = 0;
};

// Negative-labeled record with every symptom feature equal to 0.
bool is_asymptomatic_negative(const Record& r);

std::size_t count_asymptomatic_negative(const Dataset& ds);

// Removes round(drop_fraction * m) of the m asymptomatic negative records,
// chosen uniformly at random. Survivors keep their relative order.
Dataset simulate_bias(const Dataset& ds, const BiasSimConfig& cfg);

// ---------------------------------------------------------------------------
// Train/test split

struct SplitResult {
  Dataset train;
  Dataset test;
};

// Seeded random partition. The test part receives round(test_fraction * n)
// records, or, when stratified, round(test_fraction * n_class) records of
// each class. Both parts keep the input's relative record order.
SplitResult split(const Dataset& ds, double test_fraction, std::uint64_t seed,
                  bool stratified);

}  // namespace covidgbm

#endif  // COVIDGBM_DATASET_H_
