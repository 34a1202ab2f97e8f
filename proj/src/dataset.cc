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

#include "covidgbm/dataset.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string_view>

#include "covidgbm/error.h"
#include "covidgbm/random.h"

namespace covidgbm {
namespace {

constexpr std::string_view kLabelColumn = "label";
constexpr int kLabelSlot = kNumFeatures;

std::vector<std::string_view> split_cells(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      cells.push_back(line.substr(start));
      return cells;
    }
    cells.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

// Splits on LF, dropping a trailing CR from each line and the empty piece
// after a final newline.
std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = end + 1;
  }
  return lines;
}

std::string read_all(std::istream& in) {
  return std::string(std::istreambuf_iterator<char>(in),
                     std::istreambuf_iterator<char>());
}

void require_labeled(const Dataset& ds, std::string_view op) {
  if (!ds.labeled()) {
    throw ContractError(std::string(op) + ": dataset has no label column");
  }
}

}  // namespace

FeatureVector FeatureVector::from_values(std::span<const int> values) {
  if (values.size() != static_cast<std::size_t>(kNumFeatures)) {
    throw ContractError("schema mismatch: expected " +
                        std::to_string(kNumFeatures) + " feature values, got " +
                        std::to_string(values.size()));
  }
  FeatureVector v;
  for (int i = 0; i < kNumFeatures; ++i) {
    if (values[i] != 0 && values[i] != 1) {
      throw ContractError("non-binary value for feature " +
                          std::string(FeatureSchema::name(i)));
    }
    v.set(i, values[i] == 1);
  }
  return v;
}

std::size_t Dataset::count_positive() const {
  return static_cast<std::size_t>(std::count_if(
      records_.begin(), records_.end(), [](const Record& r) { return r.label; }));
}

Dataset load_csv(std::istream& in, std::string provenance,
                 LabelColumn label_column) {
  const std::string text = read_all(in);
  std::string_view body = text;
  if (body.starts_with("\xEF\xBB\xBF")) body.remove_prefix(3);
  const auto lines = split_lines(body);
  if (lines.empty() || lines.front().empty()) {
    throw ParseError("malformed CSV: missing header row");
  }

  // slot_of_column[c] = schema index, or kLabelSlot for the label.
  const auto header = split_cells(lines.front());
  std::vector<int> slot_of_column;
  std::array<bool, kNumFeatures + 1> seen{};
  for (const auto cell : header) {
    int slot;
    if (cell == kLabelColumn) {
      slot = kLabelSlot;
    } else if (auto idx = FeatureSchema::find(cell)) {
      slot = *idx;
    } else {
      throw ParseError("unknown column '" + std::string(cell) + "'");
    }
    if (seen[slot]) {
      throw ParseError("duplicate column '" + std::string(cell) + "'");
    }
    seen[slot] = true;
    slot_of_column.push_back(slot);
  }
  for (int i = 0; i < kNumFeatures; ++i) {
    if (!seen[i]) {
      throw ParseError("missing column '" +
                       std::string(FeatureSchema::name(i)) + "'");
    }
  }
  const bool labeled = seen[kLabelSlot];
  if (!labeled && label_column == LabelColumn::kRequired) {
    throw ParseError("missing column 'label'");
  }

  std::vector<Record> records;
  records.reserve(lines.size() - 1);
  for (std::size_t line_no = 1; line_no < lines.size(); ++line_no) {
    const auto cells = split_cells(lines[line_no]);
    if (cells.size() != slot_of_column.size()) {
      throw ParseError("malformed CSV: line " + std::to_string(line_no + 1) +
                       " has " + std::to_string(cells.size()) +
                       " cells, expected " +
                       std::to_string(slot_of_column.size()));
    }
    Record r;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const auto cell = cells[c];
      if (cell != "0" && cell != "1") {
        throw ParseError("non-binary value '" + std::string(cell) +
                         "' at line " + std::to_string(line_no + 1));
      }
      const bool value = cell == "1";
      if (slot_of_column[c] == kLabelSlot) {
        r.label = value;
      } else {
        r.features.set(slot_of_column[c], value);
      }
    }
    records.push_back(r);
  }
  if (records.empty()) throw ParseError("empty body: no data rows");
  return Dataset(std::move(records), std::move(provenance), labeled);
}

Dataset load_csv_file(const std::filesystem::path& path,
                      LabelColumn label_column) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return load_csv(in, "csv:" + path.string(), label_column);
}

void write_csv(const Dataset& ds, std::ostream& out) {
  std::string buffer;
  buffer.reserve((ds.size() + 1) * 18 + 128);
  for (int i = 0; i < kNumFeatures; ++i) {
    if (i > 0) buffer += ',';
    buffer += FeatureSchema::name(i);
  }
  if (ds.labeled()) {
    buffer += ',';
    buffer += kLabelColumn;
  }
  buffer += '\n';
  for (const Record& r : ds.records()) {
    for (int i = 0; i < kNumFeatures; ++i) {
      if (i > 0) buffer += ',';
      buffer += r.features[i] ? '1' : '0';
    }
    if (ds.labeled()) {
      buffer += ',';
      buffer += r.label ? '1' : '0';
    }
    buffer += '\n';
  }
  out.write(buffer.data(), static_cast<std::streamsize>(buffer.size()));
}

void write_csv_file(const Dataset& ds, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  write_csv(ds, out);
  out.flush();
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

void MarginalTable::validate() const {
  for (int i = 0; i < kNumFeatures; ++i) {
    for (const double r : {rates[i].given_positive, rates[i].given_negative}) {
      if (!(r >= 0.0 && r <= 1.0)) {
        throw ContractError("rate for " + std::string(FeatureSchema::name(i)) +
                            " outside [0,1]");
      }
    }
  }
}

MarginalTable marginals_from(const Dataset& ds) {
  require_labeled(ds, "marginals_from");
  std::array<std::uint64_t, kNumFeatures> pos{};
  std::array<std::uint64_t, kNumFeatures> neg{};
  MarginalTable m;
  for (const Record& r : ds.records()) {
    auto& counts = r.label ? pos : neg;
    (r.label ? m.n_positive : m.n_negative) += 1;
    for (int i = 0; i < kNumFeatures; ++i) counts[i] += r.features[i];
  }
  if (m.n_positive == 0 || m.n_negative == 0) {
    throw ContractError("degenerate class balance: both classes required");
  }
  for (int i = 0; i < kNumFeatures; ++i) {
    m.rates[i].given_positive =
        static_cast<double>(pos[i]) / static_cast<double>(m.n_positive);
    m.rates[i].given_negative =
        static_cast<double>(neg[i]) / static_cast<double>(m.n_negative);
  }
  return m;
}

Dataset synthesize(const MarginalTable& m, std::uint64_t n_pos,
                   std::uint64_t n_neg, std::uint64_t seed) {
  m.validate();
  if (n_pos + n_neg == 0) {
    throw ContractError("synthesize: at least one record required");
  }
  Rng rng(seed);
  std::vector<Record> records(n_pos + n_neg);
  for (std::uint64_t i = 0; i < n_pos; ++i) records[i].label = true;
  rng.shuffle(std::span<Record>(records));
  for (Record& r : records) {
    for (int i = 0; i < kNumFeatures; ++i) {
      const ClassRates& rates = m.rates[i];
      r.features.set(i, rng.bernoulli(r.label ? rates.given_positive
                                              : rates.given_negative));
    }
  }
  return Dataset(std::move(records),
                 "synth:seed=" + std::to_string(seed) +
                     ",n_pos=" + std::to_string(n_pos) +
                     ",n_neg=" + std::to_string(n_neg));
}

Dataset dataset_with_exact_counts(const MarginalTable& m) {
  m.validate();
  std::vector<Record> records;
  records.reserve(m.n_positive + m.n_negative);
  for (const bool label : {true, false}) {
    const std::uint64_t n = label ? m.n_positive : m.n_negative;
    std::array<std::uint64_t, kNumFeatures> ones{};
    for (int f = 0; f < kNumFeatures; ++f) {
      const double rate =
          label ? m.rates[f].given_positive : m.rates[f].given_negative;
      ones[f] = static_cast<std::uint64_t>(
          std::llround(rate * static_cast<double>(n)));
    }
    for (std::uint64_t i = 0; i < n; ++i) {
      Record r;
      r.label = label;
      for (int f = 0; f < kNumFeatures; ++f) {
        // Rotate each feature's block of ones so features are not nested.
        const std::uint64_t offset = n * static_cast<std::uint64_t>(f) /
                                     static_cast<std::uint64_t>(kNumFeatures);
        r.features.set(f, (i + offset) % n < ones[f]);
      }
      records.push_back(r);
    }
  }
  return Dataset(std::move(records), "exact-counts");
}

double reporter_positive_rate(const Dataset& ds, Feature feature) {
  require_labeled(ds, "reporter_positive_rate");
  std::uint64_t reported = 0;
  std::uint64_t reported_positive = 0;
  for (const Record& r : ds.records()) {
    if (r.features[feature]) {
      ++reported;
      reported_positive += r.label;
    }
  }
  if (reported == 0) {
    throw ContractError("feature never reported: " +
                        std::string(FeatureSchema::name(feature)));
  }
  return static_cast<double>(reported_positive) /
         static_cast<double>(reported);
}

bool is_asymptomatic_negative(const Record& r) {
  if (r.label) return false;
  return std::none_of(kSymptomFeatures.begin(), kSymptomFeatures.end(),
                      [&](Feature f) { return r.features[f]; });
}

std::size_t count_asymptomatic_negative(const Dataset& ds) {
  return static_cast<std::size_t>(std::count_if(
      ds.records().begin(), ds.records().end(), is_asymptomatic_negative));
}

Dataset simulate_bias(const Dataset& ds, const BiasSimConfig& cfg) {
  require_labeled(ds, "simulate_bias");
  if (!(cfg.drop_fraction >= 0.0 && cfg.drop_fraction <= 1.0)) {
    throw ContractError("drop_fraction outside [0,1]");
  }
  if (ds.empty()) throw ContractError("simulate_bias: empty dataset");

  std::vector<std::size_t> candidates;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    if (is_asymptomatic_negative(ds[i])) candidates.push_back(i);
  }
  const auto m = candidates.size();
  const auto k = static_cast<std::size_t>(
      std::llround(cfg.drop_fraction * static_cast<double>(m)));

  // Partial Fisher-Yates: the first k slots become a uniform k-subset.
  Rng rng(cfg.seed);
  for (std::size_t i = 0; i < k; ++i) {
    const auto j = i + static_cast<std::size_t>(rng.below(m - i));
    std::swap(candidates[i], candidates[j]);
  }
  std::vector<bool> removed(ds.size(), false);
  for (std::size_t i = 0; i < k; ++i) removed[candidates[i]] = true;

  std::vector<Record> kept;
  kept.reserve(ds.size() - k);
  for (std::size_t i = 0; i < ds.size(); ++i) {
    if (!removed[i]) kept.push_back(ds[i]);
  }
  std::ostringstream tag;
  tag << ds.provenance() << "|bias:drop=" << cfg.drop_fraction
      << ",seed=" << cfg.seed;
  return Dataset(std::move(kept), tag.str());
}

SplitResult split(const Dataset& ds, double test_fraction, std::uint64_t seed,
                  bool stratified) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw ContractError("test fraction out of range (0,1)");
  }
  Rng rng(seed);
  std::vector<bool> in_test(ds.size(), false);
  auto take = [&](std::vector<std::size_t>& pool) {
    rng.shuffle(std::span<std::size_t>(pool));
    const auto n_test = static_cast<std::size_t>(
        std::llround(test_fraction * static_cast<double>(pool.size())));
    for (std::size_t i = 0; i < n_test; ++i) in_test[pool[i]] = true;
  };

  if (stratified) {
    require_labeled(ds, "split");
    std::vector<std::size_t> negatives;
    std::vector<std::size_t> positives;
    for (std::size_t i = 0; i < ds.size(); ++i) {
      (ds[i].label ? positives : negatives).push_back(i);
    }
    if (negatives.empty() || positives.empty()) {
      throw ContractError(
          "degenerate class balance: stratified split needs both classes");
    }
    take(negatives);
    take(positives);
  } else {
    std::vector<std::size_t> all(ds.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    take(all);
  }

  std::vector<Record> train;
  std::vector<Record> test;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    (in_test[i] ? test : train).push_back(ds[i]);
  }
  const std::string tag = ds.provenance() + "|split:seed=" +
                          std::to_string(seed);
  return {Dataset(std::move(train), tag + ",part=train", ds.labeled()),
          Dataset(std::move(test), tag + ",part=test", ds.labeled())};
}

}  // namespace covidgbm
