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
#include <map>
#include <random>
#include <sstream>
#include <string>

#include "covidgbm/cohort_table.h"
#include "gtest/gtest.h"
#include "testing/expect_error.h"
#include "testing/oracles.h"

namespace covidgbm {
namespace {

constexpr const char* kHeader =
    "sex_male,age_60_plus,cough,fever,sore_throat,shortness_of_breath,"
    "headache,contact_confirmed,label\n";

Dataset parse(const std::string& text,
              LabelColumn label_column = LabelColumn::kRequired) {
  std::istringstream in(text);
  return load_csv(in, "test", label_column);
}

std::multiset<std::pair<std::uint8_t, bool>> as_multiset(const Dataset& ds) {
  std::multiset<std::pair<std::uint8_t, bool>> out;
  for (const Record& r : ds.records()) out.insert({r.features.bits(), r.label});
  return out;
}

TEST(LoadCsvTest, ParsesSingleRow) {
  const Dataset ds = parse(std::string(kHeader) + "1,0,1,0,0,0,0,1,1\n");
  ASSERT_EQ(ds.size(), 1u);
  EXPECT_TRUE(ds[0].features[Feature::kCough]);
  EXPECT_TRUE(ds[0].features[Feature::kSexMale]);
  EXPECT_TRUE(ds[0].features[Feature::kContactConfirmed]);
  EXPECT_FALSE(ds[0].features[Feature::kFever]);
  EXPECT_TRUE(ds[0].label);
}

TEST(LoadCsvTest, RejectsNonBinaryValue) {
  EXPECT_COVIDGBM_ERROR(parse(std::string(kHeader) + "1,0,2,0,0,0,0,1,1\n"),
                        ErrorKind::kParse, "non-binary value");
}

TEST(LoadCsvTest, PermutedColumnsGiveSameRecords) {
  const Dataset canonical = parse(std::string(kHeader) +
                                  "1,0,1,0,0,0,0,1,1\n"
                                  "0,1,0,1,1,0,1,0,0\n");
  const Dataset permuted = parse(
      "label,contact_confirmed,headache,shortness_of_breath,sore_throat,"
      "fever,cough,age_60_plus,sex_male\n"
      "1,1,0,0,0,0,1,0,1\n"
      "0,0,1,0,1,1,0,1,0\n");
  ASSERT_EQ(permuted.size(), canonical.size());
  for (std::size_t i = 0; i < canonical.size(); ++i) {
    EXPECT_EQ(permuted[i], canonical[i]);
  }
}

TEST(LoadCsvTest, AcceptsCrlfAndBom) {
  std::string text = "\xEF\xBB\xBF" + std::string(kHeader);
  text.insert(text.size() - 1, "\r");
  text += "0,0,0,1,0,0,0,0,1\r\n";
  const Dataset ds = parse(text);
  ASSERT_EQ(ds.size(), 1u);
  EXPECT_TRUE(ds[0].features[Feature::kFever]);
}

TEST(LoadCsvTest, HeaderErrors) {
  EXPECT_COVIDGBM_ERROR(parse("sex_male,bogus\n1,1\n"), ErrorKind::kParse,
                        "unknown column");
  EXPECT_COVIDGBM_ERROR(parse("sex_male,sex_male\n1,1\n"), ErrorKind::kParse,
                        "duplicate column");
  EXPECT_COVIDGBM_ERROR(parse("sex_male,label\n1,1\n"), ErrorKind::kParse,
                        "missing column");
  EXPECT_COVIDGBM_ERROR(parse(std::string(kHeader)), ErrorKind::kParse,
                        "empty body");
  EXPECT_COVIDGBM_ERROR(parse(std::string(kHeader) + "1,0,1\n"),
                        ErrorKind::kParse, "malformed CSV");
}

TEST(LoadCsvTest, OptionalLabelColumn) {
  const std::string unlabeled =
      "sex_male,age_60_plus,cough,fever,sore_throat,shortness_of_breath,"
      "headache,contact_confirmed\n0,0,1,1,0,0,0,0\n";
  EXPECT_COVIDGBM_ERROR(parse(unlabeled), ErrorKind::kParse, "label");
  const Dataset ds = parse(unlabeled, LabelColumn::kOptional);
  EXPECT_FALSE(ds.labeled());
  EXPECT_EQ(ds.size(), 1u);
}

TEST(WriteCsvTest, RoundTripIsIdentity) {
  std::mt19937_64 gen(11);
  const Dataset ds = testing::random_dataset(gen, 500, 0.3);
  std::ostringstream out;
  write_csv(ds, out);
  EXPECT_EQ(out.str().substr(0, std::string(kHeader).size()), kHeader);
  const Dataset back = parse(out.str());
  ASSERT_EQ(back.size(), ds.size());
  for (std::size_t i = 0; i < ds.size(); ++i) EXPECT_EQ(back[i], ds[i]);
}

TEST(MarginalsTest, ExactCohortFeverRate) {
  const MarginalTable m = bundled_cohort_table().marginals();
  const Dataset ds = dataset_with_exact_counts(m);
  const MarginalTable measured = marginals_from(ds);
  EXPECT_DOUBLE_EQ(measured[Feature::kFever].given_positive, 3735.0 / 8393.0);
  EXPECT_NEAR(measured[Feature::kFever].given_positive, 0.4450, 5e-5);
}

TEST(MarginalsTest, SingleAllPositiveRecord) {
  std::vector<Record> records = {{FeatureVector::from_bits(0xFF), true}};
  const Dataset ds(std::move(records), "one");
  EXPECT_COVIDGBM_ERROR(marginals_from(ds), ErrorKind::kContract,
                        "degenerate class balance");
}

TEST(MarginalsTest, MatchesCountingOracle) {
  std::mt19937_64 gen(5);
  const Dataset ds = testing::random_dataset(gen, 100, 0.4);
  const MarginalTable m = marginals_from(ds);
  const testing::FeatureCounts counts = testing::count_features(ds);
  EXPECT_EQ(m.n_positive, counts.n_positive);
  EXPECT_EQ(m.n_negative, counts.n_negative);
  for (int f = 0; f < kNumFeatures; ++f) {
    EXPECT_EQ(m.rates[f].given_positive,
              static_cast<double>(counts.positive_with[f]) /
                  static_cast<double>(counts.n_positive));
    EXPECT_EQ(m.rates[f].given_negative,
              static_cast<double>(counts.negative_with[f]) /
                  static_cast<double>(counts.n_negative));
  }
}

TEST(SynthesizeTest, CoughRateNearCohortValue) {
  const MarginalTable m = bundled_cohort_table().marginals();
  for (const std::uint64_t seed : {1u, 2u, 3u}) {
    const Dataset ds = synthesize(m, 4769, 47062, seed);
    EXPECT_EQ(ds.size(), 51831u);
    EXPECT_EQ(ds.count_positive(), 4769u);
    EXPECT_NEAR(marginals_from(ds)[Feature::kCough].given_positive, 0.4829,
                0.02);
  }
}

TEST(SynthesizeTest, NoPositivesMeansAllNegative) {
  const Dataset ds = synthesize(bundled_cohort_table().marginals(), 0, 5, 1);
  EXPECT_EQ(ds.size(), 5u);
  EXPECT_EQ(ds.count_positive(), 0u);
}

TEST(SynthesizeTest, DeterministicPerSeed) {
  const MarginalTable m = bundled_cohort_table().marginals();
  std::ostringstream a;
  std::ostringstream b;
  std::ostringstream c;
  write_csv(synthesize(m, 300, 700, 42), a);
  write_csv(synthesize(m, 300, 700, 42), b);
  write_csv(synthesize(m, 300, 700, 43), c);
  EXPECT_EQ(a.str(), b.str());
  EXPECT_NE(a.str(), c.str());
}

TEST(SynthesizeTest, LargeSampleConcentratesOnInputRates) {
  std::mt19937_64 gen(17);
  const MarginalTable source = marginals_from(testing::random_dataset(gen, 400, 0.5));
  const MarginalTable measured =
      marginals_from(synthesize(source, 100000, 100000, 9));
  for (int f = 0; f < kNumFeatures; ++f) {
    EXPECT_NEAR(measured.rates[f].given_positive, source.rates[f].given_positive,
                0.01);
    EXPECT_NEAR(measured.rates[f].given_negative, source.rates[f].given_negative,
                0.01);
  }
}

TEST(ReporterRateTest, CohortCountsReproduceReferenceRates) {
  const Dataset ds = dataset_with_exact_counts(bundled_cohort_table().marginals());
  EXPECT_DOUBLE_EQ(reporter_positive_rate(ds, Feature::kHeadache), 1731.0 / 1799.0);
  EXPECT_DOUBLE_EQ(reporter_positive_rate(ds, Feature::kCough), 4053.0 / 14768.0);
  EXPECT_DOUBLE_EQ(reporter_positive_rate(ds, Feature::kShortnessOfBreath),
                   859.0 / 930.0);
  EXPECT_NEAR(reporter_positive_rate(ds, Feature::kHeadache), 0.962, 0.001);
  EXPECT_NEAR(reporter_positive_rate(ds, Feature::kShortnessOfBreath), 0.924, 0.001);
  EXPECT_NEAR(reporter_positive_rate(ds, Feature::kCough), 0.274, 0.001);
  EXPECT_NEAR(reporter_positive_rate(ds, Feature::kFever), 0.459, 0.001);
}

TEST(ReporterRateTest, NeverReported) {
  std::vector<Record> records = {{FeatureVector{}, true}, {FeatureVector{}, false}};
  const Dataset ds(std::move(records), "none");
  EXPECT_COVIDGBM_ERROR(reporter_positive_rate(ds, Feature::kFever),
                        ErrorKind::kContract, "feature never reported");
}

Dataset bias_fixture() {
  // 1000 asymptomatic negatives, 200 symptomatic negatives, 300 positives.
  std::mt19937_64 gen(23);
  std::vector<Record> records;
  for (int i = 0; i < 1000; ++i) {
    FeatureVector x = testing::random_record(gen);
    for (Feature f : kSymptomFeatures) x.set(f, false);
    records.push_back({x, false});
  }
  for (int i = 0; i < 200; ++i) {
    FeatureVector x = testing::random_record(gen);
    x.set(Feature::kHeadache, true);
    records.push_back({x, false});
  }
  for (int i = 0; i < 300; ++i) {
    FeatureVector x = testing::random_record(gen);
    x.set(Feature::kHeadache, i % 2 == 0);
    records.push_back({x, true});
  }
  std::shuffle(records.begin(), records.end(), gen);
  return Dataset(std::move(records), "bias");
}

TEST(SimulateBiasTest, ZeroFractionIsIdentity) {
  const Dataset ds = bias_fixture();
  const Dataset out = simulate_bias(ds, {0.0, 3});
  ASSERT_EQ(out.size(), ds.size());
  for (std::size_t i = 0; i < ds.size(); ++i) EXPECT_EQ(out[i], ds[i]);
}

TEST(SimulateBiasTest, FullFractionRemovesAllAsymptomaticNegatives) {
  const Dataset out = simulate_bias(bias_fixture(), {1.0, 3});
  EXPECT_EQ(count_asymptomatic_negative(out), 0u);
  EXPECT_EQ(out.size(), 500u);
}

TEST(SimulateBiasTest, HalfFractionRemovesHalf) {
  const Dataset ds = bias_fixture();
  ASSERT_EQ(count_asymptomatic_negative(ds), 1000u);
  const Dataset out = simulate_bias(ds, {0.5, 3});
  EXPECT_EQ(ds.size() - out.size(), 500u);
  EXPECT_EQ(count_asymptomatic_negative(out), 500u);
  // Removed records report no symptom, so symptom reporter rates are
  // unchanged; non-symptom features see fewer negative reporters.
  for (Feature f : kSymptomFeatures) {
    EXPECT_EQ(reporter_positive_rate(out, f), reporter_positive_rate(ds, f));
  }
  EXPECT_GT(reporter_positive_rate(out, Feature::kSexMale),
            reporter_positive_rate(ds, Feature::kSexMale));
}

TEST(SimulateBiasTest, OutputIsSubMultisetAndOrdered) {
  const Dataset ds = bias_fixture();
  for (const double fraction : {0.1, 0.25, 0.75}) {
    const Dataset out = simulate_bias(ds, {fraction, 99});
    const auto in_set = as_multiset(ds);
    const auto out_set = as_multiset(out);
    EXPECT_TRUE(std::includes(in_set.begin(), in_set.end(), out_set.begin(),
                              out_set.end()));
    // Survivors keep their relative order.
    std::size_t j = 0;
    for (std::size_t i = 0; i < ds.size() && j < out.size(); ++i) {
      if (ds[i] == out[j]) ++j;
    }
    EXPECT_EQ(j, out.size());
  }
}

TEST(SimulateBiasTest, Deterministic) {
  const Dataset ds = bias_fixture();
  const Dataset a = simulate_bias(ds, {0.5, 8});
  const Dataset b = simulate_bias(ds, {0.5, 8});
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i], b[i]);
}

TEST(SplitTest, Sizes) {
  std::mt19937_64 gen(1);
  const Dataset ds = testing::random_dataset(gen, 100, 0.5);
  const SplitResult parts = split(ds, 0.2, 4, false);
  EXPECT_EQ(parts.train.size(), 80u);
  EXPECT_EQ(parts.test.size(), 20u);
}

TEST(SplitTest, StratifiedKeepsPrevalence) {
  std::vector<Record> records;
  for (int i = 0; i < 100; ++i) records.push_back({FeatureVector{}, i % 10 == 0});
  const Dataset ds(std::move(records), "strat");
  const SplitResult parts = split(ds, 0.5, 4, true);
  EXPECT_EQ(parts.test.count_negative(), 45u);
  EXPECT_EQ(parts.test.count_positive(), 5u);
}

TEST(SplitTest, DeterministicAndPartitioning) {
  std::mt19937_64 gen(2);
  const Dataset ds = testing::random_dataset(gen, 257, 0.3);
  const SplitResult a = split(ds, 0.3, 77, true);
  const SplitResult b = split(ds, 0.3, 77, true);
  ASSERT_EQ(a.test.size(), b.test.size());
  for (std::size_t i = 0; i < a.test.size(); ++i) EXPECT_EQ(a.test[i], b.test[i]);
  auto joined = as_multiset(a.train);
  for (const auto& item : as_multiset(a.test)) joined.insert(item);
  EXPECT_EQ(joined, as_multiset(ds));
}

TEST(SplitTest, RejectsBadFraction) {
  std::mt19937_64 gen(3);
  const Dataset ds = testing::random_dataset(gen, 10, 0.5);
  EXPECT_COVIDGBM_ERROR(split(ds, 1.0, 1, false), ErrorKind::kContract,
                        "test fraction");
}

TEST(CohortTableTest, BundledTotals) {
  const CohortTable& table = bundled_cohort_table();
  EXPECT_EQ(table.n_positive, 8393u);
  EXPECT_EQ(table.n_negative, 90839u);
  EXPECT_EQ(table.rows.size(), 16u);
  EXPECT_EQ(table.positive_with_feature[index_of(Feature::kContactConfirmed)],
            4052u);
  EXPECT_EQ(table.negative_with_feature[index_of(Feature::kHeadache)], 68u);
}

}  // namespace
}  // namespace covidgbm
