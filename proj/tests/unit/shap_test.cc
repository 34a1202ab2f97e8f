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

#include "covidgbm/shap.h"

#include <cmath>
#include <numeric>
#include <random>

#include "covidgbm/cohort_table.h"
#include "gtest/gtest.h"
#include "testing/expect_error.h"
#include "testing/oracles.h"

namespace covidgbm {
namespace {

void expect_local_accuracy(const Model& model, const ShapExplanation& e) {
  EXPECT_NEAR(e.total(), predict_raw(model, e.record), 1e-9);
  double sum = e.base_value;
  for (const double phi : e.contributions) sum += phi;
  EXPECT_NEAR(sum, predict_raw(model, e.record), 1e-9);
}

Model stump(double base, double a, double b, double cover_left,
            double cover_right, int feature) {
  std::vector<TreeNode> nodes = {
      {feature, 1, 2, 0.0, cover_left + cover_right},
      {TreeNode::kLeaf, -1, -1, b, cover_left},
      {TreeNode::kLeaf, -1, -1, a, cover_right},
  };
  std::vector<Tree> trees;
  trees.emplace_back(std::move(nodes));
  return Model(base, std::move(trees), TrainConfig{});
}

TEST(ExplainTest, EmptyModel) {
  const Model model(-1.5, {}, TrainConfig{});
  const ShapExplanation e = explain(model, FeatureVector::from_bits(0xA5));
  EXPECT_EQ(e.base_value, -1.5);
  for (const double phi : e.contributions) EXPECT_EQ(phi, 0.0);
  expect_local_accuracy(model, e);
}

TEST(ExplainTest, StumpClosedForm) {
  const double a = 0.9;
  const double b = -0.4;
  const double q = 0.3;
  const Model model = stump(-2.0, a, b, 7.0, 3.0, index_of(Feature::kCough));
  FeatureVector x;
  x.set(Feature::kCough, true);
  x.set(Feature::kFever, true);
  const ShapExplanation e = explain(model, x);
  EXPECT_NEAR(e.contributions[index_of(Feature::kCough)], (1 - q) * (a - b), 1e-12);
  EXPECT_NEAR(e.base_value, -2.0 + q * a + (1 - q) * b, 1e-12);
  for (int f = 0; f < kNumFeatures; ++f) {
    if (f != index_of(Feature::kCough)) {
      EXPECT_EQ(e.contributions[f], 0.0);
    }
  }
  const testing::ShapleyValues oracle = testing::brute_force_shapley(model, x);
  EXPECT_NEAR(oracle.phi[index_of(Feature::kCough)], (1 - q) * (a - b), 1e-12);
  expect_local_accuracy(model, e);
}

TEST(ExplainTest, MatchesBruteForceOracle) {
  std::mt19937_64 gen(101);
  for (int m = 0; m < 20; ++m) {
    const Model model = testing::random_model(gen, 1, 50, 2, 16);
    for (int r = 0; r < 20; ++r) {
      const FeatureVector x = testing::random_record(gen);
      const ShapExplanation e = explain(model, x);
      const testing::ShapleyValues oracle = testing::brute_force_shapley(model, x);
      EXPECT_NEAR(e.base_value, oracle.base_value, 1e-9);
      for (int f = 0; f < kNumFeatures; ++f) {
        EXPECT_NEAR(e.contributions[f], oracle.phi[f], 1e-9);
      }
      expect_local_accuracy(model, e);
    }
  }
}

TEST(ExplainTest, AdditiveAcrossTrees) {
  std::mt19937_64 gen(102);
  const Model model = testing::random_model(gen, 5, 12, 2, 16);
  for (int r = 0; r < 30; ++r) {
    const FeatureVector x = testing::random_record(gen);
    std::array<double, kNumFeatures> summed{};
    double base = model.base_score();
    for (const Tree& tree : model.trees()) {
      const auto phi = explain_tree(tree, x);
      for (int f = 0; f < kNumFeatures; ++f) summed[f] += phi[f];
      base += expected_value(tree);
    }
    const ShapExplanation e = explain(model, x);
    EXPECT_NEAR(e.base_value, base, 1e-9);
    EXPECT_NEAR(expected_value(model), base, 1e-9);
    for (int f = 0; f < kNumFeatures; ++f) {
      EXPECT_NEAR(e.contributions[f], summed[f], 1e-9);
    }
    expect_local_accuracy(model, e);
  }
}

TEST(ExplainTest, DummyFeatureGetsZero) {
  std::mt19937_64 gen(103);
  const Model model = testing::random_model(gen, 10, 20, 2, 16);
  std::array<bool, kNumFeatures> used{};
  for (const Tree& tree : model.trees()) {
    for (const TreeNode& node : tree.nodes()) {
      if (!node.is_leaf()) used[node.feature] = true;
    }
  }
  for (int p = 0; p < kNumPatterns; ++p) {
    const ShapExplanation e = explain(model, FeatureVector::from_bits(p));
    for (int f = 0; f < kNumFeatures; ++f) {
      if (!used[f]) {
        EXPECT_EQ(e.contributions[f], 0.0);
      }
    }
    expect_local_accuracy(model, e);
  }
}

TEST(ExplainTest, ZeroCoverInternalNode) {
  std::vector<TreeNode> nodes = {
      {0, 1, 2, 0.0, 0.0},
      {TreeNode::kLeaf, -1, -1, 1.0, 0.0},
      {TreeNode::kLeaf, -1, -1, 2.0, 0.0},
  };
  std::vector<Tree> trees;
  trees.emplace_back(std::move(nodes));
  const Model model(0.0, std::move(trees), TrainConfig{});
  EXPECT_COVIDGBM_ERROR(explain(model, FeatureVector{}), ErrorKind::kContract,
                        "degenerate tree cover");
}

TEST(ExplainTest, TrainedModelLocalAccuracyAndThreadInvariance) {
  const Dataset ds = synthesize(bundled_cohort_table().marginals(), 400, 3000, 19);
  const Model model = fit(ds, TrainConfig{});
  const auto one = explain_dataset(model, ds, 1);
  const auto four = explain_dataset(model, ds, 4);
  ASSERT_EQ(one.size(), ds.size());
  for (std::size_t i = 0; i < one.size(); ++i) {
    EXPECT_EQ(one[i].base_value, four[i].base_value);
    EXPECT_EQ(one[i].contributions, four[i].contributions);
    EXPECT_EQ(one[i].record, ds[i].features);
    if (i % 50 == 0) {
      const testing::ShapleyValues oracle =
          testing::brute_force_shapley(model, ds[i].features);
      for (int f = 0; f < kNumFeatures; ++f) {
        EXPECT_NEAR(one[i].contributions[f], oracle.phi[f], 1e-9);
      }
    }
    expect_local_accuracy(model, one[i]);
  }
}

TEST(RankingTest, EmptyModelKeepsSchemaOrder) {
  std::mt19937_64 gen(104);
  const Dataset ds = testing::random_dataset(gen, 50, 0.5);
  const FeatureRanking ranking = mean_abs_shap(Model(0.1, {}, TrainConfig{}), ds);
  ASSERT_EQ(ranking.size(), 8u);
  for (int f = 0; f < kNumFeatures; ++f) {
    EXPECT_EQ(ranking[f].feature, f);
    EXPECT_EQ(ranking[f].mean_abs_shap, 0.0);
  }
}

TEST(RankingTest, SingleFeatureModel) {
  std::mt19937_64 gen(105);
  const Dataset ds = testing::random_dataset(gen, 100, 0.5);
  const Model model = stump(0.0, 1.0, -1.0, 5.0, 5.0, index_of(Feature::kCough));
  const FeatureRanking ranking = mean_abs_shap(model, ds);
  EXPECT_EQ(ranking[0].feature, index_of(Feature::kCough));
  EXPECT_GT(ranking[0].mean_abs_shap, 0.0);
  for (int k = 1; k < kNumFeatures; ++k) EXPECT_EQ(ranking[k].mean_abs_shap, 0.0);
}

TEST(RankingTest, MatchesPerRecordOracle) {
  std::mt19937_64 gen(106);
  const Model model = testing::random_model(gen, 5, 20, 2, 16);
  const Dataset ds = testing::random_dataset(gen, 200, 0.5);
  std::array<double, kNumFeatures> sums{};
  for (const Record& r : ds.records()) {
    const testing::ShapleyValues oracle = testing::brute_force_shapley(model, r.features);
    for (int f = 0; f < kNumFeatures; ++f) sums[f] += std::abs(oracle.phi[f]);
  }
  const FeatureRanking ranking = mean_abs_shap(model, ds, 3);
  for (std::size_t k = 0; k < ranking.size(); ++k) {
    const int f = ranking[k].feature;
    EXPECT_NEAR(ranking[k].mean_abs_shap, sums[f] / 200.0, 1e-9);
    if (k > 0) {
      EXPECT_GE(ranking[k - 1].mean_abs_shap, ranking[k].mean_abs_shap);
    }
  }
}

TEST(BeeswarmTest, PointsCrossCheck) {
  std::mt19937_64 gen(107);
  const Model model = stump(0.0, 1.0, -1.0, 4.0, 6.0, index_of(Feature::kFever));
  const Dataset ds = testing::random_dataset(gen, 3, 0.5);
  const auto points = beeswarm_points(model, ds);
  ASSERT_EQ(points.size(), 24u);
  for (const BeeswarmPoint& p : points) {
    const ShapExplanation e = explain(model, ds[p.record_index].features);
    EXPECT_EQ(p.shap_value, e.contributions[p.feature]);
    EXPECT_EQ(p.feature_value, ds[p.record_index].features[p.feature]);
    if (p.feature != index_of(Feature::kFever)) {
      EXPECT_EQ(p.shap_value, 0.0);
    }
    expect_local_accuracy(model, e);
  }
}

}  // namespace
}  // namespace covidgbm
