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

#ifndef COVIDGBM_SHAP_H_
#define COVIDGBM_SHAP_H_

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "covidgbm/dataset.h"
#include "covidgbm/gbm.h"

namespace covidgbm {

// Additive attribution of one raw (log-odds) prediction:
//   base_value + sum(contributions) == predict_raw(model, record).
struct ShapExplanation {
  double base_value = 0.0;
  std::array<double, kNumFeatures> contributions{};
  FeatureVector record;

  double total() const;
};

// Cover-weighted mean raw prediction of the model, the attribution
// baseline.
double expected_value(const Model& model);
double expected_value(const Tree& tree);

// Exact Shapley values of the path-dependent (cover-weighted conditional
// expectation) value function, computed with the polynomial-time TreeSHAP
// recursion. Throws a contract error "degenerate tree cover" when an
// internal node has zero cover.
ShapExplanation explain(const Model& model, FeatureVector record);

// Per-tree contributions, without the baseline.
std::array<double, kNumFeatures> explain_tree(const Tree& tree,
                                              FeatureVector record);

// Explanations for every record, in record order. Each distinct feature
// pattern is explained once; the work is spread over `num_threads`.
std::vector<ShapExplanation> explain_dataset(const Model& model,
                                             const Dataset& ds,
                                             int num_threads = 1);

struct FeatureImportance {
  int feature = 0;
  double mean_abs_shap = 0.0;
};

// Descending by mean |phi|; ties keep schema order.
using FeatureRanking = std::vector<FeatureImportance>;

FeatureRanking rank_features(std::span<const ShapExplanation> explanations);
FeatureRanking mean_abs_shap(const Model& model, const Dataset& ds,
                             int num_threads = 1);

struct BeeswarmPoint {
  int feature = 0;
  std::size_t record_index = 0;
  double shap_value = 0.0;
  bool feature_value = false;
};

// One point per (record, feature): features in ranking order, records in
// dataset order within each feature.
std::vector<BeeswarmPoint> beeswarm_points(const Model& model,
                                           const Dataset& ds,
                                           int num_threads = 1);

}  // namespace covidgbm

#endif  // COVIDGBM_SHAP_H_
