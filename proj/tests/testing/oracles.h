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

// Independent reference implementations used only by the test suites.
// Each oracle recomputes a library result by a different, slower route.

#ifndef COVIDGBM_TESTS_TESTING_ORACLES_H_
#define COVIDGBM_TESTS_TESTING_ORACLES_H_

#include <array>
#include <cstdint>
#include <random>
#include <vector>

#include "covidgbm/dataset.h"
#include "covidgbm/gbm.h"
#include "covidgbm/schema.h"

namespace covidgbm::testing {

struct ShapleyValues {
  double base_value = 0.0;
  std::array<double, kNumFeatures> phi{};
};

// Cover-weighted expectation of one tree when only the features in `known`
// are fixed to their values in `x`.
double conditional_expectation(const Tree& tree, FeatureVector x,
                               std::uint8_t known);

// Exact Shapley values by enumerating all 2^8 coalitions.
ShapleyValues brute_force_shapley(const Model& model, FeatureVector x);

// Sum of per-tree leaf values reached by walking each tree from its root.
double traversal_predict(const Model& model, FeatureVector x);

// Pair-count area: (2 * concordant + ties) / (2 * P * N).
double pair_count_auroc(const std::vector<double>& scores,
                        const std::vector<bool>& labels);

// Random tree with `leaves` leaves, positive leaf covers and internal covers
// equal to the sum of their children.
Tree random_tree(std::mt19937_64& gen, int leaves);

// Random ensemble with a tree count and leaf counts drawn uniformly from the
// given inclusive ranges.
Model random_model(std::mt19937_64& gen, int min_trees, int max_trees,
                   int min_leaves, int max_leaves);

FeatureVector random_record(std::mt19937_64& gen);

// Records with independent fair features and a label from the given
// per-record probability of positives.
Dataset random_dataset(std::mt19937_64& gen, std::size_t n,
                       double positive_share);

struct FeatureCounts {
  std::array<std::uint64_t, kNumFeatures> positive_with{};
  std::array<std::uint64_t, kNumFeatures> negative_with{};
  std::uint64_t n_positive = 0;
  std::uint64_t n_negative = 0;
};

FeatureCounts count_features(const Dataset& ds);

// Log-likelihood ratio of the class-conditionally independent model with the
// given per-class feature rates.
double bayes_log_likelihood_ratio(const MarginalTable& m, FeatureVector x);

// Second-order central difference of f at x.
template <typename F>
long double second_difference(F f, long double x, long double h) {
  return (f(x + h) - 2.0L * f(x) + f(x - h)) / (h * h);
}

template <typename F>
long double first_difference(F f, long double x, long double h) {
  return (f(x + h) - f(x - h)) / (2.0L * h);
}

}  // namespace covidgbm::testing

#endif  // COVIDGBM_TESTS_TESTING_ORACLES_H_
