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

#ifndef COVIDGBM_GBM_H_
#define COVIDGBM_GBM_H_

#include <cstdint>
#include <span>
#include <vector>

#include "covidgbm/dataset.h"
#include "covidgbm/schema.h"

namespace covidgbm {

struct TrainConfig {
  int num_rounds = 100;
  double learning_rate = 0.1;
  int max_leaves = 16;
  int min_samples_leaf = 20;
  double l2_lambda = 1.0;
  double min_split_gain = 0.0;
  // Echoed into the model document. Training itself draws no random
  // numbers (no row or column subsampling).
  std::uint64_t seed = 0;

  // Throws a contract error naming the first out-of-range field.
  void validate() const;

  friend bool operator==(const TrainConfig&, const TrainConfig&) = default;
};

struct TreeNode {
  static constexpr int kLeaf = -1;

  int feature = kLeaf;  // Schema index tested by an internal node.
  int left = -1;        // Child for feature = 0.
  int right = -1;       // Child for feature = 1.
  double value = 0.0;   // Log-odds increment; meaningful on leaves only.
  double cover = 0.0;   // Training hessian mass reaching the node.

  bool is_leaf() const { return feature == kLeaf; }
};

// A binary decision tree stored as a flat node array, root at index 0.
class Tree {
 public:
  // Validates the structure and throws a contract error ("malformed tree")
  // when: a child index is out of range, a node is shared or unreachable, a
  // path tests the same feature twice, a cover or value is not finite, a
  // cover is negative, or an internal cover differs from the sum of its
  // children's covers.
  explicit Tree(std::vector<TreeNode> nodes);

  std::span<const TreeNode> nodes() const { return nodes_; }
  const TreeNode& node(int index) const { return nodes_[index]; }
  int num_leaves() const { return num_leaves_; }

  int leaf_index(FeatureVector x) const;
  double predict(FeatureVector x) const { return nodes_[leaf_index(x)].value; }

 private:
  std::vector<TreeNode> nodes_;
  int num_leaves_ = 0;
};

// Boosted ensemble: raw score = base_score + sum of tree outputs.
class Model {
 public:
  Model(double base_score, std::vector<Tree> trees, TrainConfig config);

  double base_score() const { return base_score_; }
  std::span<const Tree> trees() const { return trees_; }
  const TrainConfig& config() const { return config_; }

 private:
  double base_score_;
  std::vector<Tree> trees_;
  TrainConfig config_;
};

struct GradHess {
  double grad;
  double hess;
};

// First and second derivative of the binary log-loss with respect to the
// raw score: g = p - y, h = p(1 - p), p = sigmoid(raw).
GradHess logistic_grad_hess(double raw, bool label);

double sigmoid(double raw);

// Second-order boosting on the logistic loss with leaf-wise tree growth.
//
// Records are aggregated into the 256 possible feature patterns before
// training. All records sharing a pattern and a label carry identical
// gradients, so per-pattern sums are exact products of counts and the
// result does not depend on record order.
//
// When `loss_history` is given it receives num_rounds + 1 entries: the mean
// training log-loss after 0, 1, ..., num_rounds trees.
Model fit(const Dataset& ds, const TrainConfig& cfg,
          std::vector<double>* loss_history = nullptr);

double predict_raw(const Model& model, FeatureVector x);

// sigmoid(predict_raw), kept inside the open interval (0, 1).
double predict_proba(const Model& model, FeatureVector x);

// Mean log-loss of the model over a labeled dataset.
double log_loss(const Model& model, const Dataset& ds);

}  // namespace covidgbm

#endif  // COVIDGBM_GBM_H_
