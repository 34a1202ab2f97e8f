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

#include "covidgbm/gbm.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "covidgbm/error.h"

namespace covidgbm {
namespace {

bool is_finite(double x) { return std::isfinite(x); }

// -log(sigmoid(-x)), evaluated without overflow.
double softplus(double x) {
  return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

struct PatternCounts {
  std::uint64_t positive = 0;
  std::uint64_t negative = 0;
  std::uint64_t total() const { return positive + negative; }
};

using PatternTable = std::array<PatternCounts, kNumPatterns>;

struct PatternStats {
  double grad = 0.0;
  double hess = 0.0;
};

struct SplitCandidate {
  int feature = TreeNode::kLeaf;
  double gain = 0.0;
};

struct GrowingLeaf {
  int node = 0;
  std::vector<int> patterns;  // Ascending pattern index.
  std::uint8_t used_features = 0;
  double grad = 0.0;
  double hess = 0.0;
  std::uint64_t count = 0;
  SplitCandidate best;
  bool open = true;
};

// Regularized half-structure score G^2 / (H + lambda).
double structure_score(double grad, double hess, double lambda) {
  const double denom = hess + lambda;
  return denom > 0.0 ? grad * grad / denom : 0.0;
}

class TreeGrower {
 public:
  TreeGrower(const TrainConfig& cfg, const PatternTable& counts,
             const std::array<PatternStats, kNumPatterns>& stats)
      : cfg_(cfg), counts_(counts), stats_(stats) {}

  Tree grow(const std::vector<int>& present_patterns) {
    nodes_.assign(1, TreeNode{});
    leaves_.clear();
    GrowingLeaf root;
    root.node = 0;
    root.patterns = present_patterns;
    summarize(root);
    leaves_.push_back(std::move(root));
    find_best_split(leaves_.back());

    int num_leaves = 1;
    while (num_leaves < cfg_.max_leaves) {
      // Highest gain wins; the earlier-created leaf wins ties.
      int chosen = -1;
      for (int i = 0; i < static_cast<int>(leaves_.size()); ++i) {
        const GrowingLeaf& leaf = leaves_[i];
        if (!leaf.open || leaf.best.feature == TreeNode::kLeaf) continue;
        if (chosen < 0 || leaf.best.gain > leaves_[chosen].best.gain) {
          chosen = i;
        }
      }
      if (chosen < 0) break;
      split_leaf(chosen);
      ++num_leaves;
    }

    for (const GrowingLeaf& leaf : leaves_) {
      if (!leaf.open) continue;
      TreeNode& node = nodes_[leaf.node];
      const double denom = leaf.hess + cfg_.l2_lambda;
      node.value = denom > 0.0 ? -cfg_.learning_rate * leaf.grad / denom : 0.0;
      node.cover = leaf.hess;
    }
    accumulate_cover(0);
    return Tree(std::move(nodes_));
  }

 private:
  void summarize(GrowingLeaf& leaf) const {
    leaf.grad = 0.0;
    leaf.hess = 0.0;
    leaf.count = 0;
    for (const int p : leaf.patterns) {
      leaf.grad += stats_[p].grad;
      leaf.hess += stats_[p].hess;
      leaf.count += counts_[p].total();
    }
  }

  void find_best_split(GrowingLeaf& leaf) const {
    leaf.best = SplitCandidate{};
    const double lambda = cfg_.l2_lambda;
    const double parent = structure_score(leaf.grad, leaf.hess, lambda);
    const auto min_count = static_cast<std::uint64_t>(cfg_.min_samples_leaf);
    for (int f = 0; f < kNumFeatures; ++f) {
      if ((leaf.used_features >> f) & 1u) continue;
      double grad[2] = {0.0, 0.0};
      double hess[2] = {0.0, 0.0};
      std::uint64_t count[2] = {0, 0};
      for (const int p : leaf.patterns) {
        const int side = (p >> f) & 1;
        grad[side] += stats_[p].grad;
        hess[side] += stats_[p].hess;
        count[side] += counts_[p].total();
      }
      if (count[0] < min_count || count[1] < min_count) continue;
      const double gain = 0.5 * (structure_score(grad[0], hess[0], lambda) +
                                 structure_score(grad[1], hess[1], lambda) -
                                 parent) -
                          cfg_.min_split_gain;
      // Strict comparison keeps the lower feature index on ties.
      if (gain > 0.0 && gain > leaf.best.gain) leaf.best = {f, gain};
    }
  }

  void split_leaf(int leaf_index) {
    const int feature = leaves_[leaf_index].best.feature;
    const int node_index = leaves_[leaf_index].node;
    const int left_node = static_cast<int>(nodes_.size());
    nodes_.push_back(TreeNode{});
    nodes_.push_back(TreeNode{});
    nodes_[node_index].feature = feature;
    nodes_[node_index].left = left_node;
    nodes_[node_index].right = left_node + 1;

    GrowingLeaf children[2];
    for (int side = 0; side < 2; ++side) {
      children[side].node = left_node + side;
      children[side].used_features = static_cast<std::uint8_t>(
          leaves_[leaf_index].used_features | (1u << feature));
    }
    for (const int p : leaves_[leaf_index].patterns) {
      children[(p >> feature) & 1].patterns.push_back(p);
    }
    leaves_[leaf_index].open = false;
    leaves_[leaf_index].patterns.clear();
    for (GrowingLeaf& child : children) {
      summarize(child);
      find_best_split(child);
      leaves_.push_back(std::move(child));
    }
  }

  double accumulate_cover(int index) {
    TreeNode& node = nodes_[index];
    if (node.is_leaf()) return node.cover;
    const double left = accumulate_cover(node.left);
    const double right = accumulate_cover(node.right);
    nodes_[index].cover = left + right;
    return nodes_[index].cover;
  }

  const TrainConfig& cfg_;
  const PatternTable& counts_;
  const std::array<PatternStats, kNumPatterns>& stats_;
  std::vector<TreeNode> nodes_;
  std::vector<GrowingLeaf> leaves_;
};

double pattern_table_loss(const PatternTable& counts,
                          const std::array<double, kNumPatterns>& raw,
                          std::uint64_t n) {
  double total = 0.0;
  for (int p = 0; p < kNumPatterns; ++p) {
    if (counts[p].total() == 0) continue;
    total += static_cast<double>(counts[p].positive) * softplus(-raw[p]) +
             static_cast<double>(counts[p].negative) * softplus(raw[p]);
  }
  return total / static_cast<double>(n);
}

[[noreturn]] void malformed_tree(const std::string& why) {
  throw ContractError("malformed tree: " + why);
}

}  // namespace

void TrainConfig::validate() const {
  if (num_rounds < 0) throw ContractError("num_rounds must be >= 0");
  if (!(learning_rate > 0.0 && learning_rate <= 1.0)) {
    throw ContractError("learning_rate must be in (0, 1]");
  }
  if (max_leaves < 2) throw ContractError("max_leaves must be >= 2");
  if (min_samples_leaf < 1) {
    throw ContractError("min_samples_leaf must be >= 1");
  }
  if (!(l2_lambda >= 0.0) || !is_finite(l2_lambda)) {
    throw ContractError("l2_lambda must be finite and >= 0");
  }
  if (!(min_split_gain >= 0.0) || !is_finite(min_split_gain)) {
    throw ContractError("min_split_gain must be finite and >= 0");
  }
}

Tree::Tree(std::vector<TreeNode> nodes) : nodes_(std::move(nodes)) {
  if (nodes_.empty()) malformed_tree("no nodes");
  const int n = static_cast<int>(nodes_.size());
  std::vector<bool> visited(n, false);
  struct Frame {
    int node;
    std::uint8_t used;
  };
  std::vector<Frame> stack = {{0, 0}};
  while (!stack.empty()) {
    const Frame frame = stack.back();
    stack.pop_back();
    if (visited[frame.node]) malformed_tree("node reached twice");
    visited[frame.node] = true;
    const TreeNode& node = nodes_[frame.node];
    if (!is_finite(node.cover) || node.cover < 0.0) {
      malformed_tree("cover must be finite and nonnegative");
    }
    if (node.is_leaf()) {
      if (!is_finite(node.value)) malformed_tree("leaf value not finite");
      ++num_leaves_;
      continue;
    }
    if (node.feature < 0 || node.feature >= kNumFeatures) {
      malformed_tree("feature index out of range");
    }
    if ((frame.used >> node.feature) & 1u) {
      malformed_tree("path tests feature " + std::to_string(node.feature) +
                     " twice");
    }
    for (const int child : {node.left, node.right}) {
      if (child <= 0 || child >= n) malformed_tree("child index out of range");
    }
    const double sum = nodes_[node.left].cover + nodes_[node.right].cover;
    if (std::abs(node.cover - sum) > 1e-9 * std::max(1.0, node.cover)) {
      malformed_tree("internal cover differs from sum of children");
    }
    const auto used =
        static_cast<std::uint8_t>(frame.used | (1u << node.feature));
    stack.push_back({node.right, used});
    stack.push_back({node.left, used});
  }
  if (std::find(visited.begin(), visited.end(), false) != visited.end()) {
    malformed_tree("unreachable node");
  }
}

int Tree::leaf_index(FeatureVector x) const {
  int index = 0;
  while (!nodes_[index].is_leaf()) {
    const TreeNode& node = nodes_[index];
    index = x[node.feature] ? node.right : node.left;
  }
  return index;
}

Model::Model(double base_score, std::vector<Tree> trees, TrainConfig config)
    : base_score_(base_score),
      trees_(std::move(trees)),
      config_(std::move(config)) {
  if (!is_finite(base_score_)) throw ContractError("base_score not finite");
}

double sigmoid(double raw) {
  if (raw >= 0.0) return 1.0 / (1.0 + std::exp(-raw));
  const double e = std::exp(raw);
  return e / (1.0 + e);
}

GradHess logistic_grad_hess(double raw, bool label) {
  // e = exp(-|raw|) keeps both p and 1 - p accurate in the tails.
  const double e = std::exp(-std::abs(raw));
  const double big = 1.0 / (1.0 + e);  // max(p, 1 - p)
  const double small = e / (1.0 + e);  // min(p, 1 - p)
  const double p = raw >= 0.0 ? big : small;
  const double one_minus_p = raw >= 0.0 ? small : big;
  return {label ? -one_minus_p : p, big * small};
}

Model fit(const Dataset& ds, const TrainConfig& cfg,
          std::vector<double>* loss_history) {
  cfg.validate();
  if (!ds.labeled()) throw ContractError("fit: dataset has no label column");
  if (ds.empty()) throw ContractError("fit: empty dataset");

  PatternTable counts{};
  for (const Record& r : ds.records()) {
    PatternCounts& c = counts[r.features.bits()];
    (r.label ? c.positive : c.negative) += 1;
  }
  std::uint64_t n_pos = 0;
  std::vector<int> present;
  for (int p = 0; p < kNumPatterns; ++p) {
    n_pos += counts[p].positive;
    if (counts[p].total() > 0) present.push_back(p);
  }
  const std::uint64_t n = ds.size();
  if (n_pos == 0 || n_pos == n) {
    throw ContractError("degenerate class balance: both classes required");
  }

  const double prevalence = static_cast<double>(n_pos) / static_cast<double>(n);
  const double base_score = std::log(prevalence / (1.0 - prevalence));

  std::array<double, kNumPatterns> raw;
  raw.fill(base_score);
  if (loss_history) {
    loss_history->clear();
    loss_history->push_back(pattern_table_loss(counts, raw, n));
  }

  std::vector<Tree> trees;
  trees.reserve(static_cast<std::size_t>(cfg.num_rounds));
  std::array<PatternStats, kNumPatterns> stats{};
  for (int round = 0; round < cfg.num_rounds; ++round) {
    for (const int p : present) {
      const GradHess pos = logistic_grad_hess(raw[p], true);
      const GradHess neg = logistic_grad_hess(raw[p], false);
      const auto n_p = static_cast<double>(counts[p].positive);
      const auto n_n = static_cast<double>(counts[p].negative);
      stats[p] = {n_p * pos.grad + n_n * neg.grad,
                  n_p * pos.hess + n_n * neg.hess};
    }
    TreeGrower grower(cfg, counts, stats);
    Tree tree = grower.grow(present);
    for (const int p : present) {
      raw[p] += tree.predict(FeatureVector::from_bits(static_cast<std::uint8_t>(p)));
    }
    trees.push_back(std::move(tree));
    if (loss_history) {
      loss_history->push_back(pattern_table_loss(counts, raw, n));
    }
  }
  return Model(base_score, std::move(trees), cfg);
}

double predict_raw(const Model& model, FeatureVector x) {
  double raw = model.base_score();
  for (const Tree& tree : model.trees()) raw += tree.predict(x);
  return raw;
}

double predict_proba(const Model& model, FeatureVector x) {
  constexpr double kLowest = std::numeric_limits<double>::denorm_min();
  constexpr double kHighest = 1.0 - 0x1.0p-53;
  return std::clamp(sigmoid(predict_raw(model, x)), kLowest, kHighest);
}

double log_loss(const Model& model, const Dataset& ds) {
  if (!ds.labeled() || ds.empty()) {
    throw ContractError("log_loss: labeled, non-empty dataset required");
  }
  double total = 0.0;
  for (const Record& r : ds.records()) {
    const double raw = predict_raw(model, r.features);
    total += r.label ? softplus(-raw) : softplus(raw);
  }
  return total / static_cast<double>(ds.size());
}

}  // namespace covidgbm
