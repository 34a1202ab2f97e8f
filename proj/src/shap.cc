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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>

#include "covidgbm/error.h"
#include "covidgbm/parallel.h"

namespace covidgbm {
namespace {

// One entry of the TreeSHAP feature path. `weight` is the running
// permutation weight of the subsets containing this many path features.
struct PathElement {
  int feature;
  double zero_fraction;  // Share of cover that flows here without the feature.
  double one_fraction;   // 1 if the record follows this branch, else 0.
  double weight;
};

using Path = std::vector<PathElement>;

void extend(Path& path, double zero_fraction, double one_fraction,
            int feature) {
  const int n = static_cast<int>(path.size());
  path.push_back({feature, zero_fraction, one_fraction, n == 0 ? 1.0 : 0.0});
  for (int i = n - 1; i >= 0; --i) {
    path[i + 1].weight += one_fraction * path[i].weight * (i + 1) / (n + 1);
    path[i].weight = zero_fraction * path[i].weight * (n - i) / (n + 1);
  }
}

// Inverse of extend() for element `index`.
void unwind(Path& path, int index) {
  const int n = static_cast<int>(path.size()) - 1;
  const double one_fraction = path[index].one_fraction;
  const double zero_fraction = path[index].zero_fraction;
  double next_one_portion = path[n].weight;
  for (int j = n - 1; j >= 0; --j) {
    if (one_fraction != 0.0) {
      const double tmp = path[j].weight;
      path[j].weight = next_one_portion * (n + 1) / ((j + 1) * one_fraction);
      next_one_portion =
          tmp - path[j].weight * zero_fraction * (n - j) / (n + 1);
    } else {
      path[j].weight = path[j].weight * (n + 1) / (zero_fraction * (n - j));
    }
  }
  for (int j = index; j < n; ++j) {
    path[j].feature = path[j + 1].feature;
    path[j].zero_fraction = path[j + 1].zero_fraction;
    path[j].one_fraction = path[j + 1].one_fraction;
  }
  path.pop_back();
}

// Total weight the path would have after unwinding element `index`, without
// modifying it.
double unwound_sum(const Path& path, int index) {
  const int n = static_cast<int>(path.size()) - 1;
  const double one_fraction = path[index].one_fraction;
  const double zero_fraction = path[index].zero_fraction;
  double next_one_portion = path[n].weight;
  double total = 0.0;
  if (one_fraction != 0.0) {
    for (int j = n - 1; j >= 0; --j) {
      const double tmp = next_one_portion / ((j + 1) * one_fraction);
      total += tmp;
      next_one_portion =
          path[j].weight - tmp * zero_fraction * (n - j);
    }
  } else {
    for (int j = n - 1; j >= 0; --j) {
      total += path[j].weight / (zero_fraction * (n - j));
    }
  }
  return total * (n + 1);
}

void recurse(const Tree& tree, FeatureVector x, int node_index, Path path,
             double zero_fraction, double one_fraction, int feature,
             std::array<double, kNumFeatures>& phi) {
  extend(path, zero_fraction, one_fraction, feature);
  const TreeNode& node = tree.node(node_index);
  if (node.is_leaf()) {
    for (int i = 1; i < static_cast<int>(path.size()); ++i) {
      const PathElement& e = path[i];
      // Elements with equal fractions contribute exactly zero.
      if (e.one_fraction == e.zero_fraction) continue;
      phi[e.feature] += unwound_sum(path, i) *
                        (e.one_fraction - e.zero_fraction) * node.value;
    }
    return;
  }

  const int hot = x[node.feature] ? node.right : node.left;
  const int cold = x[node.feature] ? node.left : node.right;
  double incoming_zero = 1.0;
  double incoming_one = 1.0;
  // A path never repeats a feature in a validated Tree; the unwind keeps the
  // recursion exact regardless.
  for (int k = 1; k < static_cast<int>(path.size()); ++k) {
    if (path[k].feature == node.feature) {
      incoming_zero = path[k].zero_fraction;
      incoming_one = path[k].one_fraction;
      unwind(path, k);
      break;
    }
  }
  const double cover = node.cover;
  recurse(tree, x, hot, path,
          incoming_zero * tree.node(hot).cover / cover, incoming_one,
          node.feature, phi);
  recurse(tree, x, cold, std::move(path),
          incoming_zero * tree.node(cold).cover / cover, 0.0, node.feature,
          phi);
}

void check_covers(const Tree& tree) {
  for (const TreeNode& node : tree.nodes()) {
    if (!node.is_leaf() && !(node.cover > 0.0)) {
      throw ContractError("degenerate tree cover: internal node with zero cover");
    }
  }
}

double subtree_expectation(const Tree& tree, int index) {
  const TreeNode& node = tree.node(index);
  if (node.is_leaf()) return node.value;
  const TreeNode& left = tree.node(node.left);
  const TreeNode& right = tree.node(node.right);
  return (left.cover * subtree_expectation(tree, node.left) +
          right.cover * subtree_expectation(tree, node.right)) /
         node.cover;
}

}  // namespace

double ShapExplanation::total() const {
  double sum = base_value;
  for (const double c : contributions) sum += c;
  return sum;
}

double expected_value(const Tree& tree) {
  check_covers(tree);
  return subtree_expectation(tree, 0);
}

double expected_value(const Model& model) {
  double value = model.base_score();
  for (const Tree& tree : model.trees()) value += expected_value(tree);
  return value;
}

std::array<double, kNumFeatures> explain_tree(const Tree& tree,
                                              FeatureVector record) {
  check_covers(tree);
  std::array<double, kNumFeatures> phi{};
  if (tree.node(0).is_leaf()) return phi;
  Path path;
  path.reserve(kNumFeatures + 2);
  recurse(tree, record, 0, std::move(path), 1.0, 1.0, -1, phi);
  return phi;
}

ShapExplanation explain(const Model& model, FeatureVector record) {
  ShapExplanation out;
  out.record = record;
  out.base_value = expected_value(model);
  for (const Tree& tree : model.trees()) {
    const auto phi = explain_tree(tree, record);
    for (int f = 0; f < kNumFeatures; ++f) out.contributions[f] += phi[f];
  }
  return out;
}

std::vector<ShapExplanation> explain_dataset(const Model& model,
                                             const Dataset& ds,
                                             int num_threads) {
  std::array<bool, kNumPatterns> present{};
  for (const Record& r : ds.records()) present[r.features.bits()] = true;
  std::vector<int> patterns;
  for (int p = 0; p < kNumPatterns; ++p) {
    if (present[p]) patterns.push_back(p);
  }

  std::array<ShapExplanation, kNumPatterns> cache{};
  parallel_for(patterns.size(), num_threads, [&](std::size_t i) {
    const int p = patterns[i];
    cache[p] = explain(model, FeatureVector::from_bits(static_cast<std::uint8_t>(p)));
  });

  std::vector<ShapExplanation> out;
  out.reserve(ds.size());
  for (const Record& r : ds.records()) out.push_back(cache[r.features.bits()]);
  return out;
}

FeatureRanking rank_features(std::span<const ShapExplanation> explanations) {
  if (explanations.empty()) {
    throw ContractError("mean_abs_shap: empty dataset");
  }
  std::array<double, kNumFeatures> sums{};
  for (const ShapExplanation& e : explanations) {
    for (int f = 0; f < kNumFeatures; ++f) sums[f] += std::abs(e.contributions[f]);
  }
  FeatureRanking ranking;
  for (int f = 0; f < kNumFeatures; ++f) {
    ranking.push_back({f, sums[f] / static_cast<double>(explanations.size())});
  }
  std::stable_sort(ranking.begin(), ranking.end(),
                   [](const FeatureImportance& a, const FeatureImportance& b) {
                     return a.mean_abs_shap > b.mean_abs_shap;
                   });
  return ranking;
}

FeatureRanking mean_abs_shap(const Model& model, const Dataset& ds,
                             int num_threads) {
  if (ds.empty()) throw ContractError("mean_abs_shap: empty dataset");
  return rank_features(explain_dataset(model, ds, num_threads));
}

std::vector<BeeswarmPoint> beeswarm_points(const Model& model,
                                           const Dataset& ds,
                                           int num_threads) {
  if (ds.empty()) throw ContractError("beeswarm_points: empty dataset");
  const auto explanations = explain_dataset(model, ds, num_threads);
  const auto ranking = rank_features(explanations);
  std::vector<BeeswarmPoint> points;
  points.reserve(ds.size() * kNumFeatures);
  for (const FeatureImportance& item : ranking) {
    for (std::size_t i = 0; i < ds.size(); ++i) {
      points.push_back({item.feature, i,
                        explanations[i].contributions[item.feature],
                        ds[i].features[item.feature]});
    }
  }
  return points;
}

}  // namespace covidgbm
