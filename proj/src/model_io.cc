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

#include "covidgbm/model_io.h"

#include <fstream>
#include <iterator>
#include <sstream>

#include "covidgbm/error.h"
#include "covidgbm/format.h"
#include "json.hpp"

namespace covidgbm {
namespace {

using nlohmann::json;

void write_node(const Tree& tree, int index, std::string& out) {
  const TreeNode& node = tree.node(index);
  if (node.is_leaf()) {
    out += "{\"value\": " + format_real(node.value) +
           ", \"cover\": " + format_real(node.cover) + "}";
    return;
  }
  out += "{\"feature\": " + std::to_string(node.feature) +
         ", \"cover\": " + format_real(node.cover) + ", \"left\": ";
  write_node(tree, node.left, out);
  out += ", \"right\": ";
  write_node(tree, node.right, out);
  out += "}";
}

[[noreturn]] void malformed(const std::string& detail) {
  throw ParseError("malformed model document: " + detail);
}

const json& field(const json& object, const char* key) {
  if (!object.is_object()) malformed("expected an object");
  const auto it = object.find(key);
  if (it == object.end()) malformed(std::string("missing field '") + key + "'");
  return *it;
}

double real_field(const json& object, const char* key) {
  const json& v = field(object, key);
  if (!v.is_number()) malformed(std::string("field '") + key + "' not numeric");
  return v.get<double>();
}

std::int64_t int_field(const json& object, const char* key) {
  const json& v = field(object, key);
  if (!v.is_number_integer()) {
    malformed(std::string("field '") + key + "' not an integer");
  }
  return v.get<std::int64_t>();
}

int read_node(const json& j, std::vector<TreeNode>& nodes, int depth) {
  if (depth > kNumFeatures) malformed("tree deeper than the schema allows");
  const int index = static_cast<int>(nodes.size());
  nodes.emplace_back();
  TreeNode node;
  node.cover = real_field(j, "cover");
  if (j.contains("value")) {
    node.value = real_field(j, "value");
  } else {
    node.feature = static_cast<int>(int_field(j, "feature"));
    node.left = read_node(field(j, "left"), nodes, depth + 1);
    node.right = read_node(field(j, "right"), nodes, depth + 1);
  }
  nodes[index] = node;
  return index;
}

}  // namespace

std::string save_model(const Model& model) {
  const TrainConfig& cfg = model.config();
  std::string out;
  out += "{\n  \"format_version\": " + std::to_string(kModelFormatVersion) +
         ",\n  \"schema\": [";
  for (int i = 0; i < kNumFeatures; ++i) {
    if (i > 0) out += ", ";
    out += "\"" + std::string(FeatureSchema::name(i)) + "\"";
  }
  out += "],\n  \"base_score\": " + format_real(model.base_score()) + ",\n";
  out += "  \"config\": {\"num_rounds\": " + std::to_string(cfg.num_rounds) +
         ", \"learning_rate\": " + format_real(cfg.learning_rate) +
         ", \"max_leaves\": " + std::to_string(cfg.max_leaves) +
         ", \"min_samples_leaf\": " + std::to_string(cfg.min_samples_leaf) +
         ", \"l2_lambda\": " + format_real(cfg.l2_lambda) +
         ", \"min_split_gain\": " + format_real(cfg.min_split_gain) +
         ", \"seed\": " + std::to_string(cfg.seed) + "},\n";
  out += "  \"trees\": [";
  const auto trees = model.trees();
  for (std::size_t t = 0; t < trees.size(); ++t) {
    out += t == 0 ? "\n    " : ",\n    ";
    write_node(trees[t], 0, out);
  }
  out += trees.empty() ? "]\n}\n" : "\n  ]\n}\n";
  return out;
}

void save_model_file(const Model& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << save_model(model);
  out.flush();
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

Model load_model(const std::string& document) {
  const json doc = json::parse(document, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded()) malformed("invalid JSON");
  if (!doc.is_object()) malformed("top level is not an object");

  const auto version = int_field(doc, "format_version");
  if (version != kModelFormatVersion) {
    throw ContractError("version mismatch: model format " +
                        std::to_string(version) + ", expected " +
                        std::to_string(kModelFormatVersion));
  }

  const json& schema = field(doc, "schema");
  if (!schema.is_array()) malformed("schema is not an array");
  bool schema_ok = schema.size() == static_cast<std::size_t>(kNumFeatures);
  for (std::size_t i = 0; schema_ok && i < schema.size(); ++i) {
    schema_ok = schema[i].is_string() &&
                schema[i].get<std::string>() ==
                    FeatureSchema::name(static_cast<int>(i));
  }
  if (!schema_ok) throw ContractError("schema mismatch in model document");

  const json& config = field(doc, "config");
  TrainConfig cfg;
  cfg.num_rounds = static_cast<int>(int_field(config, "num_rounds"));
  cfg.learning_rate = real_field(config, "learning_rate");
  cfg.max_leaves = static_cast<int>(int_field(config, "max_leaves"));
  cfg.min_samples_leaf = static_cast<int>(int_field(config, "min_samples_leaf"));
  cfg.l2_lambda = real_field(config, "l2_lambda");
  cfg.min_split_gain = real_field(config, "min_split_gain");
  {
    const json& seed = field(config, "seed");
    if (!seed.is_number_unsigned() && !seed.is_number_integer()) {
      malformed("field 'seed' not an integer");
    }
    cfg.seed = seed.get<std::uint64_t>();
  }

  const json& trees_json = field(doc, "trees");
  if (!trees_json.is_array()) malformed("trees is not an array");
  std::vector<Tree> trees;
  trees.reserve(trees_json.size());
  for (const json& t : trees_json) {
    std::vector<TreeNode> nodes;
    read_node(t, nodes, 0);
    try {
      trees.emplace_back(std::move(nodes));
    } catch (const Error& e) {
      malformed(e.what());
    }
  }
  return Model(real_field(doc, "base_score"), std::move(trees), cfg);
}

Model load_model(std::istream& in) {
  return load_model(std::string(std::istreambuf_iterator<char>(in),
                                std::istreambuf_iterator<char>()));
}

Model load_model_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return load_model(in);
}

}  // namespace covidgbm
