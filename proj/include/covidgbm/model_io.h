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

#ifndef COVIDGBM_MODEL_IO_H_
#define COVIDGBM_MODEL_IO_H_

#include <filesystem>
#include <iosfwd>
#include <string>

#include "covidgbm/gbm.h"

namespace covidgbm {

inline constexpr int kModelFormatVersion = 1;

// JSON model document:
//   {"format_version": 1,
//    "schema": [8 feature names],
//    "base_score": r,
//    "config": {num_rounds, learning_rate, max_leaves, min_samples_leaf,
//               l2_lambda, min_split_gain, seed},
//    "trees": [node, ...]}
// where node is {"feature": i, "cover": c, "left": node, "right": node} or
// {"value": v, "cover": c}. Reals carry 17 significant digits, so a
// save/load round trip reproduces every double exactly.
std::string save_model(const Model& model);
void save_model_file(const Model& model, const std::filesystem::path& path);

// Throws a parse error "malformed model document" for invalid JSON or a
// document of the wrong shape, and a contract error for a version or schema
// mismatch.
Model load_model(std::istream& in);
Model load_model(const std::string& document);
Model load_model_file(const std::filesystem::path& path);

}  // namespace covidgbm

#endif  // COVIDGBM_MODEL_IO_H_
