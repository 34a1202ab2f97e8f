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

#ifndef COVIDGBM_SCHEMA_H_
#define COVIDGBM_SCHEMA_H_

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>

namespace covidgbm {

inline constexpr int kNumFeatures = 8;

// Number of distinct binary feature vectors over the schema.
inline constexpr int kNumPatterns = 1 << kNumFeatures;

enum class Feature : std::uint8_t {
  kSexMale = 0,
  kAge60Plus = 1,
  kCough = 2,
  kFever = 3,
  kSoreThroat = 4,
  kShortnessOfBreath = 5,
  kHeadache = 6,
  kContactConfirmed = 7,
};

inline constexpr std::array<Feature, 5> kSymptomFeatures = {
    Feature::kCough, Feature::kFever, Feature::kSoreThroat,
    Feature::kShortnessOfBreath, Feature::kHeadache};

constexpr int index_of(Feature f) { return static_cast<int>(f); }

// The fixed, ordered feature schema shared by files, models and
// explanations.
struct FeatureSchema {
  static constexpr std::array<std::string_view, kNumFeatures> kNames = {
      "sex_male", "age_60_plus",         "cough",    "fever",
      "sore_throat", "shortness_of_breath", "headache", "contact_confirmed"};

  static constexpr std::string_view name(int index) { return kNames[index]; }
  static constexpr std::string_view name(Feature f) {
    return kNames[index_of(f)];
  }
  static std::optional<int> find(std::string_view name) {
    for (int i = 0; i < kNumFeatures; ++i) {
      if (kNames[i] == name) return i;
    }
    return std::nullopt;
  }
};

// Eight binary feature values packed into one byte. Bit i holds the value of
// schema feature i, so the packed value doubles as a pattern index in
// [0, kNumPatterns).
class FeatureVector {
 public:
  constexpr FeatureVector() = default;

  static constexpr FeatureVector from_bits(std::uint8_t bits) {
    FeatureVector v;
    v.bits_ = bits;
    return v;
  }

  // Throws a contract error unless `values` has exactly kNumFeatures
  // entries, each 0 or 1.
  static FeatureVector from_values(std::span<const int> values);

  constexpr bool operator[](int index) const {
    return (bits_ >> index) & 1u;
  }
  constexpr bool operator[](Feature f) const { return (*this)[index_of(f)]; }

  constexpr void set(int index, bool value) {
    const auto mask = static_cast<std::uint8_t>(1u << index);
    bits_ = value ? (bits_ | mask) : (bits_ & ~mask);
  }
  constexpr void set(Feature f, bool value) { set(index_of(f), value); }

  constexpr std::uint8_t bits() const { return bits_; }

  friend constexpr bool operator==(FeatureVector, FeatureVector) = default;

 private:
  std::uint8_t bits_ = 0;
};

}  // namespace covidgbm

#endif  // COVIDGBM_SCHEMA_H_
