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

#ifndef COVIDGBM_RANDOM_H_
#define COVIDGBM_RANDOM_H_

#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace covidgbm {

// Seeded pseudo-random source used by every randomized operation.
//
// The engine is MT19937-64 (std::mt19937_64, whose output sequence is fixed
// by the C++ standard). The standard distributions are implementation
// defined, so all derived draws below are computed by hand from the raw
// 64-bit words:
//   uniform01()  = (word >> 11) * 2^-53
//   below(n)     = rejection sampling on the top bits (Lemire's method)
//   shuffle()    = Fisher-Yates, swapping i with below(i + 1) for i = n-1..1
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform double in [0, 1).
  double uniform01() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  bool bernoulli(double p) { return uniform01() < p; }

  // Uniform integer in [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n);

  template <typename T>
  void shuffle(std::span<T> values) {
    for (std::size_t i = values.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(below(i));
      std::swap(values[i - 1], values[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

// Deterministic sub-seed for stream `index` of a master seed (SplitMix64
// finalizer over the pair). Used to give parallel work items independent
// streams whose values do not depend on scheduling.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

}  // namespace covidgbm

#endif  // COVIDGBM_RANDOM_H_
