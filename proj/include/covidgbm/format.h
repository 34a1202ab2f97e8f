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

#ifndef COVIDGBM_FORMAT_H_
#define COVIDGBM_FORMAT_H_

#include <optional>
#include <string>

namespace covidgbm {

// "%.17g" rendering: 17 significant digits, enough for any double to
// round-trip exactly through text.
std::string format_real(double value);

// Empty string for an undefined value.
std::string format_real(const std::optional<double>& value);

}  // namespace covidgbm

#endif  // COVIDGBM_FORMAT_H_
