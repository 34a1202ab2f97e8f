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

#ifndef COVIDGBM_TESTS_TESTING_EXPECT_ERROR_H_
#define COVIDGBM_TESTS_TESTING_EXPECT_ERROR_H_

#include <string>

#include "covidgbm/error.h"
#include "gtest/gtest.h"

// Asserts that `statement` throws covidgbm::Error of `error_kind` whose
// message contains `fragment`.
#define EXPECT_COVIDGBM_ERROR(statement, error_kind, fragment)              \
  do {                                                                      \
    bool thrown_ = false;                                                   \
    try {                                                                   \
      statement;                                                            \
    } catch (const ::covidgbm::Error& e_) {                                 \
      thrown_ = true;                                                       \
      EXPECT_EQ(e_.kind(), error_kind) << e_.what();                        \
      EXPECT_NE(std::string(e_.what()).find(fragment), std::string::npos)   \
          << e_.what();                                                     \
    }                                                                       \
    EXPECT_TRUE(thrown_) << "expected an error containing " << (fragment);  \
  } while (false)

#endif  // COVIDGBM_TESTS_TESTING_EXPECT_ERROR_H_
