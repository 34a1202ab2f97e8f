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

#ifndef COVIDGBM_ERROR_H_
#define COVIDGBM_ERROR_H_

#include <stdexcept>
#include <string>

namespace covidgbm {

// Failure categories. The CLI maps each one onto a distinct exit code.
enum class ErrorKind {
  kParse,     // Malformed input document (CSV, JSON, config file).
  kContract,  // Well-formed input that violates an operation's contract.
  kIo,        // File system failure.
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

inline Error ParseError(const std::string& message) {
  return Error(ErrorKind::kParse, message);
}
inline Error ContractError(const std::string& message) {
  return Error(ErrorKind::kContract, message);
}
inline Error IoError(const std::string& message) {
  return Error(ErrorKind::kIo, message);
}

}  // namespace covidgbm

#endif  // COVIDGBM_ERROR_H_
