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

#ifndef COVIDGBM_TOOLS_CLI_IO_H_
#define COVIDGBM_TOOLS_CLI_IO_H_

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace CLI {
class App;
}  // namespace CLI

namespace covidgbm::cli {

inline constexpr const char* kToolVersion = "1.0.0";

// Writes `content` and reads it back; any mismatch is an I/O error.
void write_verified(const std::filesystem::path& path,
                    const std::string& content);

// Record of one command run, written next to its outputs.
class RunManifest {
 public:
  RunManifest(std::string command, const CLI::App& sub);

  void add_input(const std::filesystem::path& path);
  void add_output(const std::filesystem::path& path);
  void set_seed(std::uint64_t seed) { seed_ = seed; has_seed_ = true; }

  // Stamps the elapsed time and writes the manifest as JSON.
  void write(const std::filesystem::path& path);

 private:
  std::string command_;
  std::vector<std::pair<std::string, std::string>> parameters_;
  std::vector<std::string> inputs_;
  std::vector<std::string> outputs_;
  std::uint64_t seed_ = 0;
  bool has_seed_ = false;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace covidgbm::cli

#endif  // COVIDGBM_TOOLS_CLI_IO_H_
