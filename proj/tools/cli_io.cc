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

#include "cli_io.h"

#include <fstream>
#include <iterator>

#include "CLI11.hpp"
#include "covidgbm/error.h"
#include "json.hpp"

namespace covidgbm::cli {

void write_verified(const std::filesystem::path& path,
                    const std::string& content) {
  if (path.has_parent_path() && !path.parent_path().empty()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) {
      throw IoError("cannot create directory '" +
                    path.parent_path().string() + "': " + ec.message());
    }
  }
  {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw IoError("write to '" + path.string() + "' failed");
  }
  std::ifstream in(path, std::ios::binary);
  const std::string back((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());
  if (back != content) {
    throw IoError("verification of '" + path.string() + "' failed");
  }
}

RunManifest::RunManifest(std::string command, const CLI::App& sub)
    : command_(std::move(command)), start_(std::chrono::steady_clock::now()) {
  for (const CLI::Option* opt : sub.get_options()) {
    if (opt->get_lnames().empty()) continue;
    const std::string& name = opt->get_lnames().front();
    if (name == "help") continue;
    std::string value;
    if (opt->count() > 0) {
      for (const std::string& r : opt->results()) {
        if (!value.empty()) value += ",";
        value += r;
      }
    } else {
      value = opt->get_default_str();
    }
    parameters_.emplace_back(name, value);
  }
}

void RunManifest::add_input(const std::filesystem::path& path) {
  inputs_.push_back(path.string());
}

void RunManifest::add_output(const std::filesystem::path& path) {
  outputs_.push_back(path.string());
}

void RunManifest::write(const std::filesystem::path& path) {
  const std::chrono::duration<double> elapsed =
      std::chrono::steady_clock::now() - start_;
  nlohmann::ordered_json doc;
  doc["tool"] = "covidgbm";
  doc["tool_version"] = kToolVersion;
  doc["command"] = command_;
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  for (const auto& [name, value] : parameters_) params[name] = value;
  doc["parameters"] = params;
  doc["inputs"] = inputs_;
  doc["outputs"] = outputs_;
  if (has_seed_) {
    doc["seed"] = seed_;
  } else {
    doc["seed"] = nullptr;
  }
  doc["duration_seconds"] = elapsed.count();
  write_verified(path, doc.dump(2) + "\n");
}

}  // namespace covidgbm::cli
