// Copyright 2026 The Carryover Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CARRYOVER_TOOLS_CLI_MANIFEST_H_
#define CARRYOVER_TOOLS_CLI_MANIFEST_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace carryover::cli {

// SHA-1 over "blob <size>\0<content>", as git computes object ids.
std::string git_blob_hash(std::string_view content);
std::string git_blob_hash_file(const std::filesystem::path& path);
// Files under a directory in sorted order, hashed as "<relative path> <blob>\n"
// lines; a single file is hashed as a blob.
std::string content_hash(const std::filesystem::path& path);

struct RunManifest {
  std::string command;
  std::string config_path;
  std::uint64_t seed = 0;
  std::vector<std::filesystem::path> inputs;
  std::vector<std::filesystem::path> outputs;
  double wall_time_seconds = 0.0;
  nlohmann::json extra = nlohmann::json::object();

  nlohmann::json to_json() const;
};

// Removes registered outputs unless commit() is called.
class OutputGuard {
 public:
  OutputGuard() = default;
  OutputGuard(const OutputGuard&) = delete;
  OutputGuard& operator=(const OutputGuard&) = delete;
  ~OutputGuard();

  void add(const std::filesystem::path& path) { paths_.push_back(path); }
  void commit() { committed_ = true; }

 private:
  std::vector<std::filesystem::path> paths_;
  bool committed_ = false;
};

}  // namespace carryover::cli

#endif  // CARRYOVER_TOOLS_CLI_MANIFEST_H_
