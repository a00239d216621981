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

#include "manifest.h"

#include <openssl/evp.h>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "carryover/error.h"

namespace carryover::cli {
namespace fs = std::filesystem;

namespace {

std::string hex(const unsigned char* digest, std::size_t n) {
  std::string out;
  char buf[3];
  for (std::size_t i = 0; i < n; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", digest[i]);
    out += buf;
  }
  return out;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

std::string git_blob_hash(std::string_view content) {
  const std::string header = "blob " + std::to_string(content.size()) + '\0';
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  const bool ok = ctx && EVP_DigestInit_ex(ctx, EVP_sha1(), nullptr) == 1 &&
                  EVP_DigestUpdate(ctx, header.data(), header.size()) == 1 &&
                  EVP_DigestUpdate(ctx, content.data(), content.size()) == 1 &&
                  EVP_DigestFinal_ex(ctx, digest, &length) == 1;
  EVP_MD_CTX_free(ctx);
  if (!ok) throw Error("SHA-1 digest failed");
  return hex(digest, length);
}

std::string git_blob_hash_file(const fs::path& path) { return git_blob_hash(read_file(path)); }

std::string content_hash(const fs::path& path) {
  if (!fs::is_directory(path)) return git_blob_hash_file(path);
  std::vector<fs::path> files;
  for (const auto& e : fs::recursive_directory_iterator(path)) {
    if (e.is_regular_file()) files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  std::string listing;
  for (const auto& f : files) {
    listing += fs::relative(f, path).generic_string() + ' ' + git_blob_hash_file(f) + '\n';
  }
  return git_blob_hash(listing);
}

nlohmann::json RunManifest::to_json() const {
  nlohmann::json in = nlohmann::json::array();
  for (const auto& p : inputs) in.push_back({{"path", p.string()}, {"sha1", content_hash(p)}});
  nlohmann::json out = nlohmann::json::array();
  for (const auto& p : outputs) out.push_back(p.string());
  return {{"command", command},
          {"config", config_path},
          {"seed", seed},
          {"inputs", in},
          {"outputs", out},
          {"wall_time_seconds", wall_time_seconds},
          {"extra", extra}};
}

OutputGuard::~OutputGuard() {
  if (committed_) return;
  for (const auto& p : paths_) {
    std::error_code ec;
    fs::remove(p, ec);
  }
}

}  // namespace carryover::cli
