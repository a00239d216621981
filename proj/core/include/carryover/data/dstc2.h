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

#ifndef CARRYOVER_DATA_DSTC2_H_
#define CARRYOVER_DATA_DSTC2_H_

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "carryover/dialogue/dialogue.h"

namespace carryover {

// Goal slots kept from both speakers; requested slots are ignored.
inline const std::vector<std::string> kDstc2GoalKeys = {"food", "area", "pricerange", "name"};

struct Dstc2Options {
  // (split, file list) pairs. Each list names call directories relative to
  // the root or to root/data. When empty, the standard lists under
  // scripts/config are used if present; otherwise every directory holding a
  // log.json is ingested and split 80/10/10 by sorted position.
  std::vector<std::pair<std::string, std::filesystem::path>> file_lists;
  std::string domain = "restaurant";
  // User-to-user spacing used when a call lacks usable timestamps.
  double fallback_spacing = 10.0;
};

// One call directory (log.json and label.json). Throws IngestionError naming
// the offending file.
Dialogue ingest_dstc2_call(const std::filesystem::path& call_dir, const Dstc2Options& options = {});

// Throws IngestionError for a missing or empty tree.
std::vector<Dialogue> ingest_dstc2(const std::filesystem::path& root,
                                   const Dstc2Options& options = {});

}  // namespace carryover

#endif  // CARRYOVER_DATA_DSTC2_H_
