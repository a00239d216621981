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

#ifndef CARRYOVER_MODEL_CHECKPOINT_H_
#define CARRYOVER_MODEL_CHECKPOINT_H_

#include <filesystem>

#include <nlohmann/json.hpp>

#include "carryover/model/carryover_model.h"

namespace carryover {

inline constexpr const char* kCheckpointFormat = "carryover-checkpoint";
inline constexpr int kCheckpointVersion = 1;

// Versioned JSON container: config, vocabulary, domains, and every parameter
// with its shape. Doubles are written in shortest round-trip form, so a
// save/load cycle reproduces parameter values bit for bit.
nlohmann::json checkpoint_to_json(const CarryoverModel& model);
CarryoverModel checkpoint_from_json(const nlohmann::json& j);

void save_checkpoint(const CarryoverModel& model, const std::filesystem::path& path);
// Throws DataError on a missing file, wrong format/version, or shape mismatch.
CarryoverModel load_checkpoint(const std::filesystem::path& path);

}  // namespace carryover

#endif  // CARRYOVER_MODEL_CHECKPOINT_H_
