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

#ifndef CARRYOVER_MODEL_CONFIG_H_
#define CARRYOVER_MODEL_CONFIG_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>

#include <nlohmann/json.hpp>

#include "carryover/temporal/time_mask.h"

namespace carryover {

// Temporal conditioning applied by the carryover model.
//   kBaseline: recency one-hot only.
//   kStm/kItm/kDtm: time mask on the slot embedding, conditioned on nothing,
//     the current intent, or the current domain.
//   kTda: time-decay weighting of per-turn history encodings.
enum class ModelVariant { kBaseline, kStm, kItm, kDtm, kTda };

std::string_view variant_name(ModelVariant v);
ModelVariant parse_variant(std::string_view name);
// The time-mask variant behind kStm/kItm/kDtm; nullopt otherwise.
std::optional<MaskVariant> mask_variant_of(ModelVariant v);

struct ModelConfig {
  ModelVariant variant = ModelVariant::kBaseline;
  std::size_t max_history = 2;  // D
  std::size_t word_dim = 32;    // E
  std::size_t hidden_dim = 32;  // H
  std::size_t time_dim = 32;    // N_t
  std::size_t decoder_dim = 64;
  double threshold = 0.5;
  std::uint64_t seed = 1;
  TimeScale time_scale;
  double init_range = 0.1;

  // Throws ContractError on a nonpositive dimension or threshold outside [0, 1].
  void validate() const;

  std::size_t slot_dim() const { return 2 * word_dim; }
  std::size_t intent_dim() const { return word_dim; }
  std::size_t decoder_input_dim() const {
    return 3 * hidden_dim + slot_dim() + intent_dim() + max_history + 1;
  }
};

void to_json(nlohmann::json& j, const ModelConfig& c);
// Missing keys keep their defaults.
void from_json(const nlohmann::json& j, ModelConfig& c);

}  // namespace carryover

#endif  // CARRYOVER_MODEL_CONFIG_H_
