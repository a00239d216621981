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

#include "carryover/model/config.h"

#include <string>

#include "carryover/error.h"

namespace carryover {

std::string_view variant_name(ModelVariant v) {
  switch (v) {
    case ModelVariant::kBaseline: return "baseline";
    case ModelVariant::kStm: return "stm";
    case ModelVariant::kItm: return "itm";
    case ModelVariant::kDtm: return "dtm";
    case ModelVariant::kTda: return "tda";
  }
  return "?";
}

ModelVariant parse_variant(std::string_view name) {
  for (auto v : {ModelVariant::kBaseline, ModelVariant::kStm, ModelVariant::kItm,
                 ModelVariant::kDtm, ModelVariant::kTda}) {
    if (variant_name(v) == name) return v;
  }
  throw ContractError("unknown model variant '" + std::string(name) + "'");
}

std::optional<MaskVariant> mask_variant_of(ModelVariant v) {
  switch (v) {
    case ModelVariant::kStm: return MaskVariant::kSimple;
    case ModelVariant::kItm: return MaskVariant::kIntent;
    case ModelVariant::kDtm: return MaskVariant::kDomain;
    default: return std::nullopt;
  }
}

void ModelConfig::validate() const {
  if (max_history == 0 || word_dim == 0 || hidden_dim == 0 || time_dim == 0 || decoder_dim == 0) {
    throw ContractError("model dimensions must be positive");
  }
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    throw ContractError("decision threshold must lie in [0, 1]");
  }
  if (!(init_range > 0.0)) throw ContractError("init_range must be positive");
  if (!(time_scale.ceiling > 0.0)) throw ContractError("time ceiling must be positive");
}

void to_json(nlohmann::json& j, const ModelConfig& c) {
  j = nlohmann::json{
      {"variant", variant_name(c.variant)},
      {"max_history", c.max_history},
      {"word_dim", c.word_dim},
      {"hidden_dim", c.hidden_dim},
      {"time_dim", c.time_dim},
      {"decoder_dim", c.decoder_dim},
      {"threshold", c.threshold},
      {"seed", c.seed},
      {"time_scale", time_scale_name(c.time_scale.kind)},
      {"time_ceiling", c.time_scale.ceiling},
      {"init_range", c.init_range},
  };
}

void from_json(const nlohmann::json& j, ModelConfig& c) {
  if (!j.is_object()) throw ContractError("model config must be an object");
  if (j.contains("variant")) c.variant = parse_variant(j.at("variant").get<std::string>());
  if (j.contains("max_history")) c.max_history = j.at("max_history").get<std::size_t>();
  if (j.contains("word_dim")) c.word_dim = j.at("word_dim").get<std::size_t>();
  if (j.contains("hidden_dim")) c.hidden_dim = j.at("hidden_dim").get<std::size_t>();
  if (j.contains("time_dim")) c.time_dim = j.at("time_dim").get<std::size_t>();
  if (j.contains("decoder_dim")) c.decoder_dim = j.at("decoder_dim").get<std::size_t>();
  if (j.contains("threshold")) c.threshold = j.at("threshold").get<double>();
  if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("time_scale")) {
    c.time_scale.kind = parse_time_scale(j.at("time_scale").get<std::string>());
  }
  if (j.contains("time_ceiling")) c.time_scale.ceiling = j.at("time_ceiling").get<double>();
  if (j.contains("init_range")) c.init_range = j.at("init_range").get<double>();
}

}  // namespace carryover
