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

#include "carryover/model/checkpoint.h"

#include <fstream>

#include "carryover/error.h"

namespace carryover {

nlohmann::json checkpoint_to_json(const CarryoverModel& model) {
  nlohmann::json params = nlohmann::json::array();
  const auto& set = model.parameters();
  for (std::size_t i = 0; i < set.size(); ++i) {
    const auto& p = set[i];
    params.push_back({{"name", p.name}, {"shape", p.value.shape()}, {"data", p.value.values()}});
  }
  return {
      {"format", kCheckpointFormat},
      {"version", kCheckpointVersion},
      {"config", model.config()},
      {"vocabulary", model.vocabulary().tokens()},
      {"domains", model.domains()},
      {"parameters", std::move(params)},
  };
}

CarryoverModel checkpoint_from_json(const nlohmann::json& j) {
  try {
    if (j.value("format", "") != kCheckpointFormat) throw DataError("not a carryover checkpoint");
    if (j.value("version", 0) != kCheckpointVersion) {
      throw DataError("unsupported checkpoint version " + j.value("version", nlohmann::json()).dump());
    }
    ModelConfig config = j.at("config").get<ModelConfig>();
    Vocabulary vocab =
        Vocabulary::from_tokens(j.at("vocabulary").get<std::vector<std::string>>());
    CarryoverModel model(config, std::move(vocab),
                         j.at("domains").get<std::vector<std::string>>());
    const auto& stored = j.at("parameters");
    auto& set = model.parameters();
    if (stored.size() != set.size()) {
      throw DataError("checkpoint has " + std::to_string(stored.size()) + " parameters, model expects " +
                      std::to_string(set.size()));
    }
    for (const auto& entry : stored) {
      const auto name = entry.at("name").get<std::string>();
      numeric::Parameter* p = set.find(name);
      if (p == nullptr) throw DataError("unexpected parameter '" + name + "'");
      auto shape = entry.at("shape").get<numeric::Shape>();
      if (shape != p->value.shape()) {
        throw DataError("parameter '" + name + "' has shape " + numeric::shape_string(shape) +
                        ", expected " + numeric::shape_string(p->value.shape()));
      }
      p->value = numeric::Tensor(std::move(shape), entry.at("data").get<std::vector<double>>());
    }
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed checkpoint: ") + e.what());
  }
}

void save_checkpoint(const CarryoverModel& model, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write checkpoint " + path.string());
  out << checkpoint_to_json(model).dump() << '\n';
  if (!out) throw DataError("failed writing checkpoint " + path.string());
}

CarryoverModel load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open checkpoint " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw DataError("malformed checkpoint " + path.string() + ": " + e.what());
  }
  return checkpoint_from_json(j);
}

}  // namespace carryover
