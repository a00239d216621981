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

#ifndef CARRYOVER_DATA_CORPUS_IO_H_
#define CARRYOVER_DATA_CORPUS_IO_H_

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "carryover/dialogue/dialogue.h"

namespace carryover {

// Corpus files hold one JSON object per line, one dialogue per object.
// Field order and number formatting are fixed, so serialization is a pure
// function of the dialogue.

nlohmann::ordered_json dialogue_to_json(const Dialogue& dialogue);
// Parses and validates. Throws DataError.
Dialogue dialogue_from_json(const nlohmann::json& j);

std::string serialize_dialogue(const Dialogue& dialogue);
Dialogue parse_dialogue(std::string_view line);

void write_corpus(std::ostream& out, std::span<const Dialogue> dialogues);
// Blank lines are skipped. Errors name `source` and the line number.
std::vector<Dialogue> read_corpus(std::istream& in, const std::string& source = "<stream>");

void write_corpus(const std::filesystem::path& path, std::span<const Dialogue> dialogues);
std::vector<Dialogue> read_corpus(const std::filesystem::path& path);

}  // namespace carryover

#endif  // CARRYOVER_DATA_CORPUS_IO_H_
