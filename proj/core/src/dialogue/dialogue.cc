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

#include "carryover/dialogue/dialogue.h"

#include <cmath>

#include "carryover/error.h"

namespace carryover {

std::string_view speaker_name(Speaker s) { return s == Speaker::kUser ? "user" : "system"; }

Speaker parse_speaker(std::string_view name) {
  if (name == "user") return Speaker::kUser;
  if (name == "system") return Speaker::kSystem;
  throw DataError("unknown speaker '" + std::string(name) + "'");
}

double round_to_millis(double seconds) { return std::round(seconds * 1000.0) / 1000.0; }

std::vector<std::size_t> user_turn_indices(const Dialogue& dialogue) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < dialogue.turns.size(); ++i) {
    if (dialogue.turns[i].speaker == Speaker::kUser) out.push_back(i);
  }
  return out;
}

void validate_dialogue(const Dialogue& dialogue) {
  const std::string where = "dialogue '" + dialogue.id + "': ";
  std::size_t users = 0;
  for (std::size_t i = 0; i < dialogue.turns.size(); ++i) {
    const Turn& turn = dialogue.turns[i];
    const std::string at = where + "turn " + std::to_string(i) + ": ";
    if (turn.words.empty()) throw DataError(at + "empty token sequence");
    for (const auto& w : turn.words) {
      if (w.empty()) throw DataError(at + "empty token");
    }
    for (const auto& s : turn.slots) {
      if (s.key.empty() || s.value.empty()) throw DataError(at + "slot with empty key or value");
    }
    if (!std::isfinite(turn.wall_clock) || turn.wall_clock < 0) {
      throw DataError(at + "wall clock must be a nonnegative number");
    }
    if (i > 0) {
      const Turn& prev = dialogue.turns[i - 1];
      if (prev.speaker == turn.speaker) {
        throw DataError(at + "two consecutive " + std::string(speaker_name(turn.speaker)) +
                        " turns");
      }
      if (!(turn.wall_clock > prev.wall_clock)) {
        throw DataError(at + "wall clock does not strictly increase");
      }
    }
    if (turn.speaker == Speaker::kUser) ++users;
  }
  if (!dialogue.gold_states.empty() && dialogue.gold_states.size() != users) {
    throw DataError(where + std::to_string(dialogue.gold_states.size()) + " gold states for " +
                    std::to_string(users) + " user turns");
  }
  for (const auto& state : dialogue.gold_states) {
    for (const auto& s : state) {
      if (s.key.empty() || s.value.empty()) throw DataError(where + "gold slot with empty field");
    }
  }
}

}  // namespace carryover
