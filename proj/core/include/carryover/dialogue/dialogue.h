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

#ifndef CARRYOVER_DIALOGUE_DIALOGUE_H_
#define CARRYOVER_DIALOGUE_DIALOGUE_H_

#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace carryover {

enum class Speaker { kUser, kSystem };

std::string_view speaker_name(Speaker s);
Speaker parse_speaker(std::string_view name);

// Key-value pair produced by language understanding, e.g. city=issaquah.
struct Slot {
  std::string key;
  std::string value;

  friend auto operator<=>(const Slot&, const Slot&) = default;
};

struct Turn {
  Speaker speaker = Speaker::kUser;
  std::string act;
  std::vector<std::string> words;
  std::vector<Slot> slots;
  // Seconds since the start of the dialogue, millisecond resolution.
  double wall_clock = 0.0;
  std::string domain;

  friend bool operator==(const Turn&, const Turn&) = default;
};

struct Dialogue {
  std::string id;
  std::string domain;
  std::vector<Turn> turns;
  // One gold slot set per user turn, in user-turn order.
  std::vector<std::vector<Slot>> gold_states;
  // Optional split tag ("train", "dev", "test"); empty when unassigned.
  std::string split;
  // Ingestion notes such as "synthetic_timing".
  std::vector<std::string> flags;

  friend bool operator==(const Dialogue&, const Dialogue&) = default;
};

// Throws DataError describing the first violated invariant: nonempty slot
// keys/values and tokens, alternating speakers, strictly increasing wall
// clock, and one gold state per user turn (when gold states are present).
void validate_dialogue(const Dialogue& dialogue);

// Indices into dialogue.turns of the user turns, in order.
std::vector<std::size_t> user_turn_indices(const Dialogue& dialogue);

// Rounds seconds to the millisecond grid used for wall-clock values.
double round_to_millis(double seconds);

}  // namespace carryover

#endif  // CARRYOVER_DIALOGUE_DIALOGUE_H_
