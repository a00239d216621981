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

#ifndef CARRYOVER_DIALOGUE_CANDIDATES_H_
#define CARRYOVER_DIALOGUE_CANDIDATES_H_

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "carryover/dialogue/dialogue.h"
#include "carryover/numeric/tensor.h"

namespace carryover {

enum class Label { kNoCarryover, kCarryover };

inline double label_value(Label l) { return l == Label::kCarryover ? 1.0 : 0.0; }

// One occurrence of a slot in the context window of a user turn.
struct Candidate {
  Slot slot;
  std::size_t source_turn = 0;  // index into Dialogue::turns
  Speaker source_speaker = Speaker::kUser;
  // User turns in (source, current]; 0 iff the slot comes from the current turn.
  int distance_offset = 0;
  // current.wall_clock - source.wall_clock, seconds.
  double temporal_distance = 0.0;
  std::optional<Label> label;

  friend bool operator==(const Candidate&, const Candidate&) = default;
};

// The current user turn with up to `max_history` prior user and system turns,
// oldest first. Histories only contain turns strictly before the current one.
struct ContextWindow {
  std::size_t max_history = 0;
  std::size_t current_index = 0;  // index into Dialogue::turns
  Turn current;
  std::vector<Turn> user_history;
  std::vector<Turn> system_history;
  // Dialogue::turns indices parallel to the histories.
  std::vector<std::size_t> user_history_index;
  std::vector<std::size_t> system_history_index;
};

inline constexpr std::size_t kDefaultMaxHistory = 2;

// Window for user turn `t` (0-based among user turns). Throws IndexError.
ContextWindow make_context_window(const Dialogue& dialogue, std::size_t t,
                                  std::size_t max_history);

// Every slot occurrence from user and system turns whose distance offset is
// at most `max_history`, current turn included; occurrences are not merged.
// Ordered by source turn, then by slot position. Throws IndexError if `t` is
// not a user-turn index and ContractError if max_history == 0.
std::vector<Candidate> build_candidate_set(const Dialogue& dialogue, std::size_t t,
                                           std::size_t max_history);

// Carryover iff (key, value) is in `gold_state`.
std::vector<Candidate> label_candidates(std::vector<Candidate> candidates,
                                        const std::vector<Slot>& gold_state);

// Unit vector of length max_history + 1 with a one at `offset`.
numeric::Tensor recency_one_hot(int offset, int max_history);

}  // namespace carryover

#endif  // CARRYOVER_DIALOGUE_CANDIDATES_H_
